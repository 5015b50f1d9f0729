"""Exhaustive ground-truth solvers for desk-scale inputs.

These deliberately share nothing with the main solver beyond the packed
Hamming distance primitive, so agreement between the two paths is evidence,
not tautology.  Every oracle refuses inputs beyond its size guard rather
than truncating.
"""

from __future__ import annotations

from itertools import combinations

from .fpt import Decision
from .maskgraph import Cover, MaskGraph
from .model import Instance, Solution, hamming_restricted
from .nucs import NucsInstance

MAX_SOLVE_BITS = 24
MAX_NUCS_LEN = 20
MAX_VC_VERTICES = 20


class OracleSizeError(ValueError):
    """Input exceeds the exhaustive-search guard."""


def _reverse_bits(code: int, width: int) -> int:
    out = 0
    for j in range(width):
        if code >> (width - 1 - j) & 1:
            out |= 1 << j
    return out


def brute_force_solve(inst: Instance) -> Decision:
    """Try all 2**(k*m) center tuples; rows go to the smallest fitting center."""
    bits = inst.k * inst.m
    if bits > MAX_SOLVE_BITS:
        raise OracleSizeError(f"k*m = {bits} exceeds the guard of {MAX_SOLVE_BITS} bits")
    full = inst.coord_mask
    n, k, m, d = inst.n, inst.k, inst.m, inst.d
    for code in range(1 << bits):
        centers = tuple((code >> (j * m)) & full for j in range(k))
        assignment = []
        for i in range(n):
            for j in range(k):
                if hamming_restricted(inst.values[i], inst.present[i], centers[j], full) <= d:
                    assignment.append(j)
                    break
            else:
                break
        if len(assignment) == n:
            return Decision(True, Solution(centers=centers, assignment=tuple(assignment)))
    return Decision(False, None)


def brute_force_nucs(inst: NucsInstance) -> int | None:
    """Smallest feasible center in string order over all 2**length candidates."""
    if inst.length > MAX_NUCS_LEN:
        raise OracleSizeError(f"length {inst.length} exceeds the guard of {MAX_NUCS_LEN}")
    full = (1 << inst.length) - 1
    for code in range(1 << inst.length):
        # Candidates ascend in string order: coordinate 0 is the most
        # significant digit of the code.
        center = _reverse_bits(code, inst.length)
        if all(
            hamming_restricted(inst.values[i], inst.present[i], center, full) <= inst.budgets[i]
            for i in range(inst.p)
        ):
            return center
    return None


def brute_force_vc(g: MaskGraph) -> Cover:
    """Minimum vertex cover by subset search, smallest set in index order.

    Vertices are indexed rows first (0..n-1), then coordinates (n..n+m-1);
    subsets of each size are tried in lexicographic order, so the first hit
    is canonical.
    """
    n_vertices = g.n_rows + g.n_coords
    if n_vertices > MAX_VC_VERTICES:
        raise OracleSizeError(
            f"{n_vertices} vertices exceed the guard of {MAX_VC_VERTICES}"
        )
    edges = list(g.edges())
    covers_by_vertex = []
    for r in range(g.n_rows):
        covers_by_vertex.append(sum(1 << e for e, (er, _) in enumerate(edges) if er == r))
    for c in range(g.n_coords):
        covers_by_vertex.append(sum(1 << e for e, (_, ec) in enumerate(edges) if ec == c))
    all_edges = (1 << len(edges)) - 1

    for size in range(n_vertices + 1):
        for combo in combinations(range(n_vertices), size):
            hit = 0
            for v in combo:
                hit |= covers_by_vertex[v]
            if hit == all_edges:
                return Cover(
                    rows=frozenset(v for v in combo if v < g.n_rows),
                    coords=frozenset(v - g.n_rows for v in combo if v >= g.n_rows),
                )
    raise AssertionError("the full vertex set always covers")
