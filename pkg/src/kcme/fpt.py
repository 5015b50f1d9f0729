"""Cover-parameterized exact decision procedure with witness output.

The search enumerates, over the cover coordinates, every grid of center
values for all k clusters (psi) and every cluster choice for the cover rows
(phi).  For each surviving pair it asks, per used cluster, whether one
binary string on the free coordinates fits every member row within its
leftover budget; that subproblem is a non-uniform closest string instance.
Rows outside the cover carry present entries only on the cover coordinates,
so they are placed greedily against psi alone.

Enumeration order is canonical (psi grids lexicographically, then phi
lexicographically over the cover rows in index order), which makes the
first witness found a deterministic function of the instance.
"""

from __future__ import annotations

import logging
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from itertools import product

from .maskgraph import CoverDecomposition, build_graph, decompose, min_vertex_cover
from .model import Instance, Solution, hamming_restricted, iter_bits, verify_solution
from .nucs import NucsInstance, nucs_solve

logger = logging.getLogger("kcme")

_MIN_PARALLEL_GRIDS = 4096


@dataclass(frozen=True)
class PartialAssignment:
    """Cluster choice per cover row (phi) and per-cluster center bits on the
    cover coordinates (psi, one bitmask per cluster, bits at true coordinate
    positions)."""

    phi: tuple[int, ...]
    psi: tuple[int, ...]


@dataclass(frozen=True)
class ClusterNucs:
    """Residual subproblem of one cluster: member rows and their string
    restrictions to the free coordinates, budgets already reduced by what
    each row spent on the cover coordinates."""

    cluster: int
    rows: tuple[int, ...]
    instance: NucsInstance


@dataclass(frozen=True)
class Decision:
    feasible: bool
    witness: Solution | None
    examined: int = 0


def _psi_masks(grid: tuple[int, ...], k: int, coords: tuple[int, ...]) -> tuple[int, ...]:
    s = len(coords)
    masks = []
    for j in range(k):
        bits = 0
        for t in range(s):
            if grid[j * s + t]:
                bits |= 1 << coords[t]
        masks.append(bits)
    return tuple(masks)


def _psi_from_code(code: int, k: int, coords: tuple[int, ...]) -> tuple[int, ...]:
    # Grid cell (cluster 0, smallest coordinate) sits in the most significant
    # bit, so ascending codes reproduce lexicographic grid order.
    s = len(coords)
    total = k * s
    masks = []
    for j in range(k):
        bits = 0
        for t in range(s):
            if code >> (total - 1 - (j * s + t)) & 1:
                bits |= 1 << coords[t]
        masks.append(bits)
    return tuple(masks)


def enumerate_partial(dec: CoverDecomposition, k: int):
    """All (phi, psi) pairs exactly once, psi outermost, both lexicographic.

    Yields 2**(k * |cover coords|) * k**|cover rows| assignments; validity is
    not filtered here.
    """
    s = len(dec.cover_coords)
    n_long = len(dec.cover_rows)
    for grid in product((0, 1), repeat=k * s):
        psi = _psi_masks(grid, k, dec.cover_coords)
        for phi in product(range(k), repeat=n_long):
            yield PartialAssignment(phi=phi, psi=psi)


def is_valid(pa: PartialAssignment, inst: Instance, dec: CoverDecomposition) -> bool:
    """Every cover row within d of its cluster's psi values on the cover coordinates."""
    return all(
        hamming_restricted(inst.values[r], inst.present[r], pa.psi[j], dec.cs_mask) <= inst.d
        for r, j in zip(dec.cover_rows, pa.phi)
    )


def _compact_free(inst: Instance, dec: CoverDecomposition, r: int) -> tuple[int, int]:
    values = 0
    present = 0
    for idx, c in enumerate(dec.free_coords):
        if inst.present[r] >> c & 1:
            present |= 1 << idx
            if inst.values[r] >> c & 1:
                values |= 1 << idx
    return values, present


def residual_budgets(
    pa: PartialAssignment, inst: Instance, dec: CoverDecomposition
) -> tuple[ClusterNucs, ...]:
    """One closest-string subproblem per cluster used by phi.

    A row assigned to cluster j may still spend d minus its cover-coordinate
    distance on the free coordinates.  Calling this on an invalid assignment
    is a contract violation.
    """
    if not is_valid(pa, inst, dec):
        raise ValueError("residual budgets are only defined for valid partial assignments")
    work = []
    for j in sorted(set(pa.phi)):
        rows = tuple(r for r, cl in zip(dec.cover_rows, pa.phi) if cl == j)
        budgets = tuple(
            inst.d - hamming_restricted(inst.values[r], inst.present[r], pa.psi[j], dec.cs_mask)
            for r in rows
        )
        packed = [_compact_free(inst, dec, r) for r in rows]
        work.append(
            ClusterNucs(
                cluster=j,
                rows=rows,
                instance=NucsInstance(
                    p=len(rows),
                    length=len(dec.free_coords),
                    values=tuple(v for v, _ in packed),
                    present=tuple(p for _, p in packed),
                    budgets=budgets,
                ),
            )
        )
    return tuple(work)


def assign_short_rows(
    psi: tuple[int, ...], dec: CoverDecomposition, inst: Instance
) -> tuple[int, ...] | None:
    """Each short row to the smallest cluster within d on the cover coordinates.

    Returns one cluster per entry of ``dec.short_rows``, or None when some
    short row fits no cluster.
    """
    out = []
    for r in dec.short_rows:
        for j in range(inst.k):
            if hamming_restricted(inst.values[r], inst.present[r], psi[j], dec.cs_mask) <= inst.d:
                out.append(j)
                break
        else:
            return None
    return tuple(out)


def _expand_free(bits: int, free_coords: tuple[int, ...]) -> int:
    full = 0
    for idx in iter_bits(bits):
        full |= 1 << free_coords[idx]
    return full


def _assemble(
    inst: Instance,
    dec: CoverDecomposition,
    psi: tuple[int, ...],
    phi: tuple[int, ...],
    shorts: tuple[int, ...],
    centers_free: dict[int, int],
) -> Solution:
    centers = []
    for j in range(inst.k):
        bits = psi[j]
        free = centers_free.get(j)
        if free:
            bits |= _expand_free(free, dec.free_coords)
        centers.append(bits)
    # Rows with no present entries default to the first cluster.
    assignment = [0] * inst.n
    for r, j in zip(dec.cover_rows, phi):
        assignment[r] = j
    for r, j in zip(dec.short_rows, shorts):
        assignment[r] = j
    return Solution(centers=tuple(centers), assignment=tuple(assignment))


def _row_grid_codes(code: int, k: int, s: int) -> list[int]:
    mask = (1 << s) - 1
    return [(code >> ((k - 1 - j) * s)) & mask for j in range(k)]


def _scan_block(
    inst: Instance,
    dec: CoverDecomposition,
    lo: int,
    hi: int,
    symmetry_pruning: bool,
) -> tuple[Solution | None, int]:
    """Scan psi grid codes [lo, hi); return the first full witness and the
    number of (phi, psi) pairs examined."""
    k, d = inst.k, inst.d
    s = len(dec.cover_coords)
    cs_mask = dec.cs_mask
    values, present = inst.values, inst.present
    cover_rows = dec.cover_rows
    compact = {r: _compact_free(inst, dec, r) for r in cover_rows}
    free_len = len(dec.free_coords)
    examined = 0

    for code in range(lo, hi):
        if symmetry_pruning and s:
            rows_code = _row_grid_codes(code, k, s)
            if any(a > b for a, b in zip(rows_code, rows_code[1:])):
                continue
        psi = _psi_from_code(code, k, dec.cover_coords)

        admissible = []
        for r in cover_rows:
            clusters = [
                j for j in range(k)
                if hamming_restricted(values[r], present[r], psi[j], cs_mask) <= d
            ]
            if not clusters:
                admissible = None
                break
            admissible.append(clusters)
        if admissible is None:
            continue

        shorts = assign_short_rows(psi, dec, inst)
        if shorts is None:
            continue

        memo: dict[tuple, int | None] = {}
        for phi in product(*admissible):
            examined += 1
            centers_free: dict[int, int] = {}
            feasible = True
            for j in sorted(set(phi)):
                members = tuple(
                    sorted(
                        compact[r]
                        + (d - hamming_restricted(values[r], present[r], psi[j], cs_mask),)
                        for r, cl in zip(cover_rows, phi)
                        if cl == j
                    )
                )
                if members in memo:
                    center = memo[members]
                else:
                    center = nucs_solve(
                        NucsInstance(
                            p=len(members),
                            length=free_len,
                            values=tuple(t[0] for t in members),
                            present=tuple(t[1] for t in members),
                            budgets=tuple(t[2] for t in members),
                        )
                    )
                    memo[members] = center
                if center is None:
                    feasible = False
                    break
                centers_free[j] = center
            if feasible:
                return _assemble(inst, dec, psi, phi, shorts, centers_free), examined
    return None, examined


def _check_witness(inst: Instance, sol: Solution) -> Solution:
    violations = verify_solution(inst, sol)
    if violations:
        raise AssertionError(f"internal witness failed verification: {violations}")
    return sol


def solve_vc_fpt(
    inst: Instance,
    *,
    symmetry_pruning: bool = False,
    workers: int = 1,
    deterministic: bool | None = None,
) -> Decision:
    """Decide whether k centers of radius d exist; on Yes, attach a witness.

    ``deterministic`` (the default when workers == 1) forces the canonical
    single-worker scan, whose witness is the first in enumeration order.
    With more workers the psi space is split into contiguous blocks solved
    in separate processes; the decision is identical, the witness merely
    valid.  ``symmetry_pruning`` restricts psi to grids whose cluster rows
    are in non-decreasing order, which is safe because any solution can be
    relabeled into that form.
    """
    if deterministic is None:
        deterministic = workers <= 1
    if deterministic:
        workers = 1

    if inst.d >= inst.m:
        # No row can exceed m mismatches, so any centers work.
        sol = Solution(centers=(0,) * inst.k, assignment=(0,) * inst.n)
        return Decision(True, _check_witness(inst, sol), 0)
    if inst.k >= inst.n:
        # Singleton clusters: each row is its own center with gaps as zeros.
        centers = inst.values + (0,) * (inst.k - inst.n)
        sol = Solution(centers=centers, assignment=tuple(range(inst.n)))
        return Decision(True, _check_witness(inst, sol), 0)

    dec = decompose(inst, min_vertex_cover(build_graph(inst)))
    total_grids = 1 << (inst.k * len(dec.cover_coords))
    logger.debug(
        "scan: %d psi grids, %d cover rows, bound %d pairs",
        total_grids,
        len(dec.cover_rows),
        total_grids * inst.k ** len(dec.cover_rows),
    )

    if workers <= 1 or total_grids < _MIN_PARALLEL_GRIDS:
        witness, examined = _scan_block(inst, dec, 0, total_grids, symmetry_pruning)
    else:
        step = -(-total_grids // workers)
        blocks = [(lo, min(lo + step, total_grids)) for lo in range(0, total_grids, step)]
        examined = 0
        witness = None
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_scan_block, inst, dec, lo, hi, symmetry_pruning): lo
                for lo, hi in blocks
            }
            pending = set(futures)
            while pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    sol, count = fut.result()
                    examined += count
                    if sol is not None and witness is None:
                        witness = sol
                if witness is not None:
                    for fut in pending:
                        fut.cancel()
                    break

    logger.debug("scan done: %d pairs examined", examined)
    if witness is None:
        return Decision(False, None, examined)
    return Decision(True, _check_witness(inst, witness), examined)
