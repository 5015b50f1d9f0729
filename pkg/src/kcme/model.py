"""Instance model: masked binary matrices, Hamming distance, solution checking.

A problem instance is an n x m matrix over {0, 1, ?} together with a cluster
budget k and a radius budget d.  Rows are bit-packed as two integers each:
value bits and presence bits, with bit j encoding coordinate j.  Distance is
then a single popcount of ``presence & (value ^ center)``, restricted to any
coordinate subset by AND-ing in a coordinate mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

ZERO = "0"
ONE = "1"
MISSING = "?"


class InstanceFormatError(ValueError):
    """Malformed instance or solution text; the message carries a line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SolutionStructureError(ValueError):
    """A solution that is structurally broken (as opposed to merely infeasible)."""


def bits_from_partial(row: str) -> tuple[int, int]:
    """Pack a string over {0,1,?} into (value bits, presence bits)."""
    values = 0
    present = 0
    for j, ch in enumerate(row):
        if ch == ONE:
            values |= 1 << j
            present |= 1 << j
        elif ch == ZERO:
            present |= 1 << j
        elif ch != MISSING:
            raise ValueError(f"illegal character {ch!r}")
    return values, present


def partial_to_str(values: int, present: int, m: int) -> str:
    return "".join(
        (ONE if values >> j & 1 else ZERO) if present >> j & 1 else MISSING
        for j in range(m)
    )


def bits_from_binary(s: str) -> int:
    """Pack a string over {0,1} into value bits (bit j = coordinate j)."""
    bits = 0
    for j, ch in enumerate(s):
        if ch == ONE:
            bits |= 1 << j
        elif ch != ZERO:
            raise ValueError(f"illegal character {ch!r}")
    return bits


def binary_to_str(bits: int, m: int) -> str:
    return "".join(ONE if bits >> j & 1 else ZERO for j in range(m))


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for j in indices:
        mask |= 1 << j
    return mask


@dataclass(frozen=True)
class Instance:
    """A masked binary matrix with cluster budget k and radius budget d.

    ``values[i]`` and ``present[i]`` encode row i; value bits at missing
    positions are always zero, so equal instances compare equal.
    """

    k: int
    d: int
    n: int
    m: int
    values: tuple[int, ...]
    present: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("instance needs at least one row and one coordinate")
        if self.k < 1:
            raise ValueError("cluster budget k must be positive")
        if self.d < 0:
            raise ValueError("radius budget d must be non-negative")
        if len(self.values) != self.n or len(self.present) != self.n:
            raise ValueError("row arrays must have exactly n entries")
        full = self.coord_mask
        for i in range(self.n):
            if self.present[i] & ~full or self.values[i] & ~self.present[i]:
                raise ValueError(f"row {i} has bits outside its mask")

    @classmethod
    def from_rows(cls, rows: Iterable[str], k: int, d: int) -> "Instance":
        rows = list(rows)
        if not rows:
            raise ValueError("instance needs at least one row")
        m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise ValueError("rows must all have the same length")
        packed = [bits_from_partial(r) for r in rows]
        values = tuple(v for v, _ in packed)
        present = tuple(p for _, p in packed)
        return cls(k=k, d=d, n=len(rows), m=m, values=values, present=present)

    @property
    def coord_mask(self) -> int:
        return (1 << self.m) - 1

    def row(self, i: int) -> str:
        return partial_to_str(self.values[i], self.present[i], self.m)

    def rows(self) -> list[str]:
        return [self.row(i) for i in range(self.n)]

    @property
    def present_cells(self) -> int:
        return sum(p.bit_count() for p in self.present)


def hamming_restricted(row_values: int, row_present: int, center: int, coords: int) -> int:
    """Mismatches between a partial row and a binary center on a coordinate set.

    Missing positions never contribute.  ``coords`` is a bitmask; pass the
    instance's ``coord_mask`` for the full coordinate set.
    """
    return (row_present & coords & (row_values ^ center)).bit_count()


@dataclass(frozen=True)
class Solution:
    """k binary centers plus a per-row cluster assignment (0-based internally)."""

    centers: tuple[int, ...]
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    row: int
    cluster: int
    distance: int


def verify_solution(inst: Instance, sol: Solution) -> list[Violation]:
    """Check every row against its assigned center on all m coordinates.

    Returns the (possibly empty) list of rows whose distance exceeds d; an
    empty list means the solution is valid.  Structural defects, distinct
    from infeasibility, raise ``SolutionStructureError``.
    """
    if len(sol.centers) != inst.k:
        raise SolutionStructureError(
            f"expected {inst.k} centers, got {len(sol.centers)}"
        )
    full = inst.coord_mask
    for j, c in enumerate(sol.centers):
        if c & ~full:
            raise SolutionStructureError(f"center {j + 1} is longer than m={inst.m}")
    if len(sol.assignment) != inst.n:
        raise SolutionStructureError(
            f"assignment covers {len(sol.assignment)} rows, expected {inst.n}"
        )
    for i, cl in enumerate(sol.assignment):
        if not 0 <= cl < inst.k:
            raise SolutionStructureError(
                f"row {i} assigned to cluster {cl + 1}, outside 1..{inst.k}"
            )
    violations = []
    for i, cl in enumerate(sol.assignment):
        dist = hamming_restricted(inst.values[i], inst.present[i], sol.centers[cl], full)
        if dist > inst.d:
            violations.append(Violation(row=i, cluster=cl, distance=dist))
    return violations


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("#"):
            continue
        yield lineno, raw


def parse_instance(text: str) -> Instance:
    """Parse the instance file format.

    Line 1: ``k d``; line 2: ``n m``; then n rows over {0,1,?}.  Lines that
    begin with '#' are comments and skipped; line numbers in errors refer to
    the physical input.
    """
    lines = _content_lines(text)

    def next_line(what: str) -> tuple[int, str]:
        try:
            return next(lines)
        except StopIteration:
            raise InstanceFormatError(text.count("\n") + 1, f"missing {what}") from None

    lineno, header = next_line("'k d' header")
    parts = header.split()
    if len(parts) != 2:
        raise InstanceFormatError(lineno, f"malformed header {header!r}, expected 'k d'")
    try:
        k, d = int(parts[0]), int(parts[1])
    except ValueError:
        raise InstanceFormatError(lineno, f"malformed header {header!r}, expected 'k d'") from None
    if k < 1 or d < 0:
        raise InstanceFormatError(lineno, f"need k >= 1 and d >= 0, got k={k} d={d}")

    lineno, dims = next_line("'n m' header")
    parts = dims.split()
    if len(parts) != 2:
        raise InstanceFormatError(lineno, f"malformed header {dims!r}, expected 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise InstanceFormatError(lineno, f"malformed header {dims!r}, expected 'n m'") from None
    if n < 1 or m < 1:
        raise InstanceFormatError(lineno, f"need n >= 1 and m >= 1, got n={n} m={m}")

    values = []
    present = []
    for _ in range(n):
        lineno, row = next_line(f"row {len(values) + 1} of {n}")
        if len(row) != m:
            raise InstanceFormatError(lineno, f"row length {len(row)} differs from m={m}")
        for j, ch in enumerate(row):
            if ch not in (ZERO, ONE, MISSING):
                raise InstanceFormatError(lineno, f"illegal character {ch!r} at column {j + 1}")
        v, p = bits_from_partial(row)
        values.append(v)
        present.append(p)

    for lineno, extra in lines:
        if extra.strip():
            raise InstanceFormatError(lineno, f"unexpected content after {n} rows")

    return Instance(k=k, d=d, n=n, m=m, values=tuple(values), present=tuple(present))


def serialize_instance(inst: Instance) -> str:
    """Normalized file form; parse followed by serialize is a fixed point."""
    out = [f"{inst.k} {inst.d}", f"{inst.n} {inst.m}"]
    out.extend(inst.row(i) for i in range(inst.n))
    return "\n".join(out) + "\n"


def parse_solution(text: str, inst: Instance) -> Solution:
    """Parse a solution file: k center lines, then one line of n 1-based indices."""
    lines = _content_lines(text)

    def next_line(what: str) -> tuple[int, str]:
        try:
            return next(lines)
        except StopIteration:
            raise InstanceFormatError(text.count("\n") + 1, f"missing {what}") from None

    centers = []
    for j in range(inst.k):
        lineno, row = next_line(f"center {j + 1} of {inst.k}")
        if len(row) != inst.m:
            raise InstanceFormatError(lineno, f"center length {len(row)} differs from m={inst.m}")
        try:
            centers.append(bits_from_binary(row))
        except ValueError as exc:
            raise InstanceFormatError(lineno, str(exc)) from None

    lineno, assign_line = next_line("assignment line")
    parts = assign_line.split()
    if len(parts) != inst.n:
        raise InstanceFormatError(lineno, f"assignment has {len(parts)} entries, expected {inst.n}")
    assignment = []
    for tok in parts:
        try:
            cl = int(tok)
        except ValueError:
            raise InstanceFormatError(lineno, f"bad cluster index {tok!r}") from None
        if not 1 <= cl <= inst.k:
            raise InstanceFormatError(lineno, f"cluster index {cl} outside 1..{inst.k}")
        assignment.append(cl - 1)

    return Solution(centers=tuple(centers), assignment=tuple(assignment))


def serialize_solution(sol: Solution, m: int) -> str:
    """Solution file form: k center lines, then 1-based cluster indices."""
    out = [binary_to_str(c, m) for c in sol.centers]
    out.append(" ".join(str(cl + 1) for cl in sol.assignment))
    return "\n".join(out) + "\n"
