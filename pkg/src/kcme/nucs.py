"""Binary non-uniform closest string via bounded integer feasibility.

Given p partial strings and a distance budget per string, decide whether one
binary center satisfies every budget.  Columns showing the same symbol
pattern across the p strings are interchangeable, so one bounded integer
variable per pattern (how many of its columns receive a one) captures the
whole search space: string i pays x_t for every pattern t where it holds a
zero and n_t - x_t where it holds a one.  Feasibility of the resulting
system of <= constraints is decided by depth-first search over the variables
in canonical pattern order with interval pruning, which makes the returned
point the lexicographically smallest feasible one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import binary_to_str, bits_from_partial, partial_to_str

SYM_ZERO = 0
SYM_ONE = 1
SYM_MISSING = 2


@dataclass(frozen=True)
class NucsInstance:
    """p partial strings of a common length with per-string budgets."""

    p: int
    length: int
    values: tuple[int, ...]
    present: tuple[int, ...]
    budgets: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.p or len(self.present) != self.p:
            raise ValueError("need exactly p packed strings")
        if len(self.budgets) != self.p:
            raise ValueError("need exactly p budgets")
        if any(b < 0 for b in self.budgets):
            raise ValueError("budgets must be non-negative")

    @classmethod
    def from_strings(cls, strings: list[str], budgets: tuple[int, ...] | list[int]) -> "NucsInstance":
        length = len(strings[0]) if strings else 0
        if any(len(s) != length for s in strings):
            raise ValueError("strings must all have the same length")
        packed = [bits_from_partial(s) for s in strings]
        return cls(
            p=len(strings),
            length=length,
            values=tuple(v for v, _ in packed),
            present=tuple(p for _, p in packed),
            budgets=tuple(budgets),
        )

    def string(self, i: int) -> str:
        return partial_to_str(self.values[i], self.present[i], self.length)


@dataclass(frozen=True)
class ColumnTypeProfile:
    """Distinct column patterns, their multiplicities, and original positions.

    Patterns are tuples over {0=zero, 1=one, 2=missing}, one entry per
    string, sorted lexicographically; positions partition the columns.
    """

    types: tuple[tuple[int, ...], ...]
    counts: tuple[int, ...]
    positions: tuple[tuple[int, ...], ...]


def column_types(inst: NucsInstance) -> ColumnTypeProfile:
    by_type: dict[tuple[int, ...], list[int]] = {}
    for c in range(inst.length):
        t = tuple(
            (inst.values[i] >> c & 1) if inst.present[i] >> c & 1 else SYM_MISSING
            for i in range(inst.p)
        )
        by_type.setdefault(t, []).append(c)
    types = tuple(sorted(by_type))
    return ColumnTypeProfile(
        types=types,
        counts=tuple(len(by_type[t]) for t in types),
        positions=tuple(tuple(by_type[t]) for t in types),
    )


@dataclass(frozen=True)
class IlpSystem:
    """Normalized <= system: for each string i, sum_t coeffs[i][t] * x_t <= rhs[i].

    Variable t ranges over [0, bounds[t]].  Coefficients are +1 where the
    string holds a zero in the pattern, -1 where it holds a one, 0 where it
    is missing; rhs[i] is the budget minus the total count of one-columns.
    """

    bounds: tuple[int, ...]
    coeffs: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]


def build_ilp(inst: NucsInstance, profile: ColumnTypeProfile) -> IlpSystem:
    coeffs = []
    rhs = []
    for i in range(inst.p):
        row = []
        ones_total = 0
        for t, count in zip(profile.types, profile.counts):
            if t[i] == SYM_ZERO:
                row.append(1)
            elif t[i] == SYM_ONE:
                row.append(-1)
                ones_total += count
            else:
                row.append(0)
        coeffs.append(tuple(row))
        rhs.append(inst.budgets[i] - ones_total)
    return IlpSystem(bounds=profile.counts, coeffs=tuple(coeffs), rhs=tuple(rhs))


def ilp_feasible(sys: IlpSystem) -> tuple[int, ...] | None:
    """First feasible point in lexicographic order, or None.

    Depth-first search assigns variables in canonical order, values
    ascending.  A partial assignment is pruned as soon as some constraint
    cannot be met even when every remaining -1 variable goes to its bound
    and every +1 variable to zero, so the first completed leaf is the
    lexicographically smallest feasible point.
    """
    nvars = len(sys.bounds)
    nconstr = len(sys.rhs)
    if nconstr == 0:
        return (0,) * nvars

    # slack[i][v]: how much constraints i can still drop using variables v..
    slack = [[0] * (nvars + 1) for _ in range(nconstr)]
    for i in range(nconstr):
        for v in range(nvars - 1, -1, -1):
            gain = sys.bounds[v] if sys.coeffs[i][v] < 0 else 0
            slack[i][v] = slack[i][v + 1] + gain

    x = [0] * nvars

    def dfs(v: int, lhs: tuple[int, ...]) -> bool:
        if v == nvars:
            return True
        bound = sys.bounds[v]
        column = [sys.coeffs[i][v] for i in range(nconstr)]
        for val in range(bound + 1):
            nxt = tuple(lhs[i] + column[i] * val for i in range(nconstr))
            if all(nxt[i] - slack[i][v + 1] <= sys.rhs[i] for i in range(nconstr)):
                x[v] = val
                if dfs(v + 1, nxt):
                    return True
        return False

    if dfs(0, (0,) * nconstr):
        return tuple(x)
    return None


def reconstruct_center(profile: ColumnTypeProfile, x: tuple[int, ...]) -> int:
    """Witness center as a bitmask: per pattern, its first x_t columns get ones."""
    center = 0
    for positions, val in zip(profile.positions, x):
        for c in positions[:val]:
            center |= 1 << c
    return center


def nucs_solve(inst: NucsInstance) -> int | None:
    """Center bitmask meeting every budget, or None when no center exists.

    An empty instance (p = 0) is satisfied by the all-zero center.
    """
    profile = column_types(inst)
    sys = build_ilp(inst, profile)
    x = ilp_feasible(sys)
    if x is None:
        return None
    center = reconstruct_center(profile, x)
    full = (1 << inst.length) - 1
    for i in range(inst.p):
        got = (inst.present[i] & full & (inst.values[i] ^ center)).bit_count()
        if got > inst.budgets[i]:
            raise AssertionError(
                f"reconstructed center misses budget for string {i}: {got} > {inst.budgets[i]}"
            )
    return center


def nucs_solve_str(inst: NucsInstance) -> str | None:
    center = nucs_solve(inst)
    return None if center is None else binary_to_str(center, inst.length)
