"""Seeded random instances with a planted clustering and bounded cover size.

Every row is a copy of one of k planted centers with at most ``flip_max``
present positions flipped, so the planted assignment stays within radius d.
Cells outside the chosen cover rows and cover coordinates are masked out,
which caps the incidence graph's vertex cover at ``vc`` by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Instance, mask_from_indices


@dataclass(frozen=True)
class GenParams:
    """Generator knobs; ``split`` is the number of cover rows, the remaining
    ``vc - split`` cover slots go to coordinates."""

    n: int
    m: int
    k: int
    d: int
    vc: int
    split: int
    flip_max: int
    seed: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.k < 1:
            raise ValueError("need n >= 1, m >= 1, k >= 1")
        if self.d < 0:
            raise ValueError("radius budget d must be non-negative")
        if not 0 <= self.split <= min(self.vc, self.n):
            raise ValueError(f"split must lie in [0, min(vc, n)] = [0, {min(self.vc, self.n)}]")
        if not 0 <= self.vc - self.split <= self.m:
            raise ValueError(f"vc - split must lie in [0, m] = [0, {self.m}]")
        if not 0 <= self.flip_max <= self.d:
            raise ValueError("flip_max must lie in [0, d]")


def gen_instance(params: GenParams) -> Instance:
    """Deterministic for a fixed seed; the result is always feasible."""
    rng = random.Random(params.seed)
    n, m, k = params.n, params.m, params.k
    centers = [rng.getrandbits(m) for _ in range(k)]
    cover_rows = set(rng.sample(range(n), params.split))
    cover_coords = rng.sample(range(m), params.vc - params.split)
    coord_mask = mask_from_indices(cover_coords)
    full = (1 << m) - 1

    values = []
    present = []
    for r in range(n):
        planted = centers[rng.randrange(k)]
        row_mask = full if r in cover_rows else coord_mask
        spots = [c for c in range(m) if row_mask >> c & 1]
        flips = rng.randint(0, min(params.flip_max, len(spots)))
        flipped = planted
        for c in rng.sample(spots, flips):
            flipped ^= 1 << c
        values.append(flipped & row_mask)
        present.append(row_mask)
    return Instance(
        k=k, d=params.d, n=n, m=m, values=tuple(values), present=tuple(present)
    )
