"""Row-coordinate incidence graph, minimum vertex cover, cover decomposition.

The graph has one vertex per row and one per coordinate, with an edge for
every present cell.  It is bipartite by construction, so an exact minimum
vertex cover comes from a maximum matching plus alternating reachability,
at polynomial cost.  Scan order is fixed (rows ascending, coordinates
ascending) so a given instance always yields the same cover.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .model import Instance, iter_bits, mask_from_indices

_UNMATCHED = -1
_INF = float("inf")


class NotACoverError(ValueError):
    """The supplied vertex set leaves at least one present cell uncovered."""


@dataclass(frozen=True)
class MaskGraph:
    """Bipartite incidence graph; ``row_adj[r]`` has bit c set per edge (r, c)."""

    n_rows: int
    n_coords: int
    row_adj: tuple[int, ...]

    def edges(self) -> Iterator[tuple[int, int]]:
        for r, adj in enumerate(self.row_adj):
            for c in iter_bits(adj):
                yield r, c

    @property
    def edge_count(self) -> int:
        return sum(adj.bit_count() for adj in self.row_adj)


class Cover(NamedTuple):
    rows: frozenset[int]
    coords: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.rows) + len(self.coords)


def build_graph(inst: Instance) -> MaskGraph:
    """Edges are exactly the present cells; all-missing rows/coordinates stay as isolated vertices."""
    return MaskGraph(n_rows=inst.n, n_coords=inst.m, row_adj=inst.present)


def max_matching(g: MaskGraph) -> tuple[list[int], list[int]]:
    """Hopcroft-Karp maximum matching; returns (row partner, coord partner) arrays."""
    pair_row = [_UNMATCHED] * g.n_rows
    pair_coord = [_UNMATCHED] * g.n_coords
    dist: list[float] = [0.0] * g.n_rows

    def bfs() -> bool:
        queue: deque[int] = deque()
        for r in range(g.n_rows):
            if pair_row[r] == _UNMATCHED:
                dist[r] = 0
                queue.append(r)
            else:
                dist[r] = _INF
        found = _INF
        while queue:
            r = queue.popleft()
            if dist[r] >= found:
                continue
            for c in iter_bits(g.row_adj[r]):
                nxt = pair_coord[c]
                if nxt == _UNMATCHED:
                    if found == _INF:
                        found = dist[r] + 1
                elif dist[nxt] == _INF:
                    dist[nxt] = dist[r] + 1
                    queue.append(nxt)
        return found != _INF

    def dfs(r: int) -> bool:
        for c in iter_bits(g.row_adj[r]):
            nxt = pair_coord[c]
            if nxt == _UNMATCHED or (dist[nxt] == dist[r] + 1 and dfs(nxt)):
                pair_row[r] = c
                pair_coord[c] = r
                return True
        dist[r] = _INF
        return False

    while bfs():
        for r in range(g.n_rows):
            if pair_row[r] == _UNMATCHED:
                dfs(r)
    return pair_row, pair_coord


def is_cover(g: MaskGraph, cover: Cover) -> bool:
    coord_mask = mask_from_indices(cover.coords)
    return all(
        r in cover.rows or not (g.row_adj[r] & ~coord_mask) for r in range(g.n_rows)
    )


def min_vertex_cover(g: MaskGraph) -> Cover:
    """Exact minimum cover via the alternating-reachability construction.

    Starting from the unmatched row-side vertices, walk non-matching edges
    row->coordinate and matching edges coordinate->row; the cover is the
    unreached rows plus the reached coordinates.  Its size always equals the
    maximum matching size; that identity is re-checked on every call.
    """
    pair_row, pair_coord = max_matching(g)
    matched = sum(1 for c in pair_row if c != _UNMATCHED)

    reached_rows = [False] * g.n_rows
    reached_coords = [False] * g.n_coords
    queue: deque[int] = deque()
    for r in range(g.n_rows):
        if pair_row[r] == _UNMATCHED:
            reached_rows[r] = True
            queue.append(r)
    while queue:
        r = queue.popleft()
        for c in iter_bits(g.row_adj[r]):
            if pair_row[r] == c or reached_coords[c]:
                continue
            reached_coords[c] = True
            nxt = pair_coord[c]
            if nxt != _UNMATCHED and not reached_rows[nxt]:
                reached_rows[nxt] = True
                queue.append(nxt)

    cover = Cover(
        rows=frozenset(r for r in range(g.n_rows) if not reached_rows[r]),
        coords=frozenset(c for c in range(g.n_coords) if reached_coords[c]),
    )
    if cover.size != matched or not is_cover(g, cover):
        raise AssertionError(
            f"cover construction broke the matching identity: |cover|={cover.size}, matching={matched}"
        )
    return cover


@dataclass(frozen=True)
class CoverDecomposition:
    """A vertex cover split into its row and coordinate parts, plus what they induce.

    ``cover_rows`` may carry present entries anywhere; ``short_rows`` are the
    remaining rows with at least one present entry, which the cover property
    confines to ``cover_coords``.  Rows with no present entries appear in
    neither list.
    """

    cover_rows: tuple[int, ...]
    cover_coords: tuple[int, ...]
    free_coords: tuple[int, ...]
    short_rows: tuple[int, ...]
    vc: int
    cs_mask: int
    free_mask: int


def decompose(inst: Instance, cover: Cover) -> CoverDecomposition:
    """Split the instance along a vertex cover; rejects sets that are not covers."""
    cs_mask = mask_from_indices(cover.coords)
    for r in range(inst.n):
        if r not in cover.rows and inst.present[r] & ~cs_mask:
            bad = next(iter_bits(inst.present[r] & ~cs_mask))
            raise NotACoverError(f"present cell ({r}, {bad}) has neither endpoint in the cover")
    free_mask = inst.coord_mask & ~cs_mask
    short = tuple(
        r for r in range(inst.n) if r not in cover.rows and inst.present[r]
    )
    return CoverDecomposition(
        cover_rows=tuple(sorted(cover.rows)),
        cover_coords=tuple(sorted(cover.coords)),
        free_coords=tuple(sorted(iter_bits(free_mask))),
        short_rows=short,
        vc=cover.size,
        cs_mask=cs_mask,
        free_mask=free_mask,
    )
