"""Relations layer: a k²-tree over node pairs carrying edge identifiers.

Each leaf one of the base tree owns one entry in the auxiliary structures,
indexed by its levelwise leaf ordinal. In the static form a Multi bitmap flags
leaves holding several parallel edges, Last stores either the single edge id
or the end position of the leaf's run inside More, and More concatenates the
id runs of all multi-edge leaves in ordinal order. The run of a multi leaf
with ordinal i ends at Last[i] and starts right after the previous multi
leaf's run (position 1 when there is none).

The dynamic form replaces Multi/Last/More with one growable id list per leaf.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable

from .bits import BitSequence
from .errors import InputError, NotFoundError
from .k2 import DynK2Tree, K2Tree


class MultiEdgeK2Tree:
    """Static multigraph adjacency: base k²-tree plus Multi/Last/More."""

    __slots__ = ("base", "multi", "last", "more")

    def __init__(self, base: K2Tree, multi: BitSequence, last: list[int], more: list[int]):
        self.base = base
        self.multi = multi
        self.last = last
        self.more = more

    @classmethod
    def build(
        cls,
        n_nodes: int,
        triples: Iterable[tuple[int, int, int]],
        k: int = 2,
    ) -> "MultiEdgeK2Tree":
        """Build from (edge_id, origin, target) triples; edge ids must be unique."""
        by_pair: dict[tuple[int, int], list[int]] = {}
        seen = set()
        for eid, o, t in triples:
            if eid in seen:
                raise InputError(f"duplicate edge id {eid}")
            seen.add(eid)
            if not (1 <= o <= n_nodes and 1 <= t <= n_nodes):
                raise InputError(f"edge {eid} endpoint ({o}, {t}) outside 1..{n_nodes}")
            by_pair.setdefault((o, t), []).append(eid)
        base = K2Tree.build(n_nodes, by_pair.keys(), k)
        slots: list[list[int]] = [None] * len(by_pair)
        for (o, t), ids in by_pair.items():
            slots[base.leaf_ordinal(o, t) - 1] = sorted(ids)
        multi_bits = []
        last = []
        more = []
        for ids in slots:
            if len(ids) == 1:
                multi_bits.append(0)
                last.append(ids[0])
            else:
                multi_bits.append(1)
                more.extend(ids)
                last.append(len(more))
        return cls(base, BitSequence(multi_bits), last, more)

    @property
    def n_nodes(self) -> int:
        return self.base.n_logical

    @property
    def edge_count(self) -> int:
        singles = self.multi.n - self.multi.ones
        return singles + len(self.more)

    def _ids_at(self, ordinal: int) -> list[int]:
        """Edge ids stored at the leaf with the given 1-based ordinal."""
        if not self.multi.access(ordinal):
            return [self.last[ordinal - 1]]
        end = self.last[ordinal - 1]
        nth = self.multi.rank1(ordinal)
        if nth == 1:
            begin = 1
        else:
            prev = self.multi.select1(nth - 1)
            begin = self.last[prev - 1] + 1
        return self.more[begin - 1 : end]

    def edges_between(self, u: int, v: int) -> list[int]:
        """Ascending edge ids connecting u to v (empty when the cell is 0)."""
        n = self.base.n_logical
        if not (1 <= u <= n and 1 <= v <= n):
            raise IndexError(f"node pair ({u}, {v}) outside 1..{n}")
        pos = self.base._leaf_pos(u - 1, v - 1)
        if pos < 0:
            return []
        return self._ids_at(self.base.L.rank1(pos + 1))

    def neighbors_with_edges(
        self, u: int, c1: int, c2: int
    ) -> list[tuple[int, list[int]]]:
        """(target, edge ids) for every target in c1..c2 linked from u."""
        rank = self.base.L.rank1
        return [
            (col, self._ids_at(rank(q + 1)))
            for col, q in self.base.row_leaves(u, c1, c2)
        ]

    def neighbor_cols(self, u: int, c1: int, c2: int) -> list[int]:
        """Targets in c1..c2 linked from u, without decoding edge ids."""
        return [col for col, _ in self.base.row_leaves(u, c1, c2)]

    def reverse_with_edges(
        self, v: int, r1: int, r2: int
    ) -> list[tuple[int, list[int]]]:
        """(origin, edge ids) for every origin in r1..r2 linking to v."""
        rank = self.base.L.rank1
        return [
            (row, self._ids_at(rank(q + 1)))
            for row, q in self.base.col_leaves(v, r1, r2)
        ]

    def related_targets(self, u: int, elo: int, ehi: int) -> list[int]:
        """Targets of u connected through an edge id in [elo, ehi].

        Avoids materializing id lists: single-edge leaves are one comparison,
        multi leaves bisect their sorted run inside More.
        """
        n = self.base.n_logical
        lw = self.base.L._words
        lc = self.base.L._cum
        mw = self.multi._words
        last = self.last
        more = self.more
        out = []
        for col, q in self.base.row_leaves(u, 1, n):
            q += 1
            w = q >> 6
            rem = q & 63
            i = lc[w]
            if rem:
                i += (lw[w] & ((1 << rem) - 1)).bit_count()
            if (mw[(i - 1) >> 6] >> ((i - 1) & 63)) & 1:
                end = last[i - 1]
                nth = self.multi.rank1(i)
                begin = 1 if nth == 1 else last[self.multi.select1(nth - 1) - 1] + 1
                j = bisect_left(more, elo, begin - 1, end)
                if j < end and more[j] <= ehi:
                    out.append(col)
            elif elo <= last[i - 1] <= ehi:
                out.append(col)
        return out

    def all_triples(self) -> list[tuple[int, int, int]]:
        """Decode the full structure back to (edge_id, origin, target) triples."""
        n = self.base.n_logical
        out = []
        if n == 0:
            return out
        rank = self.base.L.rank1
        for r, c, q in self.base.range_leaves(1, n, 1, n):
            for eid in self._ids_at(rank(q + 1)):
                out.append((eid, r, c))
        return out


class DynMultiEdge:
    """Dynamic multigraph adjacency: DynK2Tree plus per-leaf edge id lists."""

    __slots__ = ("base", "lists")

    def __init__(self, k: int = 2):
        self.base = DynK2Tree(k=k)
        self.lists: list[list[int]] = []

    @property
    def edge_count(self) -> int:
        return sum(len(ids) for ids in self.lists)

    def _ensure_capacity(self, node: int):
        while self.base.n < node:
            self.base.grow()

    def add_edge(self, eid: int, u: int, v: int):
        """Record edge eid from u to v, setting the base cell when new."""
        if u < 1 or v < 1:
            raise IndexError(f"node pair ({u}, {v}) must be positive")
        self._ensure_capacity(max(u, v))
        ordinal, _, created = self.base.set(u, v)
        if created:
            self.lists.insert(ordinal - 1, [eid])
        else:
            ids = self.lists[ordinal - 1]
            if eid in ids:
                raise InputError(f"edge id {eid} already present at ({u}, {v})")
            ids.append(eid)

    def remove_edge(self, eid: int, u: int, v: int):
        """Delete edge eid from (u, v), clearing the cell if its list empties."""
        if not (1 <= u <= self.base.n and 1 <= v <= self.base.n):
            raise NotFoundError(f"edge {eid} not present at ({u}, {v})")
        pos = self.base._leaf_pos(u - 1, v - 1)
        if pos < 0:
            raise NotFoundError(f"edge {eid} not present at ({u}, {v})")
        ordinal = self.base.L.rank1(pos + 1)
        ids = self.lists[ordinal - 1]
        try:
            ids.remove(eid)
        except ValueError:
            raise NotFoundError(f"edge {eid} not present at ({u}, {v})") from None
        if not ids:
            del self.lists[ordinal - 1]
            self.base.clear(u, v)

    def edges_between(self, u: int, v: int) -> list[int]:
        if not (1 <= u <= self.base.n and 1 <= v <= self.base.n):
            return []
        pos = self.base._leaf_pos(u - 1, v - 1)
        if pos < 0:
            return []
        return sorted(self.lists[self.base.L.rank1(pos + 1) - 1])

    def neighbors_with_edges(
        self, u: int, c1: int, c2: int
    ) -> list[tuple[int, list[int]]]:
        c2 = min(c2, self.base.n)
        if u > self.base.n or c1 > c2:
            return []
        rank = self.base.L.rank1
        return [
            (col, sorted(self.lists[rank(q + 1) - 1]))
            for col, q in self.base.row_leaves(u, c1, c2)
        ]

    def neighbor_cols(self, u: int, c1: int, c2: int) -> list[int]:
        c2 = min(c2, self.base.n)
        if u > self.base.n or c1 > c2:
            return []
        return [col for col, _ in self.base.row_leaves(u, c1, c2)]

    def reverse_with_edges(
        self, v: int, r1: int, r2: int
    ) -> list[tuple[int, list[int]]]:
        r2 = min(r2, self.base.n)
        if v > self.base.n or r1 > r2:
            return []
        rank = self.base.L.rank1
        return [
            (row, sorted(self.lists[rank(q + 1) - 1]))
            for row, q in self.base.col_leaves(v, r1, r2)
        ]

    def all_triples(self) -> list[tuple[int, int, int]]:
        out = []
        rank = self.base.L.rank1
        n = self.base.n
        for r, c in self.base.range(1, n, 1, n):
            pos = self.base._leaf_pos(r - 1, c - 1)
            for eid in sorted(self.lists[rank(pos + 1) - 1]):
                out.append((eid, r, c))
        return out
