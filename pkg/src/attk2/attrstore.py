"""Attribute storage: sparse value lists and dense value matrices.

A sparse attribute of a label is a value list indexed by ``id - limit + 1``
(limit being the label's lowest id) with a secondary permutation sorted by
value, so equality lookups are binary searches. Dense attributes of one kind
share a single k²-tree whose rows are element ids and whose columns are value
columns, grouped in per-attribute blocks; a one at (i, j) means element i
takes the j-th column's value. Absent values are represented as None, which
sorts after every real value in the secondary index.

The dynamic counterparts keep one growable list per (label, attribute),
indexed by each element's rank within its label, and one dynamic
k²-tree per dense attribute with columns appended in first-seen order.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort

from .errors import InputError
from .k2 import DynK2Tree, K2Tree


class SparseAttribute:
    """Values of one sparse attribute over one label's contiguous id range."""

    __slots__ = ("label", "att", "limit", "values", "lex_index", "present")

    def __init__(self, label: str, att: str, limit: int, values: list, lex_index=None):
        self.label = label
        self.att = att
        self.limit = limit
        self.values = values
        if lex_index is None:
            filled = sorted(
                (i for i, v in enumerate(values) if v is not None),
                key=lambda i: values[i].encode(),
            )
            absent = [i for i, v in enumerate(values) if v is None]
            lex_index = filled + absent
        self.lex_index = lex_index
        # value-holding prefix length of lex_index; absents sort last
        self.present = sum(1 for v in values if v is not None)

    def get(self, elem_id: int):
        pos = elem_id - self.limit
        if not 0 <= pos < len(self.values):
            raise IndexError(
                f"id {elem_id} outside range of {self.label}.{self.att}"
            )
        return self.values[pos]

    def select(self, value: str) -> list[int]:
        """Ascending ids whose value equals `value` (bytewise comparison)."""
        key = value.encode()
        idx = self.lex_index
        vals = self.values
        n = self.present
        lo, hi = 0, n
        while lo < hi:
            mid = (lo + hi) >> 1
            if vals[idx[mid]].encode() < key:
                lo = mid + 1
            else:
                hi = mid
        out = []
        while lo < n and vals[idx[lo]] == value:
            out.append(idx[lo] + self.limit)
            lo += 1
        out.sort()
        return out


class DenseAttributeMatrix:
    """All dense attributes of one element kind, packed into one k²-tree."""

    __slots__ = ("matrix", "atts", "col_limits", "col_values", "_att_index")

    def __init__(
        self,
        matrix: K2Tree | None,
        atts: list[str],
        col_limits: list[int],
        col_values: list[list[str]],
    ):
        self.matrix = matrix
        self.atts = atts
        self.col_limits = col_limits
        self.col_values = col_values
        self._att_index = {a: i for i, a in enumerate(atts)}

    @classmethod
    def build(
        cls,
        n_elements: int,
        triples: list[tuple[int, str, str]],
        k: int = 2,
    ) -> "DenseAttributeMatrix":
        """triples: (element id, attribute, value); one value per (id, att)."""
        per_att: dict[str, dict[int, str]] = {}
        for elem_id, att, value in triples:
            row = per_att.setdefault(att, {})
            if elem_id in row:
                raise InputError(
                    f"element {elem_id} takes two values for dense attribute {att!r}"
                )
            row[elem_id] = value
        atts = sorted(per_att, key=str.encode)
        col_limits = []
        col_values = []
        cells = []
        total = 0
        for att in atts:
            rows = per_att[att]
            values = sorted(set(rows.values()), key=str.encode)
            pos = {v: total + j + 1 for j, v in enumerate(values)}
            total += len(values)
            col_limits.append(total)
            col_values.append(values)
            for elem_id, value in rows.items():
                cells.append((elem_id, pos[value]))
        if not cells:
            return cls(None, atts, col_limits, col_values)
        side = max(n_elements, total)
        return cls(K2Tree.build(side, cells, k), atts, col_limits, col_values)

    def _block(self, att: str) -> tuple[int, int]:
        """Inclusive column range of the attribute's block."""
        i = self._att_index[att]
        lower = self.col_limits[i - 1] if i else 0
        return lower + 1, self.col_limits[i]

    def has(self, att: str) -> bool:
        return att in self._att_index

    def get(self, elem_id: int, att: str):
        """Value of the attribute for the element, or None."""
        if self.matrix is None or att not in self._att_index:
            return None
        c1, c2 = self._block(att)
        if c1 > c2 or elem_id > self.matrix.n_logical:
            return None
        hits = self.matrix.row_leaves(elem_id, c1, c2)
        if not hits:
            return None
        col = hits[0][0]
        return self.col_values[self._att_index[att]][col - c1]

    def select(self, att: str, value: str, lo: int, hi: int) -> list[int]:
        """Ascending element ids in lo..hi taking `value` for the attribute."""
        if self.matrix is None or att not in self._att_index:
            return []
        i = self._att_index[att]
        values = self.col_values[i]
        j = bisect_left(values, value.encode(), key=str.encode)
        if j >= len(values) or values[j] != value:
            return []
        c1, _ = self._block(att)
        col = c1 + j
        hi = min(hi, self.matrix.n_logical)
        if lo > hi:
            return []
        return [row for row, _ in self.matrix.col_leaves(col, lo, hi)]


class DynSparseAttribute:
    """Growable sparse attribute list, positions given by rank within label."""

    __slots__ = ("label", "att", "values", "lex_index")

    def __init__(self, label: str, att: str):
        self.label = label
        self.att = att
        self.values: list = []
        self.lex_index: list[tuple[bytes, int]] = []  # (encoded value, position)

    def set(self, pos: int, value):
        """Assign the value at 1-based position pos, extending with absents."""
        while len(self.values) < pos:
            self.values.append(None)
        old = self.values[pos - 1]
        if old is not None:
            i = bisect_left(self.lex_index, (old.encode(), pos - 1))
            del self.lex_index[i]
        self.values[pos - 1] = value
        if value is not None:
            insort(self.lex_index, (value.encode(), pos - 1))

    def get(self, pos: int):
        if pos < 1:
            raise IndexError(f"position {pos} must be positive")
        if pos > len(self.values):
            return None
        return self.values[pos - 1]

    def select(self, value: str) -> list[int]:
        """Ascending 1-based positions holding the value."""
        key = value.encode()
        lo = bisect_left(self.lex_index, (key,))
        hi = bisect_right(self.lex_index, (key, len(self.values)))
        return sorted(self.lex_index[i][1] + 1 for i in range(lo, hi))


class DynDenseAttribute:
    """One dynamic k²-tree per dense attribute; value columns append-only."""

    __slots__ = ("att", "tree", "values", "_col_of")

    def __init__(self, att: str, k: int = 2):
        self.att = att
        self.tree = DynK2Tree(k=k)
        self.values: list[str] = []
        self._col_of: dict[str, int] = {}

    def _ensure(self, side: int):
        while self.tree.n < side:
            self.tree.grow()

    def set(self, elem_id: int, value: str):
        """Last-write-wins assignment; unseen values open a new final column."""
        col = self._col_of.get(value)
        if col is None:
            self.values.append(value)
            col = len(self.values)
            self._col_of[value] = col
        self._ensure(max(elem_id, col))
        for prev_col, _ in self.tree.row_leaves(elem_id, 1, self.tree.n):
            if prev_col != col:
                self.tree.clear(elem_id, prev_col)
        self.tree.set(elem_id, col)

    def clear(self, elem_id: int):
        """Drop the element's value, if any."""
        if elem_id > self.tree.n:
            return
        for col, _ in self.tree.row_leaves(elem_id, 1, self.tree.n):
            self.tree.clear(elem_id, col)

    def get(self, elem_id: int):
        if elem_id > self.tree.n:
            return None
        hits = self.tree.row_leaves(elem_id, 1, self.tree.n)
        if not hits:
            return None
        return self.values[hits[0][0] - 1]

    def select(self, value: str, lo: int, hi: int) -> list[int]:
        col = self._col_of.get(value)
        if col is None:
            return []
        hi = min(hi, self.tree.n)
        if lo > hi:
            return []
        return [row for row, _ in self.tree.col_leaves(col, lo, hi)]
