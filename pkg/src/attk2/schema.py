"""Type registries for nodes and edges.

The static table keeps labels sorted bytewise and assigns each label a
contiguous id range, recording only the highest id per label; resolving an id
is a binary search over those upper limits. Each label carries its attribute
names (in declaration order) plus a bitmap marking which are dense.

The dynamic table cannot reorder ids, so it keeps the label of every element
in a dynamic symbol sequence keyed by a stable per-label code; ranges become
rank/select queries.
"""

from __future__ import annotations

from bisect import bisect_left, insort

from .bits import BitSequence, DynSequence
from .errors import InputError, NotFoundError


class TypeTable:
    """Static label registry with contiguous id ranges per label."""

    __slots__ = ("labels", "upper_limits", "_attrs", "_dense", "_attr_pos", "_index")

    def __init__(
        self,
        labels: list[str],
        upper_limits: list[int],
        attrs: list[list[str]],
        dense: list[BitSequence],
    ):
        self.labels = labels
        self.upper_limits = upper_limits
        self._attrs = attrs
        self._dense = dense
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._attr_pos = [
            {name: j for j, name in enumerate(names)} for names in attrs
        ]

    @classmethod
    def build(
        cls, entries: list[tuple[str, int, list[tuple[str, bool]]]]
    ) -> "TypeTable":
        """entries: (label, element count, [(attribute, dense flag)...])."""
        seen = set()
        for label, count, _ in entries:
            if label in seen:
                raise InputError(f"duplicate label {label!r}")
            if count < 0:
                raise InputError(f"label {label!r} has negative element count")
            seen.add(label)
        ordered = sorted(entries, key=lambda e: e[0].encode())
        labels = []
        uppers = []
        attrs = []
        dense = []
        total = 0
        for label, count, attr_list in ordered:
            names = [name for name, _ in attr_list]
            if len(set(names)) != len(names):
                raise InputError(f"label {label!r} declares a duplicate attribute")
            total += count
            labels.append(label)
            uppers.append(total)
            attrs.append(names)
            dense.append(BitSequence(1 if flag else 0 for _, flag in attr_list))
        return cls(labels, uppers, attrs, dense)

    @property
    def count(self) -> int:
        """Total number of registered elements."""
        return self.upper_limits[-1] if self.upper_limits else 0

    def label_list(self) -> list[str]:
        return list(self.labels)

    def ids_of(self, label: str) -> tuple[int, int]:
        """Inclusive id range (lo, hi) of the label; empty labels give lo > hi."""
        idx = self._index.get(label)
        if idx is None:
            raise NotFoundError(f"unknown label {label!r}")
        lower = self.upper_limits[idx - 1] if idx else 0
        return lower + 1, self.upper_limits[idx]

    def type_of(self, elem_id: int) -> str:
        if not 1 <= elem_id <= self.count:
            raise IndexError(f"id {elem_id} out of range 1..{self.count}")
        return self.labels[bisect_left(self.upper_limits, elem_id)]

    def attribute_info(self, label: str, att: str):
        """(1-based ordinal, dense flag) of att within label, or None."""
        idx = self._index.get(label)
        if idx is None:
            raise NotFoundError(f"unknown label {label!r}")
        j = self._attr_pos[idx].get(att)
        if j is None:
            return None
        return j + 1, bool(self._dense[idx].access(j + 1))

    def attrs_of(self, label: str) -> list[tuple[str, bool]]:
        idx = self._index.get(label)
        if idx is None:
            raise NotFoundError(f"unknown label {label!r}")
        flags = self._dense[idx]
        return [
            (name, bool(flags.access(j + 1)))
            for j, name in enumerate(self._attrs[idx])
        ]


class DynTypeTable:
    """Growable label registry; element types live in a dynamic sequence."""

    __slots__ = ("_sorted", "_codes", "_names", "_attrs", "_dense", "_seq")

    def __init__(self):
        self._sorted: list[str] = []       # labels in bytewise order
        self._codes: dict[str, int] = {}   # label -> stable code
        self._names: list[str] = []        # code -> label
        self._attrs: dict[str, list[str]] = {}
        self._dense: dict[str, list[bool]] = {}
        self._seq = DynSequence()

    @property
    def count(self) -> int:
        return self._seq.n

    def add_type(self, label: str):
        if label in self._codes:
            raise InputError(f"label {label!r} already exists")
        self._codes[label] = len(self._names)
        self._names.append(label)
        insort(self._sorted, label, key=str.encode)
        self._attrs[label] = []
        self._dense[label] = []

    def add_attribute(self, label: str, att: str, dense: bool):
        if label not in self._codes:
            raise NotFoundError(f"unknown label {label!r}")
        if att in self._attrs[label]:
            raise InputError(f"attribute {att!r} already declared for {label!r}")
        self._attrs[label].append(att)
        self._dense[label].append(dense)

    def register_element(self, label: str) -> int:
        """Append an element of the label; returns its sequential 1-based id."""
        code = self._codes.get(label)
        if code is None:
            raise NotFoundError(f"unknown label {label!r}")
        self._seq.insert(self._seq.n + 1, code)
        return self._seq.n

    def label_list(self) -> list[str]:
        return list(self._sorted)

    def has_label(self, label: str) -> bool:
        return label in self._codes

    def ids_of(self, label: str) -> list[int]:
        """Ascending ids carrying the label, enumerated via select."""
        code = self._codes.get(label)
        if code is None:
            raise NotFoundError(f"unknown label {label!r}")
        total = self._seq.rank(code, self._seq.n)
        return [self._seq.select(code, j) for j in range(1, total + 1)]

    def type_of(self, elem_id: int) -> str:
        if not 1 <= elem_id <= self._seq.n:
            raise IndexError(f"id {elem_id} out of range 1..{self._seq.n}")
        return self._names[self._seq.access(elem_id)]

    def rank_in_label(self, elem_id: int) -> tuple[str, int]:
        """Label of the element and its 1-based rank among that label's ids."""
        if not 1 <= elem_id <= self._seq.n:
            raise IndexError(f"id {elem_id} out of range 1..{self._seq.n}")
        code = self._seq.access(elem_id)
        return self._names[code], self._seq.rank(code, elem_id)

    def select_in_label(self, label: str, rank: int) -> int:
        """Id of the rank-th element of the label."""
        code = self._codes.get(label)
        if code is None:
            raise NotFoundError(f"unknown label {label!r}")
        return self._seq.select(code, rank)

    def attribute_info(self, label: str, att: str):
        if label not in self._codes:
            raise NotFoundError(f"unknown label {label!r}")
        names = self._attrs[label]
        try:
            j = names.index(att)
        except ValueError:
            return None
        return j + 1, self._dense[label][j]

    def attrs_of(self, label: str) -> list[tuple[str, bool]]:
        if label not in self._codes:
            raise NotFoundError(f"unknown label {label!r}")
        return list(zip(self._attrs[label], self._dense[label]))
