"""Universal trees S_m (PLAIN) and S'_m (MARKED) defined by exact size recurrences.

A universal tree of either kind with parameter ``m >= 2`` is a top copy of
a MARKED tree followed by further recursive copies ("slots") that all hang
below the top copy's marked leaf.  Labels are assigned by laying the
slots out consecutively: slot ``j`` owns the label range
``[offset_j, offset_j + size_j)`` and, recursively, vertex 0 of every copy
is that copy's root.

Slot parameters for ``m >= 2`` (``lam`` is the profile's split parameter)::

    PLAIN,  binary : M(ceil(lam m)), P(m - ceil(lam m)), P(m // 2)
    PLAIN,  general: M(ceil(lam m)), P(m - ceil(lam m)), P(m // 2), ..., P(m // m)
    MARKED, binary : M(ceil(m / 2)), M(m // 2), P(m - 1)
    MARKED, general: M(ceil(m / 2)), M(m // 2), P(m - 1), P(m // 2), ..., P(m // m)

``m - ceil(lam m)`` equals ``floor((1 - lam) m)``; computing it this way
with an exact rational ``lam`` keeps the two rounding directions
consistent with the splitting bounds.  The marked leaf of a MARKED tree
lives inside slot 1.
"""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .tree_model import FamilyKind, RootedTree

MATERIALIZE_LIMIT = 10**7


class NodeKind(enum.Enum):
    PLAIN = "plain"
    MARKED = "marked"


PLAIN = NodeKind.PLAIN
MARKED = NodeKind.MARKED


@dataclass(frozen=True)
class SchemeParams:
    family: FamilyKind
    lam: float
    profile: str = "custom"

    def __post_init__(self):
        if not 0.0 < self.lam <= 0.5:
            raise ValueError(f"lambda must lie in (0, 1/2], got {self.lam}")
        preset = PROFILES.get(self.profile)
        if preset is not None and (preset.family, preset.lam) != (self.family, self.lam):
            raise ValueError(f"profile {self.profile!r} is fixed to {preset.family.value}, lambda={preset.lam}")

    @property
    def exact_lam(self) -> Fraction:
        return Fraction(repr(self.lam))

    @property
    def label(self) -> str:
        return f"{self.family.value} {self.lam!r}"


class _Preset(NamedTuple):
    family: FamilyKind
    lam: float
    exponent: float


# exponent: the size bound |S_n| <= n**exponent claimed for the profile
PROFILES: dict[str, _Preset] = {
    "binary-basic": _Preset(FamilyKind.BINARY, 0.5, 2.0),
    "binary-opt": _Preset(FamilyKind.BINARY, 0.296149, 1.894),
    "general-opt": _Preset(FamilyKind.GENERAL, 0.341395, 2.318),
}


def profile(name: str) -> SchemeParams:
    try:
        preset = PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}") from None
    return SchemeParams(preset.family, preset.lam, name)


BINARY_BASIC = profile("binary-basic")
BINARY_OPT = profile("binary-opt")
GENERAL_OPT = profile("general-opt")


class SlotEntry(NamedTuple):
    kind: NodeKind
    param: int
    size: int
    offset: int


@dataclass(frozen=True)
class SlotTable:
    kind: NodeKind
    m: int
    entries: tuple[SlotEntry, ...]
    offsets: tuple[int, ...] = field(repr=False)

    @property
    def total(self) -> int:
        last = self.entries[-1]
        return last.offset + last.size

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> SlotEntry:
        return self.entries[i]


class SizeCache:
    """Memoised sizes, slot tables and marked-leaf labels for one (family, lambda).

    Python integers are unbounded, so sizes never wrap.  Caches are plain
    dicts: fill them from one thread, then share read-only.
    """

    def __init__(self, family: FamilyKind, lam: Fraction):
        self.family = family
        self.lam = lam
        self._plain: dict[int, int] = {0: 0, 1: 1}
        self._marked: dict[int, int] = {0: 0, 1: 1}
        self._leaf: dict[int, int] = {1: 0}
        self._tables: dict[tuple[NodeKind, int], SlotTable] = {}

    def ceil_lam(self, m: int) -> int:
        lam = self.lam
        return -(-lam.numerator * m // lam.denominator)

    def _harmonic(self, m: int, start: int) -> int:
        # sum of |S_{m // i}| for i = start..m, grouped by equal quotients
        total, i = 0, start
        while i <= m:
            q = m // i
            j = m // q
            total += (j - i + 1) * self.plain(q)
            i = j + 1
        return total

    def plain(self, m: int) -> int:
        got = self._plain.get(m)
        if got is not None:
            return got
        if m < 0:
            raise ValueError("size parameter must be non-negative")
        top = self.ceil_lam(m)
        s = self.marked(top) + self.plain(m - top)
        if self.family is FamilyKind.BINARY:
            s += self.plain(m // 2)
        else:
            s += self._harmonic(m, 2)
        self._plain[m] = s
        return s

    def marked(self, m: int) -> int:
        got = self._marked.get(m)
        if got is not None:
            return got
        if m < 0:
            raise ValueError("size parameter must be non-negative")
        s = self.marked((m + 1) // 2) + self.marked(m // 2) + self.plain(m - 1)
        if self.family is FamilyKind.GENERAL:
            s += self._harmonic(m, 2)
        self._marked[m] = s
        return s

    def size(self, kind: NodeKind, m: int) -> int:
        return self.plain(m) if kind is PLAIN else self.marked(m)

    def slot_params(self, kind: NodeKind, m: int) -> list[tuple[NodeKind, int]]:
        if m == 1:
            return [(kind, 1)]
        general = self.family is FamilyKind.GENERAL
        if kind is PLAIN:
            top = self.ceil_lam(m)
            slots = [(MARKED, top), (PLAIN, m - top)]
            if general:
                slots += [(PLAIN, m // i) for i in range(2, m + 1)]
            else:
                slots.append((PLAIN, m // 2))
        else:
            slots = [(MARKED, (m + 1) // 2), (MARKED, m // 2), (PLAIN, m - 1)]
            if general:
                slots += [(PLAIN, m // i) for i in range(2, m + 1)]
        return [s for s in slots if s[1] > 0]

    def table(self, kind: NodeKind, m: int) -> SlotTable:
        key = (kind, m)
        got = self._tables.get(key)
        if got is not None:
            return got
        if m < 1:
            raise ValueError("slot tables exist only for m >= 1")
        entries = []
        offset = 0
        for k, p in self.slot_params(kind, m):
            sz = self.size(k, p)
            entries.append(SlotEntry(k, p, sz, offset))
            offset += sz
        tab = SlotTable(kind, m, tuple(entries), tuple(e.offset for e in entries))
        self._tables[key] = tab
        return tab

    def marked_leaf(self, m: int) -> int:
        got = self._leaf.get(m)
        if got is not None:
            return got
        if m < 1:
            raise ValueError("marked trees exist only for m >= 1")
        # slot 1 is M(m // 2), laid out right after the top copy M(ceil(m / 2))
        label = self.marked((m + 1) // 2) + self.marked_leaf(m // 2)
        self._leaf[m] = label
        return label

    def top_param(self, kind: NodeKind, m: int) -> int:
        return self.ceil_lam(m) if kind is PLAIN else (m + 1) // 2

    def attachment(self, kind: NodeKind, m: int) -> int:
        if m < 2:
            raise ValueError("attachment vertex exists only for m >= 2")
        return self.marked_leaf(self.top_param(kind, m))


@lru_cache(maxsize=None)
def _cache(family: FamilyKind, lam: Fraction) -> SizeCache:
    return SizeCache(family, lam)


def size_cache(params: SchemeParams) -> SizeCache:
    return _cache(params.family, params.exact_lam)


def slot_layout(params: SchemeParams, kind: NodeKind, m: int) -> SlotTable:
    if m < 1:
        raise ValueError("m must be positive")
    return size_cache(params).table(kind, m)


def size_of(params: SchemeParams, kind: NodeKind, m: int) -> int:
    return size_cache(params).size(kind, m)


def marked_leaf_label(params: SchemeParams, m: int) -> int:
    return size_cache(params).marked_leaf(m)


def attachment_label(params: SchemeParams, kind: NodeKind, m: int) -> int:
    return size_cache(params).attachment(kind, m)


def label_bits(size: int) -> int:
    """ceil(log2(size)): bits needed for labels 0..size-1."""
    return (size - 1).bit_length()


def materialize_parents(params: SchemeParams, kind: NodeKind, m: int, limit: int = MATERIALIZE_LIMIT) -> np.ndarray:
    """Parent array of the explicit tree; vertex ids are labels, root 0 is its own parent."""
    if m < 1:
        raise ValueError("m must be positive")
    cache = size_cache(params)
    total = cache.size(kind, m)
    if total > limit:
        raise ValueError(f"tree has {total} vertices, above the materialization limit {limit}")
    built: dict[tuple[NodeKind, int], np.ndarray] = {}

    def build(k: NodeKind, p: int) -> np.ndarray:
        got = built.get((k, p))
        if got is not None:
            return got
        if p == 1:
            arr = np.zeros(1, dtype=np.int64)
        else:
            arr = np.empty(cache.size(k, p), dtype=np.int64)
            attach = cache.attachment(k, p)
            for j, e in enumerate(cache.table(k, p).entries):
                sub = build(e.kind, e.param)
                arr[e.offset:e.offset + e.size] = sub + e.offset
                if j:
                    arr[e.offset] = attach
        built[(k, p)] = arr
        return arr

    out = build(kind, m)
    out.setflags(write=False)
    return out


def materialize(params: SchemeParams, kind: NodeKind, m: int, limit: int = MATERIALIZE_LIMIT) -> RootedTree:
    """Explicit tree whose vertex ids are the labels of the layout."""
    return RootedTree(tuple(materialize_parents(params, kind, m, limit).tolist()))


# --------------------------------------------------------------------------
# navigation of the implicit tree (parent structure only, no NCA logic)


class ImplicitTree:
    """Parent, depth and level-ancestor of labels of S_m / S'_m without materializing.

    A slot's root hangs below the top copy's marked leaf, so the depth of a
    label in slot j > 0 is (depth of that leaf) + 1 + (depth inside the slot).
    """

    def __init__(self, params: SchemeParams, kind: NodeKind, m: int):
        self.cache = size_cache(params)
        self.kind, self.m = kind, m
        self.size = self.cache.size(kind, m)
        self._leaf_depth: dict[int, int] = {1: 0}

    def leaf_depth(self, m: int) -> int:
        """Depth of the marked leaf of S'_m."""
        got = self._leaf_depth.get(m)
        if got is None:
            got = self.leaf_depth((m + 1) // 2) + 1 + self.leaf_depth(m // 2)
            self._leaf_depth[m] = got
        return got

    def _slot(self, kind: NodeKind, m: int, x: int):
        tab = self.cache.table(kind, m)
        j = bisect.bisect_right(tab.offsets, x) - 1
        return j, tab

    def _check(self, x: int):
        if not 0 <= x < self.size:
            raise ValueError(f"label {x} out of range [0, {self.size})")

    def parent(self, x: int) -> int:
        """Parent label of ``x``; -1 for the root."""
        self._check(x)
        if x == 0:
            return -1
        kind, m, base = self.kind, self.m, 0
        while True:
            # a non-root label never becomes local 0 in slot 0, so this terminates
            j, tab = self._slot(kind, m, x)
            e = tab[j]
            if j and x == e.offset:
                return base + self.cache.attachment(kind, m)
            base += e.offset
            x -= e.offset
            kind, m = e.kind, e.param

    def depth(self, x: int) -> int:
        self._check(x)
        kind, m, d = self.kind, self.m, 0
        while m > 1:
            j, tab = self._slot(kind, m, x)
            if j:
                d += self.leaf_depth(tab[0].param) + 1
            e = tab[j]
            x -= e.offset
            kind, m = e.kind, e.param
        return d

    def level_ancestor(self, x: int, d: int) -> int:
        """The ancestor of ``x`` at depth ``d`` (0 <= d <= depth(x))."""
        self._check(x)
        kind, m, base = self.kind, self.m, 0
        while d:
            if m == 1:
                raise ValueError("depth exceeds the depth of the label")
            j, tab = self._slot(kind, m, x)
            top = tab[0].param
            if j:
                above = self.leaf_depth(top)
                if d <= above:
                    x = self.cache.marked_leaf(top)
                else:
                    e = tab[j]
                    d -= above + 1
                    base += e.offset
                    x -= e.offset
                    kind, m = e.kind, e.param
                    continue
            kind, m = MARKED, top
        return base

    def nca(self, x: int, y: int) -> int:
        """Deepest d with equal level ancestors, found by binary search over depth."""
        lo, hi = 0, min(self.depth(x), self.depth(y))
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.level_ancestor(x, mid) == self.level_ancestor(y, mid):
                lo = mid
            else:
                hi = mid - 1
        return self.level_ancestor(x, lo)
