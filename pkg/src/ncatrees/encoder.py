"""Embedding trees into the universal trees; the labels are the images.

A plain tree is split with the profile's lambda: the root component (split
vertex marked) goes into the top MARKED slot and the i-th largest child
component into PLAIN slot i.  A marked tree is split with lambda = 1/2:
root component into the top MARKED slot, the component holding the marked
leaf into MARKED slot 1, the remaining components into the PLAIN slots
that follow.  The split vertex always lands on the top copy's marked leaf,
which is exactly where the other slots are attached.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .construction import MARKED, PLAIN, NodeKind, SchemeParams, SizeCache, label_bits, size_cache
from .splitting import split_marked, split_plain
from .tree_model import MarkedTree, RootedTree

HALF = Fraction(1, 2)


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class LabelAssignment:
    params: SchemeParams
    n: int
    labels: tuple[int, ...]
    kind: NodeKind = PLAIN

    @property
    def size(self) -> int:
        return size_cache(self.params).size(self.kind, self.n)

    @property
    def bits(self) -> int:
        return label_bits(self.size)

    def __getitem__(self, v: int) -> int:
        return self.labels[v]

    def __len__(self) -> int:
        return len(self.labels)


def _check_family(params: SchemeParams, t: RootedTree):
    if not t.in_family(params.family):
        raise EmbeddingError(f"tree has a vertex with {t.max_degree()} children; not a {params.family.value} tree")


class _Embedder:
    def __init__(self, params: SchemeParams, size: int):
        self.cache: SizeCache = size_cache(params)
        self.lam = params.exact_lam
        self.out = [-1] * size

    def plain(self, t: RootedTree, ids, m: int, base: int):
        if t.n == 1:
            self.out[ids[0]] = base
            return
        split = split_plain(t, self.lam)
        table = self.cache.table(PLAIN, m)
        if len(split.child_parts) > len(table) - 1:
            raise AssertionError("more child parts than slots")
        top = table[0]
        root = split.root_part
        self.marked(root.tree, [ids[g] for g in root.vertices], top.param, base)
        for slot, part in zip(table.entries[1:], split.child_parts):
            if part.n > slot.param:
                raise AssertionError(f"child part of size {part.n} exceeds slot S_{slot.param}")
            self.plain(part.tree, [ids[g] for g in part.vertices], slot.param, base + slot.offset)
        attach = base + self.cache.attachment(PLAIN, m)
        if self.out[ids[split.split_vertex]] != attach:
            raise AssertionError("split vertex not mapped to the attachment vertex")

    def marked(self, t: MarkedTree, ids, m: int, base: int):
        if t.n > m:
            raise AssertionError(f"marked part of size {t.n} exceeds S'_{m}")
        if t.n == 1:
            self.out[ids[0]] = base + self.cache.marked_leaf(m)
            return
        split = split_marked(t, HALF)
        table = self.cache.table(MARKED, m)
        top, below = table[0], table[1]
        root, low = split.root_part, split.marked_part
        self.marked(root.tree, [ids[g] for g in root.vertices], top.param, base)
        self.marked(low.tree, [ids[g] for g in low.vertices], below.param, base + below.offset)
        others = table.entries[2:]
        if len(split.other_parts) > len(others):
            raise AssertionError("more side parts than slots")
        for slot, part in zip(others, split.other_parts):
            if part.n > slot.param:
                raise AssertionError(f"side part of size {part.n} exceeds slot S_{slot.param}")
            self.plain(part.tree, [ids[g] for g in part.vertices], slot.param, base + slot.offset)
        if self.out[ids[t.marked]] != base + self.cache.marked_leaf(m):
            raise AssertionError("marked leaf not mapped to the marked leaf of S'")


def embed(params: SchemeParams, t: RootedTree, n: int | None = None) -> LabelAssignment:
    """Labels of ``t``'s vertices under its embedding into S_n (default n = |t|)."""
    n = t.n if n is None else n
    _check_family(params, t)
    if t.n > n:
        raise EmbeddingError(f"tree has {t.n} vertices, capacity is {n}")
    job = _Embedder(params, t.n)
    job.plain(t, list(range(t.n)), n, 0)
    return LabelAssignment(params, n, tuple(job.out))


def embed_marked(params: SchemeParams, t: MarkedTree, m: int | None = None) -> LabelAssignment:
    """Labels under the embedding into S'_m; the marked leaf gets ``marked_leaf_label(m)``."""
    m = t.n if m is None else m
    _check_family(params, t.tree)
    if t.n > m:
        raise EmbeddingError(f"tree has {t.n} vertices, capacity is {m}")
    job = _Embedder(params, t.n)
    job.marked(t, list(range(t.n)), m, 0)
    return LabelAssignment(params, m, tuple(job.out), MARKED)


def format_labels(assignment: LabelAssignment, tree: RootedTree | None = None) -> str:
    """Header ``family lambda n size bits`` then ``<preorder-index> <label>`` lines.

    Without ``tree`` the vertex ids are taken to be preorder indices, which
    holds for parsed trees.
    """
    p = assignment.params
    order = tree.preorder if tree is not None else range(len(assignment))
    lines = [f"{p.family.value} {p.lam!r} {assignment.n} {assignment.size} {assignment.bits}"]
    lines += [f"{i} {assignment.labels[v]}" for i, v in enumerate(order)]
    return "\n".join(lines) + "\n"
