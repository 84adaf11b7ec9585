"""Rooted unlabeled trees: representation, text format, enumeration, sampling.

Trees are stored arena-style as a parent tuple where the root is its own
parent.  Every tree produced by this package (parsing, sampling,
enumeration, splitting, materialization) additionally satisfies
``parent[i] < i`` for ``i > 0`` with root ``0``; trees built from arbitrary
parent arrays (e.g. reconstructed from a decoder table) are accepted as
long as they are connected and acyclic.

The text grammar is::

    tree ::= "(" tree* ")"        a leaf is "()"
    marked leaf ::= "(*)"         at most one per tree

``canonical_form`` is an AHU encoding with children sorted in descending
lexicographic order; ``serialize_tree`` uses the same ordering so output is
deterministic.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

ENUMERATION_LIMIT = 12


class FamilyKind(enum.Enum):
    BINARY = "binary"
    GENERAL = "general"

    @property
    def max_children(self) -> int | None:
        return 2 if self is FamilyKind.BINARY else None


class TreeParseError(ValueError):
    pass


class InvalidTreeError(ValueError):
    pass


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree over vertices ``0..n-1``; ``parent[root] == root``."""

    parent: tuple[int, ...]

    def __post_init__(self):
        parent = self.parent
        n = len(parent)
        if n == 0:
            raise InvalidTreeError("a tree needs at least one vertex")
        if parent[0] == 0 and all(0 <= parent[i] < i for i in range(1, n)):
            return
        # general layout: exactly one self-loop and every vertex reaches it
        roots = [v for v in range(n) if parent[v] == v]
        if len(roots) != 1:
            raise InvalidTreeError(f"expected exactly one root, found {len(roots)}")
        if any(not 0 <= p < n for p in parent):
            raise InvalidTreeError("parent id out of range")
        seen = 1
        stack = [roots[0]]
        kids: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(parent):
            if v != p:
                kids[p].append(v)
        while stack:
            u = stack.pop()
            seen += len(kids[u])
            stack.extend(kids[u])
        if seen != n:
            raise InvalidTreeError("parent relation has a cycle or is disconnected")

    @classmethod
    def from_parents(cls, parent: Iterable[int]) -> RootedTree:
        return cls(tuple(int(p) for p in parent))

    @classmethod
    def single(cls) -> RootedTree:
        return cls((0,))

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def vertex_count(self) -> int:
        return len(self.parent)

    @cached_property
    def root(self) -> int:
        if self.parent[0] == 0:
            return 0
        return next(v for v, p in enumerate(self.parent) if p == v)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if v != p:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def preorder(self) -> tuple[int, ...]:
        children = self.children
        order = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            order.append(u)
            stack.extend(reversed(children[u]))
        return tuple(order)

    @cached_property
    def position(self) -> tuple[int, ...]:
        """Index of each vertex in ``preorder``."""
        pos = [0] * self.n
        for i, v in enumerate(self.preorder):
            pos[v] = i
        return tuple(pos)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        d = [0] * self.n
        parent = self.parent
        for v in self.preorder[1:]:
            d[v] = d[parent[v]] + 1
        return tuple(d)

    @cached_property
    def subtree_sizes(self) -> tuple[int, ...]:
        size = [1] * self.n
        parent = self.parent
        root = self.root
        for v in reversed(self.preorder):
            if v != root:
                size[parent[v]] += size[v]
        return tuple(size)

    @cached_property
    def parent_array(self) -> np.ndarray:
        arr = np.asarray(self.parent, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def depth_array(self) -> np.ndarray:
        arr = np.asarray(self.depth, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def max_degree(self) -> int:
        return max(len(c) for c in self.children)

    def in_family(self, family: FamilyKind) -> bool:
        limit = family.max_children
        return limit is None or self.max_degree() <= limit

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def subtree_vertices(self, v: int) -> tuple[int, ...]:
        start = self.position[v]
        return self.preorder[start:start + self.subtree_sizes[v]]

    def induced(self, vertices: Sequence[int]) -> RootedTree:
        """Re-indexed subtree induced by ``vertices`` (listed parent-first).

        ``vertices[0]`` becomes the root; the parent of every later vertex
        must appear earlier in the sequence.
        """
        index = {g: i for i, g in enumerate(vertices)}
        parent = self.parent
        local = [0]
        for g in vertices[1:]:
            local.append(index[parent[g]])
        return RootedTree(tuple(local))


@dataclass(frozen=True)
class MarkedTree:
    """A rooted tree with one distinguished leaf."""

    tree: RootedTree
    marked: int

    def __post_init__(self):
        if not 0 <= self.marked < self.tree.n:
            raise InvalidTreeError("marked vertex out of range")
        if not self.tree.is_leaf(self.marked):
            raise InvalidTreeError(f"marked vertex {self.marked} is not a leaf")

    @property
    def n(self) -> int:
        return self.tree.n


# --------------------------------------------------------------------------
# canonical forms and text format


def _forms(t: RootedTree, vertices: Sequence[int], marked: int | None = None) -> dict[int, str]:
    """AHU strings for every vertex of the subtree listed in preorder."""
    children = t.children
    form: dict[int, str] = {}
    for u in reversed(vertices):
        kids = children[u]
        if not kids:
            form[u] = "(*)" if u == marked else "()"
        else:
            form[u] = "(" + "".join(sorted((form[c] for c in kids), reverse=True)) + ")"
    return form


def canonical_form(t: RootedTree | MarkedTree) -> str:
    if isinstance(t, MarkedTree):
        return _forms(t.tree, t.tree.preorder, t.marked)[t.tree.root]
    return _forms(t, t.preorder)[t.root]


def subtree_form(t: RootedTree, v: int) -> str:
    return _forms(t, t.subtree_vertices(v))[v]


def serialize_tree(t: RootedTree | MarkedTree) -> str:
    return canonical_form(t)


def parse_tree(text: str, marked_allowed: bool = False) -> RootedTree | MarkedTree:
    """Parse the parenthesis grammar; vertex ids follow textual preorder.

    Returns a ``MarkedTree`` when the text contains a ``(*)`` leaf.
    """
    tokens = [ch for ch in text if not ch.isspace()]
    if not tokens:
        raise TreeParseError("empty input")
    parent: list[int] = []
    stack: list[int] = []
    marked: int | None = None
    closed_root = False
    i = 0
    while i < len(tokens):
        ch = tokens[i]
        if closed_root:
            raise TreeParseError(f"trailing input at token {i}")
        if ch == "(":
            v = len(parent)
            parent.append(stack[-1] if stack else 0)
            stack.append(v)
        elif ch == ")":
            if not stack:
                raise TreeParseError(f"unbalanced ')' at token {i}")
            stack.pop()
            closed_root = not stack
        elif ch == "*":
            if not marked_allowed:
                raise TreeParseError("marked leaf not allowed here")
            if marked is not None:
                raise TreeParseError("more than one marked leaf")
            if not stack or tokens[i - 1] != "(" or i + 1 >= len(tokens) or tokens[i + 1] != ")":
                raise TreeParseError("marked token must form a leaf '(*)'")
            marked = stack[-1]
        else:
            raise TreeParseError(f"unexpected character {ch!r}")
        i += 1
    if stack:
        raise TreeParseError("unbalanced '(': input ended inside a vertex")
    tree = RootedTree(tuple(parent))
    if marked is not None:
        return MarkedTree(tree, marked)
    return tree


# --------------------------------------------------------------------------
# NCA oracle


def nca_oracle(t: RootedTree, u: int, v: int) -> int:
    """Deepest common ancestor by equal-depth lifting."""
    n = t.n
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError(f"vertex out of range for tree of size {n}")
    parent, depth = t.parent, t.depth
    while depth[u] > depth[v]:
        u = parent[u]
    while depth[v] > depth[u]:
        v = parent[v]
    while u != v:
        u = parent[u]
        v = parent[v]
    return u


def nca_oracle_many(t: RootedTree, us, vs) -> np.ndarray:
    """Vectorised version of :func:`nca_oracle` over paired vertex arrays."""
    return lift_nca(t.parent_array, t.depth_array, us, vs)


def depths_by_doubling(parent: np.ndarray) -> np.ndarray:
    """Depth of every vertex of a parent array (root is its own parent) by pointer jumping."""
    parent = np.asarray(parent)
    jump = parent.copy()
    dist = (jump != np.arange(parent.size, dtype=parent.dtype)).astype(np.int64)
    while True:
        nxt = jump[jump]
        if np.array_equal(nxt, jump):
            return dist
        dist += dist[jump]
        jump = nxt


def lift_nca(parent: np.ndarray, depth: np.ndarray, us, vs) -> np.ndarray:
    """NCA by lifting the deeper vertex, then both, one parent step at a time."""
    u = np.array(us, dtype=np.int64, copy=True).ravel()
    v = np.array(vs, dtype=np.int64, copy=True).ravel()
    n = len(parent)
    if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
        raise IndexError(f"vertex out of range for tree of size {n}")
    du, dv = depth[u], depth[v]
    while True:
        deeper = np.flatnonzero(du > dv)
        if not deeper.size:
            break
        u[deeper] = parent[u[deeper]]
        du[deeper] -= 1
    while True:
        deeper = np.flatnonzero(dv > du)
        if not deeper.size:
            break
        v[deeper] = parent[v[deeper]]
        dv[deeper] -= 1
    while True:
        differ = np.flatnonzero(u != v)
        if not differ.size:
            return u
        u[differ] = parent[u[differ]]
        v[differ] = parent[v[differ]]


def is_ancestor(t: RootedTree, a: int, v: int) -> bool:
    parent = t.parent
    while True:
        if v == a:
            return True
        if parent[v] == v:
            return False
        v = parent[v]


# --------------------------------------------------------------------------
# enumeration and sampling


def _with_leaf(t: RootedTree, at: int) -> RootedTree:
    return RootedTree(t.parent + (at,))


def enumerate_trees(n: int, family: FamilyKind, limit: int = ENUMERATION_LIMIT) -> list[RootedTree]:
    """One representative per isomorphism class of n-vertex trees in ``family``.

    Grows every (n-1)-vertex representative by a leaf at each admissible
    vertex and deduplicates by canonical form.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise ValueError(f"n={n} exceeds the enumeration limit {limit}")
    cap = family.max_children
    level = {"()": RootedTree.single()}
    for _ in range(n - 1):
        nxt: dict[str, RootedTree] = {}
        for t in level.values():
            for v in range(t.n):
                if cap is not None and len(t.children[v]) >= cap:
                    continue
                grown = _with_leaf(t, v)
                nxt.setdefault(canonical_form(grown), grown)
        level = nxt
    return [level[k] for k in sorted(level)]


def random_tree(n: int, family: FamilyKind, seed: int) -> RootedTree:
    """Random recursive tree: vertex i attaches to a uniform earlier vertex.

    Under BINARY the choice is restricted to vertices with a free child slot.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    parent = [0]
    if family is FamilyKind.GENERAL:
        for i in range(1, n):
            parent.append(rng.randrange(i))
        return RootedTree(tuple(parent))
    degree = [0]
    free = [0]  # vertices with < 2 children
    for i in range(1, n):
        k = rng.randrange(len(free))
        p = free[k]
        parent.append(p)
        degree[p] += 1
        if degree[p] == 2:
            free[k] = free[-1]
            free.pop()
        degree.append(0)
        free.append(i)
    return RootedTree(tuple(parent))


def path_tree(n: int) -> RootedTree:
    return RootedTree((0,) + tuple(range(n - 1)))


def star_tree(n: int) -> RootedTree:
    return RootedTree((0,) * n)
