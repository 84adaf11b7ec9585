"""Tree splitting at a single vertex.

Cutting the edges from a vertex ``v`` to its children leaves the component
containing the root (with ``v`` as a leaf) plus one component per child
of ``v``.  ``split_plain`` walks the heavy path from the root and
``split_marked`` walks the root-to-marked-leaf path; both stop at the
last vertex whose root component still has at most ``ceil(lam * n)``
vertices.

Components come back re-indexed (root 0, preorder ids) together with
``vertices``: ``vertices[i]`` is the id in the input tree of local vertex
``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .tree_model import MarkedTree, RootedTree, subtree_form


@dataclass(frozen=True)
class Part:
    tree: RootedTree
    vertices: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.tree.n


@dataclass(frozen=True)
class MarkedPart:
    tree: MarkedTree
    vertices: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.tree.n


@dataclass(frozen=True)
class SplitResult:
    split_vertex: int
    root_part: MarkedPart
    child_parts: tuple[Part, ...]


@dataclass(frozen=True)
class MarkedSplitResult:
    split_vertex: int
    root_part: MarkedPart
    marked_part: MarkedPart
    other_parts: tuple[Part, ...]


def _as_fraction(lam) -> Fraction:
    if isinstance(lam, Fraction):
        return lam
    if isinstance(lam, float):
        return Fraction(repr(lam))
    return Fraction(lam)


def ceil_share(lam, n: int) -> int:
    """ceil(lam * n) computed exactly."""
    f = _as_fraction(lam)
    return -(-f.numerator * n // f.denominator)


def _check_lambda(lam) -> Fraction:
    f = _as_fraction(lam)
    if not 0 < f <= 1:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")
    return f


def _order_key(t: RootedTree):
    sizes = t.subtree_sizes
    forms: dict[int, str] = {}

    def form(v: int) -> str:
        if v not in forms:
            forms[v] = subtree_form(t, v)
        return forms[v]

    def sort(vs) -> list[int]:
        # descending size; equal sizes ordered by canonical form
        vs = sorted(vs, key=lambda v: -sizes[v])
        out, i = [], 0
        while i < len(vs):
            j = i
            while j < len(vs) and sizes[vs[j]] == sizes[vs[i]]:
                j += 1
            group = vs[i:j]
            if len(group) > 1:
                group.sort(key=form)
            out.extend(group)
            i = j
        return out

    return sort


def _root_component(t: RootedTree, v: int) -> tuple[int, ...]:
    pre, pos, sizes = t.preorder, t.position, t.subtree_sizes
    return pre[:pos[v] + 1] + pre[pos[v] + sizes[v]:]


def _part(t: RootedTree, vertices: tuple[int, ...]) -> Part:
    return Part(t.induced(vertices), vertices)


def _marked_part(t: RootedTree, vertices: tuple[int, ...], marked: int) -> MarkedPart:
    local = t.induced(vertices)
    return MarkedPart(MarkedTree(local, vertices.index(marked)), vertices)


def split_plain(t: RootedTree, lam) -> SplitResult:
    _check_lambda(lam)
    n = t.n
    bound = ceil_share(lam, n)
    sizes, children = t.subtree_sizes, t.children
    order = _order_key(t)
    v = t.root
    while children[v]:
        heavy = order(children[v])[0]
        if n - sizes[heavy] + 1 > bound:
            break
        v = heavy
    root_part = _marked_part(t, _root_component(t, v), v)
    child_parts = tuple(_part(t, t.subtree_vertices(c)) for c in order(children[v]))
    return SplitResult(v, root_part, child_parts)


def split_marked(t: MarkedTree, lam) -> MarkedSplitResult:
    f = _check_lambda(lam)
    n = t.n
    if f == 1 or n < -(-f.denominator // (f.denominator - f.numerator)):
        raise ValueError(f"split_marked needs n >= 1/(1-lambda); got n={n}, lambda={lam}")
    tree, w = t.tree, t.marked
    bound = ceil_share(lam, n)
    sizes, parent = tree.subtree_sizes, tree.parent
    path = [w]
    while parent[path[-1]] != path[-1]:
        path.append(parent[path[-1]])
    path.reverse()
    v = path[0]
    for u in path[1:]:
        if n - sizes[u] + 1 > bound:
            break
        v = u
    # path index of v is < len(path) - 1 because the leaf w itself always exceeds the bound
    toward_w = path[path.index(v) + 1]
    root_part = _marked_part(tree, _root_component(tree, v), v)
    marked_part = _marked_part(tree, tree.subtree_vertices(toward_w), w)
    order = _order_key(tree)
    others = order(c for c in tree.children[v] if c != toward_w)
    other_parts = tuple(_part(tree, tree.subtree_vertices(c)) for c in others)
    return MarkedSplitResult(v, root_part, marked_part, other_parts)


def reassemble(n: int, split_vertex: int, parts) -> RootedTree:
    """Rebuild the tree in input ids from a split; inverse of the split functions.

    ``parts`` lists the root part first; every other part's root is
    re-attached under ``split_vertex``.
    """
    parent = [-1] * n
    for j, part in enumerate(parts):
        local = part.tree.tree if isinstance(part, MarkedPart) else part.tree
        for i, g in enumerate(part.vertices):
            if i == 0:
                parent[g] = g if j == 0 else split_vertex
            else:
                parent[g] = part.vertices[local.parent[i]]
    return RootedTree(tuple(parent))
