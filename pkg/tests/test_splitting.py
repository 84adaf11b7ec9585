from fractions import Fraction
from math import ceil, floor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncatrees.tree_model import (
    FamilyKind,
    MarkedTree,
    canonical_form,
    parse_tree,
    path_tree,
    random_tree,
    star_tree,
)
from ncatrees.splitting import ceil_share, reassemble, split_marked, split_plain

LAMBDAS = [0.5, 0.296149, 0.341395]


def _f(lam):
    return Fraction(repr(lam))


def plain_ok(t, v, lam):
    """Bounds of the plain split at v, checked directly from subtree sizes."""
    n, sizes = t.n, t.subtree_sizes
    kids = sorted((sizes[c] for c in t.children[v]), reverse=True)
    root = n - sum(kids)
    lam = _f(lam)
    return (root <= ceil(lam * n)
            and all(k <= floor((1 - lam) * n) for k in kids)
            and all(k <= n // i for i, k in enumerate(kids, 1)))


def marked_ok(t, w, v, lam):
    n, sizes = t.n, t.subtree_sizes
    toward = [c for c in t.children[v] if w in t.subtree_vertices(c)]
    if not toward:
        return False
    others = sorted((sizes[c] for c in t.children[v] if c != toward[0]), reverse=True)
    root = n - sizes[toward[0]] - sum(others)
    lam = _f(lam)
    return (root <= ceil(lam * n)
            and sizes[toward[0]] <= floor((1 - lam) * n)
            and all(k <= n - 1 for k in others)
            and all(k <= n // i for i, k in enumerate(others, 1) if i >= 2))


def path_to(t, w):
    out = [w]
    while t.parent[out[-1]] != out[-1]:
        out.append(t.parent[out[-1]])
    return out[::-1]


def part_sets(res, marked=False):
    parts = [res.root_part]
    if marked:
        parts.append(res.marked_part)
        parts += list(res.other_parts)
    else:
        parts += list(res.child_parts)
    return [set(p.vertices) for p in parts]


# worked examples -------------------------------------------------------------

def test_plain_chain():
    t = path_tree(3)
    assert [v for v in range(3) if plain_ok(t, v, 0.5)] == [1]
    res = split_plain(t, 0.5)
    assert res.split_vertex == 1
    assert part_sets(res) == [{0, 1}, {2}]
    assert res.root_part.vertices[res.root_part.tree.marked] == 1


def test_plain_single_vertex():
    for lam in LAMBDAS:
        res = split_plain(path_tree(1), lam)
        assert res.split_vertex == 0 and part_sets(res) == [{0}]


def test_plain_star():
    t = star_tree(5)
    assert [v for v in range(5) if plain_ok(t, v, 0.5)] == [0]
    res = split_plain(t, 0.5)
    assert res.split_vertex == 0
    assert res.root_part.n == 1 and [p.n for p in res.child_parts] == [1, 1, 1, 1]


def test_marked_chain():
    mt = parse_tree("(((*)))", marked_allowed=True)
    assert [v for v in (0, 1) if marked_ok(mt.tree, 2, v, 0.5)] == [1]
    res = split_marked(mt, 0.5)
    assert res.split_vertex == 1
    assert part_sets(res, True) == [{0, 1}, {2}]
    assert res.other_parts == ()


def test_marked_two_vertices():
    mt = parse_tree("((*))", marked_allowed=True)
    res = split_marked(mt, 0.5)
    assert res.split_vertex == 0
    assert part_sets(res, True) == [{0}, {1}]
    assert res.marked_part.tree.marked == 0


def test_marked_with_side_chain():
    mt = parse_tree("((*)(()))", marked_allowed=True)
    res = split_marked(mt, 0.5)
    assert res.split_vertex == 0
    assert part_sets(res, True) == [{0}, {1}, {2, 3}]


def test_marked_precondition():
    with pytest.raises(ValueError):
        split_marked(parse_tree("(*)", marked_allowed=True), 0.5)
    # n = 2 needs 2 >= 1 / (1 - lam), which fails for lam > 1/2 only
    split_marked(parse_tree("((*))", marked_allowed=True), 0.341395)


def test_ceil_share_is_exact():
    assert ceil_share(0.5, 3) == 2
    assert ceil_share(0.296149, 1000000) == 296149
    assert ceil_share(0.296149, 1000001) == 296150


# split bounds over random trees ----------------------------------------------

def _random_leaf(t, seed):
    leaves = [v for v in range(t.n) if t.is_leaf(v)]
    return leaves[np.random.default_rng(seed).integers(len(leaves))]


@pytest.mark.parametrize("family", [FamilyKind.BINARY, FamilyKind.GENERAL])
@pytest.mark.parametrize("n, count", [(10, 1000), (100, 1000), (1000, 1000)])
def test_split_bounds_random(family, n, count):
    for seed in range(count):
        t = random_tree(n, family, seed)
        w = _random_leaf(t, seed)
        mt = MarkedTree(t, w)
        for lam in LAMBDAS:
            res = split_plain(t, lam)
            v = res.split_vertex
            assert plain_ok(t, v, lam)
            # the walk stops at the last heavy-path vertex within the root bound
            sizes = t.subtree_sizes
            heavy = max(t.children[v], key=lambda c: sizes[c], default=None)
            if heavy is not None:
                assert n - sizes[heavy] + 1 > ceil_share(lam, n)
            sizes_out = [res.root_part.n] + [p.n for p in res.child_parts]
            assert sum(sizes_out) == n
            if n >= 2:
                mres = split_marked(mt, lam)
                mv = mres.split_vertex
                assert mv != w and mv in path_to(t, w)
                assert marked_ok(t, w, mv, lam)
                assert mres.marked_part.vertices[mres.marked_part.tree.marked] == w
                total = mres.root_part.n + mres.marked_part.n + sum(p.n for p in mres.other_parts)
                assert total == n


# reassembly ------------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(st.integers(1, 200), st.sampled_from(list(FamilyKind)), st.integers(0, 10**6), st.sampled_from(LAMBDAS))
def test_reassembly_restores_tree(n, family, seed, lam):
    t = random_tree(n, family, seed)
    res = split_plain(t, lam)
    back = reassemble(n, res.split_vertex, [res.root_part, *res.child_parts])
    assert back.parent == t.parent
    if n >= 2:
        mres = split_marked(MarkedTree(t, _random_leaf(t, seed)), lam)
        back = reassemble(n, mres.split_vertex, [mres.root_part, mres.marked_part, *mres.other_parts])
        assert canonical_form(back) == canonical_form(t)
        assert back.parent == t.parent


def test_child_parts_sorted_descending():
    for seed in range(50):
        t = random_tree(300, FamilyKind.GENERAL, seed)
        sizes = [p.n for p in split_plain(t, 0.341395).child_parts]
        assert sizes == sorted(sizes, reverse=True)
