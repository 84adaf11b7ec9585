import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncatrees.construction import BINARY_BASIC, BINARY_OPT, GENERAL_OPT, PLAIN, materialize, materialize_parents
from ncatrees.decoder import QueryContext, locate, nca_query, nca_query_many
from ncatrees.tree_model import depths_by_doubling, lift_nca, nca_oracle_many

PROFILES = [BINARY_BASIC, BINARY_OPT, GENERAL_OPT]


def test_locate_examples():
    ctx = QueryContext(BINARY_BASIC, 3)
    assert locate(ctx, PLAIN, 3, 0) == (0, 0)
    assert locate(ctx, PLAIN, 3, 4) == (2, 0)
    assert locate(ctx, PLAIN, 3, 3) == (1, 0)
    with pytest.raises(ValueError):
        locate(ctx, PLAIN, 3, 5)


def test_nca_examples():
    ctx = QueryContext(BINARY_BASIC, 3)
    assert nca_query(ctx, 3, 4) == 1
    assert nca_query(ctx, 2, 4) == 0
    for x in range(5):
        assert nca_query(ctx, x, x) == x


def test_out_of_range():
    ctx = QueryContext(BINARY_BASIC, 3)
    with pytest.raises(ValueError):
        nca_query(ctx, 0, 5)
    with pytest.raises(ValueError):
        nca_query_many(ctx, [0, 1], [1, -1])
    with pytest.raises(ValueError):
        QueryContext(BINARY_BASIC, 0)


@pytest.mark.parametrize("params", PROFILES, ids=lambda p: p.profile)
def test_scalar_matches_materialized_tree(params):
    for n in range(1, 13):
        t = materialize(params, PLAIN, n)
        ctx = QueryContext(params, n)
        xs, ys = np.indices((t.n, t.n))
        want = nca_oracle_many(t, xs.ravel(), ys.ravel())
        got = [nca_query(ctx, int(x), int(y)) for x, y in zip(xs.ravel(), ys.ravel())]
        assert got == want.tolist()


@pytest.mark.parametrize("params", PROFILES, ids=lambda p: p.profile)
def test_batch_matches_scalar(params):
    ctx = QueryContext(params, 150)
    rng = np.random.default_rng(5)
    xs, ys = rng.integers(0, ctx.size, 3000), rng.integers(0, ctx.size, 3000)
    batch = nca_query_many(ctx, xs, ys)
    assert batch.tolist() == [nca_query(ctx, int(x), int(y)) for x, y in zip(xs, ys)]
    assert nca_query_many(ctx, [], []).size == 0


@pytest.mark.parametrize("params", PROFILES, ids=lambda p: p.profile)
@pytest.mark.parametrize("n", [50, 100, 200])
def test_random_pairs_mid_range(params, n):
    par = materialize_parents(params, PLAIN, n)
    depth = depths_by_doubling(par)
    rng = np.random.default_rng(n)
    xs, ys = rng.integers(0, par.size, 10**5), rng.integers(0, par.size, 10**5)
    assert np.array_equal(nca_query_many(QueryContext(params, n), xs, ys), lift_nca(par, depth, xs, ys))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PROFILES), st.integers(1, 3000), st.data())
def test_algebraic_laws(params, n, data):
    ctx = QueryContext(params, n)
    label = st.integers(0, ctx.size - 1)
    x, y, z = data.draw(label), data.draw(label), data.draw(label)
    g = lambda a, b: nca_query(ctx, a, b)
    assert g(x, y) == g(y, x)
    assert g(x, x) == x
    assert g(x, g(x, y)) == g(x, y)
    assert g(g(x, y), z) == g(x, g(y, z))


def test_probe_and_depth_bounds():
    for params, n in [(BINARY_OPT, 10**5), (GENERAL_OPT, 3000), (BINARY_BASIC, 10**4)]:
        ctx = QueryContext(params, n)
        rng = np.random.default_rng(1)
        for _ in range(2000):
            before = ctx.probe_counter
            nca_query(ctx, int(rng.integers(ctx.size)), int(rng.integers(ctx.size)))
            assert ctx.last_depth <= ctx.depth_bound()
            assert ctx.probe_counter - before <= ctx.depth_bound() * (np.ceil(np.log2(n)) + 2)


def test_single_vertex_universe():
    ctx = QueryContext(GENERAL_OPT, 1)
    assert ctx.size == 1 and nca_query(ctx, 0, 0) == 0 and ctx.probe_counter == 0


def test_batch_guards_int64():
    ctx = QueryContext(BINARY_BASIC, 5 * 10**9)
    assert ctx.size >= 2**62
    with pytest.raises(OverflowError):
        nca_query_many(ctx, [0], [0])
    # python ints never wrap in the scalar path
    big = ctx.size - 1
    assert nca_query(ctx, big, big) == big
    assert nca_query(ctx, 0, big) == 0
