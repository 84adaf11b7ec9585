"""NCA queries answered from two labels alone.

The query descends the implicit recursion.  At a node (kind, m) both
labels are located among the slot offsets by binary search:

* same slot: continue inside that slot with offset-translated labels;
* different slots, neither the top copy: the answer is the attachment
  vertex (the top copy's marked leaf);
* one label in the top copy: the other label's image is the attachment
  vertex, so continue inside the top copy against its marked leaf.

Offsets come from the lazily built slot tables of the size cache.
"""
from __future__ import annotations

import heapq
import math

import numpy as np

from .construction import MARKED, PLAIN, NodeKind, SchemeParams, size_cache

INT64_LIMIT = 2**62


class QueryContext:
    """Decoder state for one (params, n): slot tables plus probe counters.

    ``probe_counter`` counts offset comparisons made by binary search and
    accumulates across queries; ``last_depth`` is the number of recursion
    levels the most recent scalar query visited.
    """

    def __init__(self, params: SchemeParams, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.params = params
        self.n = n
        self.cache = size_cache(params)
        self.size = self.cache.plain(n)
        self.probe_counter = 0
        self.last_depth = 0
        self._arrays: dict[tuple[NodeKind, int], tuple] = {}

    def check_label(self, x: int):
        if not 0 <= x < self.size:
            raise ValueError(f"label {x} out of range [0, {self.size})")

    def depth_bound(self) -> float:
        """2 * log_{1/(1-lam)}(n) + 4."""
        if self.n == 1:
            return 4.0
        return 2.0 * math.log(self.n) / -math.log1p(-self.params.lam) + 4.0

    def probe_bound(self) -> float:
        return self.depth_bound() * (math.ceil(math.log2(self.n)) + 2)

    def _numpy_table(self, kind: NodeKind, m: int):
        got = self._arrays.get((kind, m))
        if got is None:
            tab = self.cache.table(kind, m)
            got = (
                np.array(tab.offsets, dtype=np.int64),
                [e.kind for e in tab.entries],
                [e.param for e in tab.entries],
            )
            self._arrays[(kind, m)] = got
        return got


def locate(ctx: QueryContext, kind: NodeKind, m: int, x: int) -> tuple[int, int]:
    """Slot index holding label ``x`` of the (kind, m) tree, and the slot-local label."""
    total = ctx.cache.size(kind, m)
    if not 0 <= x < total:
        raise ValueError(f"label {x} out of range [0, {total})")
    offsets = ctx.cache.table(kind, m).offsets
    lo, hi = 0, len(offsets) - 1
    probes = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        probes += 1
        if offsets[mid] <= x:
            lo = mid
        else:
            hi = mid - 1
    ctx.probe_counter += probes
    return lo, x - offsets[lo]


def nca_query(ctx: QueryContext, x: int, y: int) -> int:
    ctx.check_label(x)
    ctx.check_label(y)
    cache = ctx.cache
    kind, m, base = PLAIN, ctx.n, 0
    depth = 0
    while True:
        depth += 1
        if x == y:
            break
        table = cache.table(kind, m)
        ix, lx = locate(ctx, kind, m, x)
        iy, ly = locate(ctx, kind, m, y)
        if ix == iy:
            slot = table[ix]
            base += slot.offset
            kind, m, x, y = slot.kind, slot.param, lx, ly
            continue
        if ix and iy:
            x = cache.attachment(kind, m)
            break
        top = table[0].param
        # slot 0 starts at offset 0, so the label found there is already local
        if ix == 0:
            y = cache.marked_leaf(top)
        else:
            x = cache.marked_leaf(top)
        kind, m = MARKED, top
    ctx.last_depth = depth
    return base + x


def nca_query_many(ctx: QueryContext, xs, ys) -> np.ndarray:
    """Vectorised :func:`nca_query` over paired label arrays (no probe counting).

    Pairs are grouped by the (kind, m) node they currently sit in; groups
    are processed largest m first, so each group is handled once after all
    pairs flowing into it have arrived.
    """
    if ctx.size >= INT64_LIMIT:
        raise OverflowError(f"labels up to {ctx.size} do not fit the int64 batch decoder")
    x = np.asarray(xs, dtype=np.int64).ravel()
    y = np.asarray(ys, dtype=np.int64).ravel()
    if x.shape != y.shape:
        raise ValueError("label arrays differ in length")
    if x.size and (min(x.min(), y.min()) < 0 or max(x.max(), y.max()) >= ctx.size):
        raise ValueError(f"label out of range [0, {ctx.size})")
    cache = ctx.cache
    out = np.empty(x.size, dtype=np.int64)
    pending: dict[tuple[NodeKind, int], list] = {}
    heap: list[tuple[int, str]] = []

    def push(kind, m, idx, a, b, base):
        key = (kind, m)
        if key not in pending:
            pending[key] = []
            heapq.heappush(heap, (-m, kind.value))
        pending[key].append((idx, a, b, base))

    push(PLAIN, ctx.n, np.arange(x.size), x, y, np.zeros(x.size, dtype=np.int64))
    while heap:
        neg_m, kind_value = heapq.heappop(heap)
        kind, m = NodeKind(kind_value), -neg_m
        chunks = pending.pop((kind, m))
        idx = np.concatenate([c[0] for c in chunks])
        a = np.concatenate([c[1] for c in chunks])
        b = np.concatenate([c[2] for c in chunks])
        base = np.concatenate([c[3] for c in chunks])

        done = a == b
        out[idx[done]] = base[done] + a[done]
        keep = ~done
        if not keep.any():
            continue
        idx, a, b, base = idx[keep], a[keep], b[keep], base[keep]

        offsets, kinds, params = ctx._numpy_table(kind, m)
        ia = np.searchsorted(offsets, a, side="right") - 1
        ib = np.searchsorted(offsets, b, side="right") - 1

        apart = (ia != ib) & (ia != 0) & (ib != 0)
        out[idx[apart]] = base[apart] + cache.attachment(kind, m)

        in_top = (ia != ib) & ~apart
        if in_top.any():
            top = params[0]
            leaf = cache.marked_leaf(top)
            a2 = np.where(ia[in_top] == 0, a[in_top], leaf)
            b2 = np.where(ib[in_top] == 0, b[in_top], leaf)
            push(MARKED, top, idx[in_top], a2, b2, base[in_top])

        same = ia == ib
        if same.any():
            s_idx, s_a, s_b, s_base, s_slot = idx[same], a[same], b[same], base[same], ia[same]
            order = np.argsort(s_slot, kind="stable")
            sorted_slot = s_slot[order]
            cuts = np.flatnonzero(np.diff(sorted_slot)) + 1
            starts = np.concatenate(([0], cuts))
            for start, group in zip(starts, np.split(order, cuts)):
                j = int(sorted_slot[start])
                off = offsets[j]
                push(kinds[j], params[j], s_idx[group], s_a[group] - off, s_b[group] - off, s_base[group] + off)
    return out
