"""Consistency of NCA decoder tables and reconstruction of the induced tree.

Write ``anc(x, y)`` for ``g(x, y) == y`` ("y is an ancestor of x").  A table
is consistent when for all labels x, y, z:

    I    g(x, y) = z  =>  g(y, x) = z, g(x, z) = z, g(y, z) = z  (and g(x, x) = x)
    II   anc(x, y) and anc(y, z)  =>  anc(x, z)
    III  anc(x, y) and anc(x, z)  =>  g(y, z) in {y, z}

Property I also demands symmetry and idempotence: an NCA decoder answers
for unordered pairs, and without these the reconstruction below can
produce 2-cycles.  II and III are checked with boolean matrix products,
so the whole check is cubic only through BLAS.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .construction import SchemeParams
from .decoder import QueryContext, nca_query_many
from .tree_model import RootedTree, nca_oracle_many

MAX_UNIVERSE = 512


class InconsistentTableError(ValueError):
    pass


@dataclass(frozen=True)
class DecoderTable:
    """Dense decoder ``g`` on labels ``0..m-1``; row x holds g(x, 0..m-1)."""

    g: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = np.asarray(self.g)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise ValueError("decoder table must be a non-empty square matrix")
        if not np.issubdtype(g.dtype, np.integer):
            raise ValueError("decoder table entries must be integers")
        if g.min() < 0 or g.max() >= g.shape[0]:
            raise ValueError("decoder table entries must be labels in [0, m)")
        object.__setattr__(self, "g", g.astype(np.int64))

    @property
    def m(self) -> int:
        return self.g.shape[0]

    @classmethod
    def from_tree(cls, t: RootedTree) -> DecoderTable:
        """The table of NCA in ``t`` itself, vertex ids as labels."""
        xs, ys = np.indices((t.n, t.n))
        return cls(nca_oracle_many(t, xs.ravel(), ys.ravel()).reshape(t.n, t.n))

    @classmethod
    def from_scheme(cls, params: SchemeParams, n: int, max_universe: int = MAX_UNIVERSE) -> DecoderTable:
        """The decoder of S_n queried on every label pair."""
        ctx = QueryContext(params, n)
        if ctx.size > max_universe:
            raise ValueError(f"universe of {ctx.size} labels exceeds {max_universe}")
        xs, ys = np.indices((ctx.size, ctx.size))
        return cls(nca_query_many(ctx, xs.ravel(), ys.ravel()).reshape(ctx.size, ctx.size))

    def restrict(self, labels) -> DecoderTable:
        """Sub-table on ``labels`` re-indexed to 0..k-1 (rows must stay closed)."""
        labels = np.asarray(labels, dtype=np.int64)
        index = np.full(self.m, -1, dtype=np.int64)
        index[labels] = np.arange(labels.size)
        sub = index[self.g[np.ix_(labels, labels)]]
        if (sub < 0).any():
            raise ValueError("label set is not closed under g")
        return DecoderTable(sub)


@dataclass(frozen=True)
class ConsistencyReport:
    violations: tuple[tuple[str, tuple[int, int, int]], ...]

    @property
    def consistent(self) -> bool:
        return not self.violations

    def counts(self) -> dict[str, int]:
        out = {"I": 0, "II": 0, "III": 0}
        for prop, _ in self.violations:
            out[prop] += 1
        return out


def _ancestor_matrix(g: np.ndarray) -> np.ndarray:
    return g == np.arange(g.shape[0])[None, :]


def check_consistent(table: DecoderTable, max_universe: int = MAX_UNIVERSE) -> ConsistencyReport:
    m = table.m
    if m > max_universe:
        raise ValueError(f"universe of {m} labels exceeds the limit {max_universe}")
    g = table.g
    violations: list[tuple[str, tuple[int, int, int]]] = []

    # I: per ordered pair, z = g(x, y) is fixed
    xs, ys = np.indices((m, m))
    z = g
    ok = (g.T == z) & (g[xs, z] == z) & (g[ys, z] == z)
    ok &= (xs != ys) | (z == xs)
    for x, y in zip(*np.nonzero(~ok)):
        violations.append(("I", (int(x), int(y), int(g[x, y]))))

    anc = _ancestor_matrix(g)
    a = anc.astype(np.float64)
    # II: some y with anc(x, y), anc(y, z) but not anc(x, z)
    bad = ((a @ a) > 0) & ~anc
    for x, zz in zip(*np.nonzero(bad)):
        for y in np.flatnonzero(anc[x] & anc[:, zz]):
            violations.append(("II", (int(x), int(y), int(zz))))
    # III: some x below both y and z, yet g(y, z) is neither
    comparable = (g == np.arange(m)[:, None]) | (g == np.arange(m)[None, :])
    bad = ((a.T @ a) > 0) & ~comparable
    for y, zz in zip(*np.nonzero(bad)):
        for x in np.flatnonzero(anc[:, y] & anc[:, zz]):
            violations.append(("III", (int(x), int(y), int(zz))))
    violations.sort(key=lambda v: (v[0], v[1]))
    return ConsistencyReport(tuple(violations))


def labels_to_tree(table: DecoderTable, max_universe: int = MAX_UNIVERSE) -> RootedTree:
    """Tree on the labels: v is the parent of u iff v is the nearest proper ancestor.

    Refuses inconsistent tables.
    """
    report = check_consistent(table, max_universe)
    if not report.consistent:
        raise InconsistentTableError(f"table is inconsistent ({report.counts()})")
    m = table.m
    anc = _ancestor_matrix(table.g)
    np.fill_diagonal(anc, False)
    a = anc.astype(np.float64)
    between = (a @ a) > 0
    edges = anc & ~between
    out_degree = edges.sum(axis=1)
    if (out_degree > 1).any():
        raise InconsistentTableError("a label has more than one parent")
    roots = np.flatnonzero(out_degree == 0)
    if roots.size != 1:
        raise InconsistentTableError(f"expected one root, found {roots.size}")
    parent = np.arange(m)
    us, vs = np.nonzero(edges)
    parent[us] = vs
    return RootedTree.from_parents(parent)


def read_table(path: str | Path) -> DecoderTable:
    lines = [ln.split() for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must hold the universe size m")
    m = int(lines[0][0])
    rows = lines[1:]
    if len(rows) != m or any(len(r) != m for r in rows):
        raise ValueError(f"expected {m} rows of {m} labels (table must be total)")
    return DecoderTable(np.array([[int(v) for v in r] for r in rows], dtype=np.int64))


def write_table(table: DecoderTable, path: str | Path | None = None) -> str:
    text = f"{table.m}\n" + "\n".join(" ".join(map(str, row)) for row in table.g.tolist()) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
