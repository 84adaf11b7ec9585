"""Universality checks: embed a tree, then compare decoded NCAs with the oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construction import SchemeParams
from .decoder import QueryContext, nca_query_many
from .encoder import embed
from .tree_model import RootedTree, enumerate_trees, nca_oracle_many, random_tree


@dataclass
class VerifyTally:
    trees: int = 0
    pairs: int = 0
    structural_failures: int = 0
    commutation_failures: int = 0

    @property
    def ok(self) -> bool:
        return self.structural_failures == 0 and self.commutation_failures == 0

    def add(self, other: VerifyTally):
        self.trees += other.trees
        self.pairs += other.pairs
        self.structural_failures += other.structural_failures
        self.commutation_failures += other.commutation_failures

    def lines(self) -> list[str]:
        return [
            f"trees {self.trees}",
            f"pairs {self.pairs}",
            f"structural_failures {self.structural_failures}",
            f"commutation_failures {self.commutation_failures}",
        ]


def check_tree(params: SchemeParams, t: RootedTree, n: int | None = None, pairs: int | None = None, seed: int = 0) -> VerifyTally:
    """Embed ``t`` into S_n and test commutation on all pairs or ``pairs`` sampled ones.

    Sampled pairs are drawn uniformly (with replacement) over ordered
    vertex pairs from a generator seeded by ``seed``.
    """
    assignment = embed(params, t, n)
    labels = np.asarray(assignment.labels, dtype=np.int64)
    tally = VerifyTally(trees=1)
    if len(set(assignment.labels)) != t.n or labels.min() < 0 or labels.max() >= assignment.size:
        tally.structural_failures = 1
        return tally
    if pairs is None:
        us, vs = np.triu_indices(t.n)
    else:
        rng = np.random.default_rng(seed)
        us = rng.integers(0, t.n, size=pairs)
        vs = rng.integers(0, t.n, size=pairs)
    ctx = QueryContext(params, assignment.n)
    decoded = nca_query_many(ctx, labels[us], labels[vs])
    expected = labels[nca_oracle_many(t, us, vs)]
    tally.pairs = len(us)
    tally.commutation_failures = int((decoded != expected).sum())
    return tally


def verify_exhaustive(params: SchemeParams, max_n: int) -> VerifyTally:
    total = VerifyTally()
    for k in range(1, max_n + 1):
        for t in enumerate_trees(k, params.family):
            total.add(check_tree(params, t))
    return total


def verify_random(params: SchemeParams, count: int, size: int, seed: int, pairs: int | None = None) -> VerifyTally:
    """``count`` random trees of ``size`` vertices, tree i drawn with seed ``seed + i``."""
    total = VerifyTally()
    for i in range(count):
        t = random_tree(size, params.family, seed + i)
        total.add(check_tree(params, t, pairs=pairs, seed=seed + i))
    return total
