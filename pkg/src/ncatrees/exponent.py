"""Size exponents of the recursive constructions.

With ``|S_k| <= k**beta`` and ``|S'_k| <= c * k**beta`` as the induction
hypothesis, the MARKED recurrence forces ``c >= 1 / (1 - 2**(1 - beta))``
(binary) or ``c >= zeta(beta) / (1 - 2**(1 - beta))`` (general), and the
PLAIN recurrence then closes iff

    binary : (1 - lam)**beta + c * lam**beta + 2**-beta          <= 1
    general: (1 - lam)**beta + c * lam**beta + (zeta(beta) - 1)  <= 1

``solve_beta`` finds the smallest such beta by bisection and
``optimize_lambda`` minimises it over lam.
"""
from __future__ import annotations

import math

from .tree_model import FamilyKind

BETA_LO = 1.06
BETA_HI = 4.0
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def zeta(s: float, tol: float = 1e-12) -> float:
    """Riemann zeta for real s > 1.05 by Euler-Maclaurin summation.

    Partial sum to N-1, then the integral tail, half the N-th term and the
    first Bernoulli correction; N is chosen so the next correction term
    (an upper bound on the remainder) stays below ``tol``.
    """
    if s <= 1.05:
        raise ValueError(f"s={s} too close to 1 (need s > 1.05)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    remainder_coeff = s * (s + 1) * (s + 2) / 720.0
    n_terms = max(10, math.ceil((2.0 * remainder_coeff / tol) ** (1.0 / (s + 3))))
    if n_terms > 10**7:
        raise ValueError(f"s={s} too close to 1 for tol={tol}")
    partial = math.fsum(k ** -s for k in range(1, n_terms))
    big_n = float(n_terms)
    tail = big_n ** (1 - s) / (s - 1) + 0.5 * big_n ** -s + s * big_n ** (-s - 1) / 12.0
    return partial + tail


def marked_constant(family: FamilyKind, beta: float) -> float:
    """Smallest c closing the MARKED recurrence at exponent beta."""
    denom = 1.0 - 2.0 ** (1.0 - beta)
    if family is FamilyKind.BINARY:
        return 1.0 / denom
    return zeta(beta, 1e-13) / denom


def plain_slack(family: FamilyKind, lam: float, beta: float) -> float:
    """Left side minus 1 of the PLAIN closing inequality; <= 0 means feasible."""
    c = marked_constant(family, beta)
    lhs = (1 - lam) ** beta + c * lam**beta
    if family is FamilyKind.BINARY:
        lhs += 2.0 ** -beta
    else:
        lhs += zeta(beta, 1e-13) - 1.0
    return lhs - 1.0


def solve_beta(family: FamilyKind, lam: float, tol: float = 1e-9) -> tuple[float, float]:
    """Smallest feasible beta in (1, 4] for split parameter ``lam``; returns (beta, c)."""
    if not 0.0 < lam <= 0.5:
        raise ValueError(f"lambda must lie in (0, 1/2], got {lam}")
    lo, hi = BETA_LO, BETA_HI
    if plain_slack(family, lam, hi) > 0:
        raise ValueError(f"no feasible beta in ({lo}, {hi}] for lambda={lam}")
    if plain_slack(family, lam, lo) <= 0:
        raise ValueError(f"beta is feasible already at {lo}; bracket too narrow")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if plain_slack(family, lam, mid) <= 0:
            hi = mid
        else:
            lo = mid
    return hi, marked_constant(family, hi)


def _beta_or_inf(family: FamilyKind, lam: float, tol: float) -> float:
    try:
        return solve_beta(family, lam, tol)[0]
    except ValueError:
        return math.inf


def optimize_lambda(family: FamilyKind, tol: float = 1e-6, lo: float = 0.01, hi: float = 0.5) -> tuple[float, float]:
    """Golden-section search for the lambda minimising beta on [lo, hi]."""
    beta_tol = min(tol, 1e-7) * 1e-2
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = _beta_or_inf(family, x1, beta_tol)
    f2 = _beta_or_inf(family, x2, beta_tol)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = _beta_or_inf(family, x1, beta_tol)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = _beta_or_inf(family, x2, beta_tol)
    lam = 0.5 * (a + b)
    return lam, solve_beta(family, lam, beta_tol)[0]
