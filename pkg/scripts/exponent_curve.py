#!/usr/bin/env python3
"""beta(lambda) for both families on a grid, plus the optimum found by golden-section search.

    python3 scripts/exponent_curve.py --steps 50
"""
import argparse

from ncatrees.exponent import optimize_lambda, solve_beta
from ncatrees.tree_model import FamilyKind


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=50)
    args = ap.parse_args()
    print("family,lambda,beta,c")
    for family in FamilyKind:
        for k in range(1, args.steps + 1):
            lam = 0.5 * k / args.steps
            try:
                beta, c = solve_beta(family, lam)
            except ValueError:
                continue
            print(f"{family.value},{lam:.4f},{beta:.6f},{c:.6f}")
    for family in FamilyKind:
        lam, beta = optimize_lambda(family, 1e-7)
        print(f"# optimum {family.value}: lambda*={lam:.6f} beta*={beta:.6f}")


if __name__ == "__main__":
    main()
