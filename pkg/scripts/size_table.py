#!/usr/bin/env python3
"""Sizes of S_n for the three profiles at logarithmically spaced n, with the empirical exponent.

    python3 scripts/size_table.py --max-n 100000 > sizes.csv
"""
import argparse
import math
import sys

from ncatrees.construction import PROFILES, label_bits, profile, size_cache
from ncatrees.tree_model import FamilyKind


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=10**5)
    ap.add_argument("--general-max-n", type=int, default=10**4, help="general sizes cost O(sqrt n) per n")
    ap.add_argument("--points", type=int, default=25)
    args = ap.parse_args()

    print("profile,n,size_plain,size_marked,bits,log_n_size,claimed_exponent")
    for name, preset in PROFILES.items():
        params = profile(name)
        top = args.general_max_n if preset.family is FamilyKind.GENERAL else args.max_n
        cache = size_cache(params)
        ns = sorted({round(math.exp(math.log(top) * k / (args.points - 1))) for k in range(args.points)})
        for n in ns:
            sp, sm = cache.plain(n), cache.marked(n)
            expo = math.log(sp) / math.log(n) if n > 1 else float("nan")
            print(f"{name},{n},{sp},{sm},{label_bits(sp)},{expo:.5f},{preset.exponent}")
    sys.stdout.flush()


if __name__ == "__main__":
    main()
