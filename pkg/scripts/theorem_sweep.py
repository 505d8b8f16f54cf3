#!/usr/bin/env python3
"""Grid of Koszul-module dimensions for both map variants, as text tables.

Rows are (variant, characteristic, g); columns are p. A ``.`` marks zero.
Usage: python3 scripts/theorem_sweep.py [--g 3..12] [--char 0,2,3,5,7,11,13]
"""

from __future__ import annotations

import argparse

from tangent_syzygies.cli import parse_ints, parse_range
from tangent_syzygies.linalg import FieldSpec
from tangent_syzygies.multilinear import MapVariant, koszul_module_dim


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g", type=parse_range, default=(3, 12))
    ap.add_argument("--char", type=parse_ints, default=(0, 2, 3, 5, 7, 11, 13))
    args = ap.parse_args()
    g_lo, g_hi = args.g
    for variant in MapVariant:
        for c in args.char:
            if variant is MapVariant.CARPET and c == 2:
                continue
            print(f"{variant.value}, char {c}")
            for g in range(g_lo, g_hi + 1):
                b = (g - 3) // 2
                cells = []
                for p in range(g - 2):
                    v = koszul_module_dim(g, p, variant, FieldSpec(c))
                    cells.append(f"{v if v else '.':>6}" + ("|" if p == b else " "))
                print(f"  g={g:2d} " + "".join(cells))
            print()


if __name__ == "__main__":
    main()
