"""Antipode of n points in convex position for n = 0..N, with timings."""

import argparse
import time

from convgeo.constructions import convex_position_points, convex_shelling
from convgeo.hopf import HopfVector, geometry_key, antipode_chain, antipode_recursive


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--method", choices=["chain", "recursive"], default="recursive")
    args = ap.parse_args()
    s = antipode_recursive if args.method == "recursive" else antipode_chain
    for n in range(args.max_n + 1):
        g = convex_shelling(convex_position_points(n))
        start = time.perf_counter()
        value = s(g)
        took = time.perf_counter() - start
        ok = value == HopfVector.basis(g, (-1) ** n)
        coeff = value.terms.get(geometry_key(g), 0)
        print(f"n={n}  closed sets={len(g.closed):3d}  terms={len(value)}  coefficient={str(coeff):>2}  "
              f"sign law {'holds' if ok else 'FAILS'}  {took:.3f}s")


if __name__ == "__main__":
    main()
