"""Run Connes' sequence and the Gysin sequence side by side.

For each test algebra, prints the dimensions along the sequence, the nodes
that are reliable at this truncation, and whether the two pipelines agree
map for map.
"""

import argparse
import sys

from exactcy import generators as G, hochcyc, s1cx


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=5)
    ap.add_argument("--u-order", type=int, default=4)
    ap.add_argument("--low", type=int, default=-6)
    args = ap.parse_args(argv)
    L, U, window = args.length, args.u_order, (args.low, 0)
    status = 0
    for A in G.test_algebras() + [G.ainf_example(), G.dg_example()]:
        r1 = hochcyc.connes_les(A, L, window, U)
        _, p = hochcyc.build_chnu_complex(A, L)
        r2 = s1cx.gysin_check(p, U, window, hochcyc.connes_reliability(A, L, U))
        diffs = hochcyc.compare_les(r1, r2)
        reliable = [n for n in r1.nodes if n.reliable]
        print(f"{A.name}: {len(reliable)}/{len(r1.nodes)} reliable nodes, "
              f"Connes exact: {not r1.failures()}, Gysin exact: {not r2.failures()}, "
              f"pipelines agree: {not diffs}")
        for n in r1.nodes:
            print(f"    {n.name:>6} {n.degree:>4}  {'exact' if n.exact else 'NOT exact'}"
                  f"{'' if n.reliable else '  (unreliable)'}")
        if r1.failures() or r2.failures() or diffs:
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
