"""Compare HH of the dual numbers against the bimodule-resolution oracle.

Runs over Q and over Z/2 for a few length truncations and prints, per degree,
the computed dimension, the oracle's, and whether the truncation certified it.
Needs sympy (the oracle lives in tests/oracles.py).
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from exactcy import generators as G, hochcyc  # noqa: E402
from exactcy.exactlin import GF2, QQ  # noqa: E402
from oracles import hh_dual_numbers  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lengths", type=int, nargs="+", default=[4, 5, 6])
    ap.add_argument("--top", type=int, default=4)
    args = ap.parse_args(argv)
    bad = 0
    for fld, char in ((QQ, 0), (GF2, 2)):
        want = hh_dual_numbers(args.top, char=char)
        for L in args.lengths:
            h = hochcyc.hh_table(G.dual_numbers(field=fld), L)
            print(f"field {fld.name}, length <= {L}")
            for n in range(args.top + 1):
                cert = h.is_reliable(-n)
                match = h[-n] == want[n]
                bad += cert and not match
                print(f"  degree {-n:>3}: got {h[-n]}  oracle {want[n]}  "
                      f"{'certified' if cert else 'uncertified'}"
                      f"{'' if match else '  (differs)'}")
    print("certified degrees agree with the oracle" if not bad
          else f"{bad} certified mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
