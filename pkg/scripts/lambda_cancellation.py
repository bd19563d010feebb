"""Grade the shipped front, cancel positive generators, report the spectrum.

Prints the degree spectrum before and after, every elimination in order, and
checks that replaying the log reproduces the final presentation.
"""

import argparse
import sys

from exactcy import cellce
from exactcy.formats import parse_front


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("front", nargs="?", help="a .front file (default: the shipped fixture)")
    ap.add_argument("--quiet", action="store_true", help="skip the elimination log")
    args = ap.parse_args(argv)
    f = (parse_front(open(args.front).read()) if args.front
         else cellce.lambda3333_front())
    g = cellce.grade_generators(f)
    r = cellce.cancel_positive(g)
    before, after = cellce.degree_spectrum(g), cellce.degree_spectrum(r.after)
    print(f"{len(g.degree)} generators, {len(r.log)} eliminations")
    print("degree  before  after")
    for k in sorted(set(before) | set(after)):
        print(f"{k:>6}  {before.get(k, 0):>6}  {after.get(k, 0):>5}")
    if not args.quiet:
        for e in r.log:
            print(f"  {e.b} cancels {e.a}; {e.a} -> {cellce.pformat(e.replacement)}")
    same = cellce.same_presentation(cellce.replay(g, r.log).after, r.after)
    print(f"max surviving degree: {r.max_degree}; replay identical: {same}")
    return 0 if same and (r.max_degree or 0) <= 0 else 1


if __name__ == "__main__":
    sys.exit(main())
