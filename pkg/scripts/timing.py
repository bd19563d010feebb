"""Time each seeded suite at full size and print its summary line."""

import argparse
import sys
import time

from exactcy import suites


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    ok = True
    # all_suites runs them in sequence; rebuild the list lazily to time each one
    scale = 4 if args.quick else 1
    jobs = [
        ("s1-axioms", lambda: suites.s1_axioms(args.seed, 200 // scale, 20 // scale, 50 // scale)),
        ("hochschild-identities", lambda: suites.hochschild_identities(
            suites.test_algebras() + suites.extra_algebras())),
        ("ch-vs-chnu", suites.quasi_iso),
        ("connes-gysin", suites.connes_gysin),
        ("marking-vs-snake", lambda: suites.marking_vs_snake(args.seed + 1, 50 // scale)),
        ("ginzburg", lambda: suites.ginzburg_suite(args.seed + 2, 100 // scale)),
        ("bar-cobar", suites.bar_cobar),
        ("bar-cobar-random", lambda: suites.bar_cobar_random(args.seed + 3, 20 // scale)),
        ("cellular-ce", suites.cellular),
    ]
    for name, job in jobs:
        t = time.perf_counter()
        res = job()
        ok &= res.ok
        print(f"{name:<24} {'ok' if res.ok else 'FAIL':<5} {res.trials:>4} trials  "
              f"{time.perf_counter() - t:6.2f} s")
    print(f"total {time.perf_counter() - t0:.2f} s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
