"""The ten acceptance criteria, one test each.

Each test records a pass/fail line with its runtime; the lines are printed at
the end of the pytest run (see conftest.py).  ``python3 tests/test_acceptance.py``
runs the same checks without pytest.
"""

import os
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from exactcy import generators as G  # noqa: E402
from exactcy import hochcyc, suites  # noqa: E402
from oracles import hh_dual_numbers, resolution_is_exact  # noqa: E402

SEED = 20240601
RESULTS: dict = {}


@contextmanager
def criterion(n: int, title: str, limit: float | None = None):
    t0 = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        ok = True
    except AssertionError as e:
        note = str(e).splitlines()[0] if str(e) else "assertion failed"
        raise
    finally:
        dt = time.perf_counter() - t0
        if ok and limit is not None and dt > limit:
            ok, note = False, f"over the {limit:.0f} s limit"
        RESULTS[n] = (ok, f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title} ({dt:.1f} s)"
                      + (f": {note}" if note else ""))
    if not ok:
        raise AssertionError(note)


def check_suite(res: suites.SuiteResult):
    assert res.ok, f"{res.name}: {res.failures[:3]}"


def test_c01_s1_axioms():
    with criterion(1, "S^1 axioms on random complexes, mutations detected", 120):
        res = suites.s1_axioms(SEED, n_strict=200, n_alg=20, n_mut=50, L=5)
        check_suite(res)
        assert res.stats["mutations_detected"] == "50/50"
        assert res.trials >= 270


def test_c02_non_unital_identities():
    with criterion(2, "b_nu^2, B_nu^2, b_nu B_nu + B_nu b_nu vanish; B_nu = s_nu N", 120):
        check_suite(suites.hochschild_identities(G.test_algebras() + suites.extra_algebras(),
                                                 L=5))


def test_c03_reduced_vs_non_unital():
    with criterion(3, "CH and CH^nu Betti numbers agree in degrees 0..3"):
        check_suite(suites.quasi_iso(G.test_algebras(), L=5, degrees=(0, -1, -2, -3)))


def test_c04_hochschild_oracle():
    with criterion(4, "HH(Q[x]/(x^2)) in degrees 0..4 matches the resolution oracle", 60):
        assert resolution_is_exact()
        want = hh_dual_numbers(4)
        h = hochcyc.hh_table(G.dual_numbers(), 6)
        for n in range(5):
            assert h.is_reliable(-n), f"degree {n} not certified"
            assert h[-n] == want[n], f"degree {n}: {h[-n]} != {want[n]}"


def test_c05_connes_and_gysin():
    with criterion(5, "Connes and Gysin sequences exact and equal map for map"):
        res = suites.connes_gysin(G.test_algebras(), L=5, U=4, window=(-6, 0))
        check_suite(res)
        assert all(v > 0 for v in res.stats.values())


def test_c06_marking_map():
    with criterion(6, "marking map equals the snake connecting map on 50 cocycles"):
        res = suites.marking_vs_snake(SEED, n=50)
        check_suite(res)
        assert res.trials == 50


def test_c07_ginzburg():
    with criterion(7, "Q_100 differential verbatim; d^2 = 0 on 100 random (Q, w)", 180):
        res = suites.ginzburg_suite(SEED, n=100, dim=3, W=6)
        check_suite(res)
        assert res.trials == 101


def test_c08_bar_cobar():
    with criterion(8, "Betti(H(cobar bar A)) = Betti(H(A)) for the test algebras"):
        check_suite(suites.bar_cobar(G.test_algebras(), B=6, P=5))


def test_c09_cellular():
    with criterion(9, "fixture: a degree-1 generator before, max degree <= 0 after", 60):
        res = suites.cellular()
        check_suite(res)
        assert res.stats["before"].get("1", 0) >= 1


COMMANDS = [
    ["hh", "@dual"], ["hh", "@ainf", "--length", "4"], ["hc", "@dual"], ["les", "@ut2"],
    ["gysin", "@dual"], ["ginzburg", "check", "@q100"], ["ginzburg", "jacobi", "@q100"],
    ["ginzburg", "hh", "@q100", "--weight", "4"], ["koszul", "ext", "@dual"],
    ["koszul", "barcobar", "@ainf"], ["ce", "grade", "@lambda3333"],
    ["ce", "cancel", "@lambda3333"], ["witness", "@dual"], ["selftest", "--seed", "42"],
]


def _run(argv, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=hashseed)
    p = subprocess.run([sys.executable, "-m", "exactcy", *argv, "--format", "structured"],
                       capture_output=True, env=env)
    return p.returncode, p.stdout


def test_c10_determinism():
    with criterion(10, "every command gives byte-identical structured output twice"):
        for argv in COMMANDS:
            a, b = _run(argv, "1"), _run(argv, "2")
            assert a[0] == 0, f"{' '.join(argv)} exited {a[0]}"
            assert a == b, f"{' '.join(argv)} differs between runs"


def summary_lines() -> list[str]:
    return [RESULTS[n][1] for n in sorted(RESULTS)]


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print("\n".join(summary_lines()))
    sys.exit(1 if failed else 0)
