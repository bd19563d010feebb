import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exactcy import cellce
from exactcy.cellce import Cell, FrontComplex, FrontError, Gen

seeds = st.integers(0, 100_000)


def H(**kw):
    return {k: Fraction(v) for k, v in kw.items()}


def two_sheets(mu=(1, 0), gamma_cusp=False):
    pot = {"S1": mu[0], "S2": mu[1]}
    gamma = H(S1=0, S2=0) if gamma_cusp else H(S1=2, S2=1)
    cells = (Cell("al", 0, H(S1=2, S2=1)), Cell("ga", 0, gamma),
             Cell("be", 1, H(S1=2, S2=1), ("al", "ga")), Cell("fa", 2, H(S1=2, S2=1)))
    return FrontComplex(pot, cells)


def test_grading_formulas():
    g = cellce.grade_generators(two_sheets())
    assert g.degree[Gen("a", "al", "S1", "S2")] == 0
    assert g.degree[Gen("b", "be", "S1", "S2")] == -1
    assert g.degree[Gen("c", "fa", "S1", "S2")] == -2


def test_equal_potentials_give_positive_a():
    g = cellce.grade_generators(two_sheets((0, 0)))
    assert g.degree[Gen("a", "al", "S1", "S2")] == 1


def test_two_sheet_differential():
    g = cellce.grade_generators(two_sheets())
    db = g.diff[Gen("b", "be", "S1", "S2")]
    assert db == {(Gen("a", "al", "S1", "S2"),), (Gen("a", "ga", "S1", "S2"),)}


def test_three_sheet_differential():
    pot = {"m": 0, "k": 0, "n": 0}
    h = H(m=3, k=2, n=1)
    f = FrontComplex(pot, (Cell("al", 0, h), Cell("ga", 0, h), Cell("be", 1, h, ("al", "ga"))))
    g = cellce.grade_generators(f)
    a = lambda c, x, y: Gen("a", c, x, y)  # noqa: E731
    b = lambda x, y: Gen("b", "be", x, y)  # noqa: E731
    want = {(a("al", "m", "n"),), (a("ga", "m", "n"),),
            (a("al", "m", "k"), b("k", "n")), (b("m", "k"), a("ga", "k", "n"))}
    assert g.diff[b("m", "n")] == want
    assert cellce.pformat(g.diff[b("m", "n")]).count("+") == 3


def test_no_positive_generators_means_nothing_to_cancel():
    g = cellce.grade_generators(two_sheets())
    r = cellce.cancel_positive(g)
    assert r.log == [] and cellce.same_presentation(r.after, g)


def test_single_cancellation():
    g = cellce.grade_generators(two_sheets((0, 0), gamma_cusp=True))
    assert g.positive() == [Gen("a", "al", "S1", "S2")]
    r = cellce.cancel_positive(g)
    assert [(e.b, e.a) for e in r.log] == [(Gen("b", "be", "S1", "S2"), Gen("a", "al", "S1", "S2"))]
    assert r.max_degree <= 0


def test_bad_fronts_rejected():
    with pytest.raises(FrontError):
        FrontComplex({"S": 0}, (Cell("x", 1, H(S=0), ("p", "q")),))
    with pytest.raises(FrontError):
        FrontComplex({"S": 0}, (Cell("x", 0, H(T=0)),))
    with pytest.raises(FrontError):  # order reversed across the matching
        FrontComplex({"A": 0, "B": 0}, (Cell("p", 0, H(A=1, B=2)), Cell("q", 0, H(A=1, B=2)),
                                        Cell("e", 1, H(A=2, B=1), ("p", "q"))))


def test_empty_front():
    g = cellce.grade_generators(FrontComplex({}, ()))
    assert cellce.degree_spectrum(g) == {}


def test_replay_of_a_foreign_order_fails():
    g = cellce.grade_generators(two_sheets((0, 0), gamma_cusp=True))
    with pytest.raises(cellce.CancellationCycle):
        cellce.cancel_positive(g, [(Gen("b", "be", "S1", "S2"), Gen("a", "ga", "S1", "S2"))])


def random_front(rng):
    """A path of 0-cells joined by 1-cells; sheets keep their order and may
    merge (a cusp) over a 0-cell."""
    k = rng.randint(2, 4)
    sheets = [f"S{i}" for i in range(k)]
    pot = {s: rng.choice([0, 0, 1, -1]) for s in sheets}
    n0 = rng.randint(2, 4)
    cells = []
    for i in range(n0):
        h, level = {}, 10
        for s in sheets:
            if h and rng.random() < 0.2:
                h[s] = Fraction(level)  # merge with the sheet above
            else:
                level -= 1
                h[s] = Fraction(level)
        cells.append(Cell(f"v{i}", 0, h))
    full = {s: Fraction(10 - i) for i, s in enumerate(sheets)}
    for i in range(n0 - 1):
        cells.append(Cell(f"e{i}", 1, full, (f"v{i}", f"v{i + 1}")))
    return FrontComplex(pot, tuple(cells))


@given(seeds)
def test_grading_rechecked_independently(seed):
    f = random_front(random.Random(seed))
    g = cellce.grade_generators(f)
    shift = {"a": 1, "b": 0, "c": -1}
    for gen, d in g.degree.items():
        assert d == f.potential[gen.n] - f.potential[gen.m] + shift[gen.kind]
        assert f.cell(gen.cell).precedes(gen.m, gen.n)


@given(seeds)
def test_differential_raises_degree_by_one(seed):
    g = cellce.grade_generators(random_front(random.Random(seed)))
    for b, p in g.diff.items():
        for mono in p:
            assert cellce.term_degree(g, mono) == g.degree[b] + 1


@given(seeds)
def test_elimination_invariants(seed):
    g = cellce.grade_generators(random_front(random.Random(seed)))
    r = cellce.cancel_positive(g)
    work = g.copy()
    for e in r.log:
        n_before, pos_before = len(work.degree), len(work.positive())
        new = cellce.eliminate(work, e.b, e.a)
        assert new == e
        assert len(work.degree) == n_before - 2
        # a is positive; b is too only when its sheets have rising potential
        assert len(work.positive()) == pos_before - 1 - (g.degree[e.b] > 0)
        for mono in e.replacement:
            assert cellce.term_degree(work, mono) == g.degree[e.a]
    assert cellce.same_presentation(work, r.after)
    assert cellce.same_presentation(cellce.replay(g, r.log).after, r.after)


def test_fixture_spectrum():
    g = cellce.grade_generators(cellce.lambda3333_front())
    before = cellce.degree_spectrum(g)
    assert before.get(1, 0) >= 1
    r = cellce.cancel_positive(g)
    after = cellce.degree_spectrum(r.after)
    assert r.max_degree <= 0
    assert all(g.degree[e.b] == 0 and g.degree[e.a] == 1 for e in r.log)
    assert {k for k in before if before[k] != after.get(k, 0)} <= {0, 1}
    assert sum(before.values()) - sum(after.values()) == 2 * len(r.log)
