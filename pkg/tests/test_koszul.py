import random

import pytest
from hypothesis import given, strategies as st

from exactcy import generators as G
from exactcy import ginzburg, koszul
from exactcy.algcore import FiniteAlgebra, GradedQuiver, TruncatedDGAlgebra, quotient_truncated, semisimple
from exactcy.exactlin import homology

seeds = st.integers(0, 100_000)


def truncated_polynomial(k):
    q = GradedQuiver.build(["1"], [("x", "1", "1", 0)])
    return quotient_truncated(TruncatedDGAlgebra(q, {}, k - 1), [], name=f"k[x]/x^{k}")


def test_bar_of_ground_field():
    C = koszul.bar(semisimple(1), 4)
    assert {d: len(v) for d, v in C.space.degrees.items()} == {0: 1}


def test_bar_of_dual_numbers_degrees_and_zero_differential():
    C = koszul.bar(G.dual_numbers(), 4)
    assert {d: len(v) for d, v in C.space.degrees.items()} == {0: 1, -1: 1, -2: 1, -3: 1, -4: 1}
    assert C.differential.is_zero()


def test_bar_differential_folds_products():
    C = koszul.bar(truncated_polynomial(3), 2)
    xx = next(w for w in C.words if w.letters == ("x", "x"))
    col = C.differential.columns[xx]
    assert [w.letters for w in col] == [("x·x",)]


def test_dual_of_bar_of_dual_numbers():
    T = koszul.dual_algebra(koszul.bar(G.dual_numbers(), 5, max_weight=5))
    arrows = {a.label: a.degree for a in T.quiver.arrows}
    assert arrows == {"x^": 1}
    for w in range(6):
        assert homology(T.chain_complex(weight=w)).nonzero() == {w: 1}


def test_cobar_of_trivial_coalgebra():
    T = koszul.completed_cobar(koszul.bar(semisimple(1), 3), 3)
    assert homology(T.chain_complex()).nonzero() == {0: 1}


@pytest.mark.parametrize("r", [1, 2, 3])
def test_ext_of_semisimple(r):
    e = koszul.ext_betti(semisimple(r), (0, 3), 4)
    assert e.degrees.dims == {0: r, 1: 0, 2: 0, 3: 0} and not e.degrees.unreliable


def test_ext_of_dual_numbers():
    e = koszul.ext_betti(G.dual_numbers(), (0, 5), 6)
    assert e.certified and e.degrees.dims == {k: 1 for k in range(6)}
    assert not e.degrees.unreliable


def test_ext_of_quasi_isomorphic_algebras_agree():
    # e, a, b with da = b is quasi-isomorphic to the ground field
    e1 = koszul.ext_betti(G.dg_example(), (0, 3), 6)
    e2 = koszul.ext_betti(semisimple(1), (0, 3), 6)
    for k in e1.degrees.reliable():
        assert e1.degrees[k] == e2.degrees[k]


def test_ginzburg_ext_is_stable_in_bar_length():
    g = ginzburg.q100(3, 6)
    e5, e6 = (koszul.ext_betti(g.algebra, (0, 2), B) for B in (5, 6))
    assert e5.degrees.dims == e6.degrees.dims == {0: 1, 1: 1, 2: 1}


def test_truncation_weight_caps_exact_slots():
    g = ginzburg.q100(3, 4)
    e = koszul.ext_betti(g.algebra, (0, 2), 6)
    assert max(w for w, _ in e.slots) <= 4


def test_augmentation_must_be_multiplicative():
    bad = FiniteAlgebra(("1",), ("e", "x"), {"e": 0, "x": 0}, {"e": "1", "x": "1"},
                        {"e": "1", "x": "1"}, {"1": "e"}, products={("x", "x"): {"e": 1}})
    with pytest.raises(koszul.AugmentationError):
        koszul.AugmentedAlgebra.of(bad)


def test_bar_cobar_needs_weights():
    A = truncated_polynomial(3)
    unweighted = FiniteAlgebra(A.vertices, A.labels, A.degree, A.source, A.target,
                               A.units, A.products, field=A.field)
    with pytest.raises(koszul.AugmentationError):
        koszul.bar_cobar_check(unweighted)


@pytest.mark.parametrize("A", G.test_algebras() + [G.ainf_example(), G.dg_example()],
                         ids=lambda A: A.name)
def test_bar_cobar_recovers_homology(A):
    assert koszul.bar_cobar_check(A, 6, 5).agree


@given(seeds)
def test_random_bar_and_cobar_square_to_zero(seed):
    A = G.random_algebra(random.Random(seed))
    C = koszul.bar(A, 3)  # raises when d^2 != 0
    assert C.differential.compose(C.differential).is_zero()
    koszul.completed_cobar(C, 3)  # raises when d^2 != 0
    if koszul.AugmentedAlgebra.of(A).weighted:
        assert koszul.bar_cobar_check(A, 4, 4).agree
