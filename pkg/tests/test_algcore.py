import random

import pytest
from hypothesis import given, strategies as st

from exactcy.algcore import (
    FiniteAlgebra, GradedQuiver, TruncatedDGAlgebra, Word, check_d_squared, leibniz_extend,
    quotient_truncated, semisimple, word_from_letters, word_mul,
)
from exactcy import generators as G


def loop_quiver(deg=0):
    return GradedQuiver.build(["1"], [("x", "1", "1", deg)])


def test_quiver_rejects_dangling_and_duplicates():
    with pytest.raises(ValueError):
        GradedQuiver.build(["1"], [("a", "1", "2", 0)])
    with pytest.raises(ValueError):
        GradedQuiver.build(["1"], [("a", "1", "1", 0), ("a", "1", "1", 1)])


def test_functional_composition_order():
    q = GradedQuiver.build(["1", "2", "3"], [("a", "1", "2", 0), ("b", "2", "3", 0)])
    ba = word_mul(q, Word(("b",)), Word(("a",)))
    assert ba == Word(("b", "a"))
    assert word_mul(q, Word(("a",)), Word(("b",))) is None
    assert word_mul(q, Word.idem("2"), Word(("a",))) == Word(("a",))


def test_word_from_letters_checks_path():
    q = GradedQuiver.build(["1", "2"], [("a", "1", "2", 0)])
    with pytest.raises(ValueError):
        word_from_letters(q, ["a", "a"])


def test_truncated_polynomial_dimensions():
    T = TruncatedDGAlgebra(loop_quiver(), {}, 3)
    assert quotient_truncated(T, []).dim == 4
    A = quotient_truncated(T, [{("x", "x"): 1}], name="dual")
    assert A.dim == 2 and A.validate() == []


def test_leibniz_sign_from_letters_on_the_left():
    # |x| = -1, d x = y with |y| = 0: d(x x) = y x - x y
    q = GradedQuiver.build(["1"], [("x", "1", "1", -1), ("y", "1", "1", 0)])
    T = TruncatedDGAlgebra(q, {"x": {("y",): 1}}, 3)
    out = leibniz_extend(T, Word(("x", "x")))
    assert out == {Word(("y", "x")): 1, Word(("x", "y")): -1}
    assert check_d_squared(T).ok


def test_differential_degree_checked():
    q = GradedQuiver.build(["1"], [("x", "1", "1", 0), ("y", "1", "1", 0)])
    with pytest.raises(ValueError):
        TruncatedDGAlgebra(q, {"x": {("y",): 1}}, 2)


def test_non_closed_ideal_rejected():
    q = GradedQuiver.build(["1"], [("x", "1", "1", -1), ("y", "1", "1", 0)])
    T = TruncatedDGAlgebra(q, {"x": {("y",): 1}}, 2)
    with pytest.raises(ValueError):
        quotient_truncated(T, [{("x",): 1}])


@pytest.mark.parametrize("A", G.test_algebras() + [G.ainf_example(), G.dg_example()],
                         ids=lambda A: A.name)
def test_named_algebras_are_valid(A):
    assert A.validate() == []


def test_semisimple_units():
    A = semisimple(3)
    assert A.dim == 3 and A.augmentation_ideal() == ()
    assert A.mul("e1", "e1") == {"e1": 1} and not A.composable("e1", "e2")


def test_bad_structure_constants_detected():
    A = G.ainf_example()
    bad = FiniteAlgebra(A.vertices, A.labels, A.degree, A.source, A.target, A.units,
                        higher={3: {("x", "x", "x"): {"y": 1}}, 4: {}}, field=A.field,
                        products={("x", "y"): {"x": 1}}, name="bad")
    assert any("degree" in e for e in bad.validate())


@given(st.integers(0, 10_000))
def test_random_algebras_are_valid(seed):
    A = G.random_algebra(random.Random(seed))
    assert A.dim <= 4
    assert A.validate() == []
