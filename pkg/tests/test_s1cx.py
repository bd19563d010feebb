import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exactcy import s1cx
from exactcy.exactlin import QQ, GradedSpace, SparseMap, homology, snake_connecting
from exactcy.suites import random_cocycle

seeds = st.integers(0, 100_000)


@given(seeds)
def test_random_strict_complexes_satisfy_axioms(seed):
    p = s1cx.random_strict_complex(random.Random(seed), QQ)
    assert max((len(p.space.basis(d)) for d in p.space.degrees), default=0) <= 8
    assert s1cx.verify_axioms(p).ok


@given(seeds)
def test_random_higher_complexes_satisfy_axioms(seed):
    assert s1cx.verify_axioms(s1cx.random_s1_complex(random.Random(seed), QQ)).ok


@given(seeds)
def test_sign_mutations_are_detected(seed):
    rng = random.Random(seed)
    p = s1cx.random_s1_complex(rng, QQ) if seed % 2 else s1cx.random_strict_complex(rng, QQ)
    out = s1cx.mutate_sign(p, rng)
    if out is not None:
        assert not s1cx.verify_axioms(out[0]).ok


def test_wrong_shift_rejected():
    sp = GradedSpace({0: ("a",)})
    with pytest.raises(ValueError):
        s1cx.S1Complex(sp, (SparseMap.zero(sp, sp, 1), SparseMap.zero(sp, sp, 1)))


@pytest.mark.parametrize("mode,degrees", [
    ("orbits", {0, -2, -4, -6}),
    ("fixed", {0, 2, 4, 6}),
    ("tate", {-8, -6, -4, -2, 0, 2, 4, 6, 8}),
])
def test_u_models_of_the_ground_field(mode, degrees):
    h = homology(s1cx.u_model(s1cx.S1Complex.ground(), 4, mode=mode))
    assert {k for k, v in h.dims.items() if v} == degrees
    assert all(v <= 1 for v in h.dims.values())


def test_derived_tensor_of_trivial_modules():
    k = s1cx.S1Complex.ground()
    h = homology(s1cx.derived_tensor(k, k, 3))
    assert h.nonzero() == {0: 1, -2: 1, -4: 1, -6: 1}


def test_derived_tensor_with_free_circle_action():
    # k ⊕ k[-1] with δ_1 the identity is C_*(S^1); tensoring with it kills the tower
    sp = GradedSpace({0: ("a",), -1: ("b",)})
    d1 = SparseMap(sp, sp, -1, {"a": {"b": 1}})
    free = s1cx.S1Complex(sp, (SparseMap.zero(sp, sp, 1), d1), strict=True)
    for D in (2, 3, 4):
        h = homology(s1cx.derived_tensor(s1cx.S1Complex.ground(), free, D))
        # k in degree 0, plus one class at the truncation floor
        assert h.nonzero() == {0: 1, -2 * D - 1: 1}


@given(seeds, seeds)
def test_diagonal_is_an_s1_complex(s1, s2):
    p = s1cx.random_strict_complex(random.Random(s1), QQ, max_per_degree=3)
    q = s1cx.random_s1_complex(random.Random(s2), QQ, J=2)
    assert s1cx.verify_axioms(s1cx.diagonal(p, q)).ok


def _random_premorphism(rng, p, q, deg, n):
    comps = []
    for d in range(n):
        shift = deg - 2 * d
        cols = {}
        for lab in p.space.labels():
            tgt = q.space.basis(p.space.degree_of(lab) + shift)
            if tgt and rng.random() < 0.7:
                cols[lab] = {rng.choice(tgt): Fraction(rng.randint(-2, 2))}
        comps.append(SparseMap(p.space, q.space, shift, cols, QQ))
    return s1cx.PreMorphism(p, q, tuple(comps), deg)


@given(seeds, st.integers(-2, 2))
def test_premorphism_boundary_squares_to_zero(seed, deg):
    rng = random.Random(seed)
    p = s1cx.random_strict_complex(rng, QQ, max_per_degree=4)
    q = s1cx.random_strict_complex(rng, QQ, max_per_degree=4)
    F = _random_premorphism(rng, p, q, deg, 3)
    order = 5
    dd = s1cx.premorphism_boundary(s1cx.premorphism_boundary(F, order), order)
    assert all(c.is_zero() for c in dd.components)


def test_identity_is_closed():
    p = s1cx.random_s1_complex(random.Random(5), QQ)
    dF = s1cx.premorphism_boundary(s1cx.PreMorphism.identity(p))
    assert all(c.is_zero() for c in dF.components)


@given(seeds)
def test_gysin_sequence_exact(seed):
    p = s1cx.random_strict_complex(random.Random(seed), QQ)
    degs = list(p.space.degrees) or [0]
    rep = s1cx.gysin_check(p, 3, (min(degs) - 4, max(degs)))
    assert rep.exact()


@given(seeds)
def test_marking_equals_snake(seed):
    rng = random.Random(seed)
    p = s1cx.random_strict_complex(rng, QQ)
    P, B, C, i_map, s_map = s1cx.gysin_maps(p, 3)
    z = random_cocycle(C, rng)
    if z is not None:
        assert s1cx.marking_chain(z, p) == snake_connecting(i_map, s_map, B, z)


def test_gysin_needs_order_two():
    with pytest.raises(ValueError):
        s1cx.gysin_check(s1cx.S1Complex.ground(), 1, (0, 0))
