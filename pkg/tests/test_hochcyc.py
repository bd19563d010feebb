import pytest

from exactcy import generators as G
from exactcy import hochcyc
from exactcy.exactlin import GF2, HomologyBasis
from oracles import hc_dual_numbers, hh_dual_numbers, resolution_is_exact

NAMED = G.test_algebras() + [G.ainf_example(), G.dg_example()]


def test_resolution_oracle_is_a_resolution():
    assert resolution_is_exact()


def test_hh_dual_numbers_matches_resolution():
    want = hh_dual_numbers(4)
    h = hochcyc.hh_table(G.dual_numbers(), 6)
    for n in range(5):
        assert h.is_reliable(-n)
        assert h[-n] == want[n]


def test_hh_dual_numbers_length_five_certifies_three():
    h = hochcyc.hh_table(G.dual_numbers(), 5)
    assert {k: h[k] for k in range(-3, 1)} == {-n: v for n, v in hh_dual_numbers(3).items()}
    assert -4 in h.unreliable


def test_uncomputed_degree_is_not_reliable():
    # at length 4 no chain reaches degree -4, so the 0 there is not a result
    h = hochcyc.hh_table(G.dual_numbers(), 4)
    assert h[-4] == 0 and not h.is_reliable(-4)
    assert h.is_reliable(-2) and not h.is_reliable(-3)


def test_hh_dual_numbers_mod_two():
    want = hh_dual_numbers(3, char=2)
    h = hochcyc.hh_table(G.dual_numbers(field=GF2), 5)
    assert {-n: h[-n] for n in range(4)} == {-n: v for n, v in want.items()}


def test_hc_dual_numbers_matches_cyclic_quotient():
    want = hc_dual_numbers(4)
    h = hochcyc.cyclic_table(G.dual_numbers(), 6, None, 5, "positive")
    for n in range(5):
        assert h.is_reliable(-n)
        assert h[-n] == want[n]


@pytest.mark.parametrize("A,dims", [
    (G.test_algebras()[0], {0: 1, -1: 0, -2: 0}),
    (G.test_algebras()[2], {0: 2, -1: 0, -2: 0}),
    (G.test_algebras()[3], {0: 2, -1: 0, -2: 0}),
])
def test_semisimple_and_hereditary(A, dims):
    h = hochcyc.hh_table(A, 5)
    assert {k: h[k] for k in dims} == dims


@pytest.mark.parametrize("A", NAMED, ids=lambda A: A.name)
def test_non_unital_identities(A):
    space, b, B = hochcyc.chnu_maps(A, 5)
    assert b.compose(b).is_zero()
    assert B.compose(B).is_zero()
    assert (b.compose(B) + B.compose(b)).is_zero()
    for key in space.labels():
        assert hochcyc.B_nu(A, {key: 1}) == hochcyc.s_nu(A, hochcyc.N_elem(A, {key: 1}))


@pytest.mark.parametrize("A", NAMED, ids=lambda A: A.name)
def test_reduced_and_non_unital_agree(A):
    h1, h2 = hochcyc.hh_table(A, 5), hochcyc.hh_nu_table(A, 5)
    for k in h1.reliable():
        if k not in h2.unreliable:
            assert h1[k] == h2[k]


def test_unreduced_complex_agrees_with_reduced():
    A = G.dual_numbers()
    h1 = hochcyc.hh_table(A, 5)
    h2 = hochcyc.hh_table(A, 5, reduced=False)
    assert h1.reliable() == {k: v for k, v in h2.dims.items() if k in h1.reliable()}


def test_certificate_needs_negative_reduced_degrees():
    assert hochcyc.certified_degrees(G.dual_numbers(), 5) == -3
    assert hochcyc.certified_degrees(G.ainf_example(), 5) is None


@pytest.mark.parametrize("A", NAMED, ids=lambda A: A.name)
def test_connes_les_exact_and_matches_gysin(A):
    from exactcy import s1cx
    r1 = hochcyc.connes_les(A, 5, (-6, 0), 4)
    _, p = hochcyc.build_chnu_complex(A, 5)
    r2 = s1cx.gysin_check(p, 4, (-6, 0), hochcyc.connes_reliability(A, 5, 4))
    assert not r1.failures() and not r2.failures()
    if hochcyc.connes_reliability(A, 5, 4) is not None:
        assert hochcyc.compare_les(r1, r2) == []


def test_negative_periodic_flag_their_artifacts():
    # the known artifact: a truncated periodic model of the dual numbers
    # overcounts in degree 0; it must never be reported as reliable
    h = hochcyc.cyclic_table(G.dual_numbers(), 5, None, 4, "periodic")
    assert all(h[k] == 1 or k in h.unreliable for k in (0, -2))


def test_witnesses_solve_the_equation():
    A = G.dual_numbers()
    st = hochcyc.connes_setup(A, 5, 4)
    seen = set()
    for D in range(-3, 1):
        hb = HomologyBasis(st.chnu, D)
        for rep in hb.reps:
            w = hochcyc.exactness_witness(A, 5, 4, rep, st)
            seen.add(w.status)
            if w.status == "found" and w.chain is not None:
                got = st.connecting(w.chain.to_vector())
                assert hb.coordinates(got) == hb.coordinates(rep)
    assert "found" in seen and "none" in seen


def test_witness_rejects_non_cycles():
    A = G.dual_numbers()
    with pytest.raises(ValueError):
        hochcyc.exactness_witness(A, 5, 4, {("h", ("x", "x")): 1})


def test_witness_inconclusive_without_certificate():
    A = G.ainf_example()
    st = hochcyc.connes_setup(A, 4, 4)
    statuses = set()
    for rep in HomologyBasis(st.chnu, 0).reps:
        statuses.add(hochcyc.exactness_witness(A, 4, 4, rep, st).status)
    assert "none" not in statuses


def test_window_does_not_spoil_its_edges():
    A = G.dual_numbers()
    full = hochcyc.hh_table(A, 6)
    win = hochcyc.hh_table(A, 6, (-4, -1))
    assert win.dims == {k: full[k] for k in range(-4, 0)}
    assert not win.unreliable
    hc = hochcyc.cyclic_table(A, 6, (-3, -1), 5, "positive")
    assert hc.dims == {-3: 0, -2: 2, -1: 0} and not hc.unreliable
