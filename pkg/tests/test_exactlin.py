from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from exactcy.exactlin import (
    GF2, QQ, BoundedComplex, ComplexError, DegreeMismatch, GradedSpace, HomologyBasis,
    SparseMap, complex_from_map, field_from_tag, homology, kernel_of_columns,
    long_exact_sequence, rank, solve,
)

entries = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return [[draw(entries) for _ in range(c)] for _ in range(r)]


def as_map(rows, field=QQ):
    r = len(rows)
    c = len(rows[0]) if rows else 0
    src = GradedSpace({0: tuple(f"s{j}" for j in range(c))})
    tgt = GradedSpace({0: tuple(f"t{i}" for i in range(r))})
    cols = {f"s{j}": {f"t{i}": rows[i][j] for i in range(r)} for j in range(c)}
    return SparseMap(src, tgt, 0, cols, field)


@given(matrices())
def test_rank_matches_sympy(rows):
    want = sympy.Matrix(rows).rank() if rows and rows[0] else 0
    assert rank(as_map(rows)) == want


@given(matrices())
def test_rank_mod_two_matches_sympy(rows):
    if not rows or not rows[0]:
        return
    assert rank(as_map(rows, GF2)) == _rank_gf2(rows)


def _rank_gf2(rows):
    # plain bitmask elimination, independent of the library's reducer
    vecs = [sum(((x % 2) << j) for j, x in enumerate(r)) for r in rows]
    rk = 0
    while vecs:
        v = vecs.pop()
        if not v:
            continue
        rk += 1
        low = v & -v
        vecs = [w ^ v if w & low else w for w in vecs]
    return rk


@given(matrices())
def test_kernel_vectors_are_killed_and_independent(rows):
    m = as_map(rows)
    cols = [m.columns.get(c, {}) for c in m.source.basis(0)]
    ker = kernel_of_columns(cols, QQ)
    ncols = len(rows[0]) if rows else 0
    assert len(ker) == ncols - rank(m)
    for v in ker:
        out = {}
        for j, x in v.items():
            for r, y in cols[j].items():
                out[r] = out.get(r, 0) + x * y
        assert not any(out.values())


@given(matrices(), st.lists(entries, min_size=6, max_size=6))
def test_solve_is_exact_or_none(rows, coeffs):
    m = as_map(rows)
    if not m.source.dim():
        return
    x = {lab: Fraction(c) for lab, c in zip(m.source.basis(0), coeffs)}
    y = m.apply(x)
    sol = solve(m, y)
    assert sol is not None and m.apply(sol) == y
    if rows and rank(m) < len(rows):
        # something outside the image must be rejected
        sm = sympy.Matrix(rows)
        for i in range(len(rows)):
            e = sympy.zeros(len(rows), 1)
            e[i] = 1
            if sm.row_join(e).rank() > sm.rank():
                assert solve(m, {f"t{i}": 1}) is None
                break


def test_field_tags():
    assert field_from_tag("q") is QQ and field_from_tag("f2") is GF2
    assert GF2(3) == 1 and GF2(Fraction(3)) == 1
    with pytest.raises(ValueError):
        field_from_tag("r")


def test_degree_mismatch_rejected():
    sp = GradedSpace({0: ("a",), 1: ("b",)})
    with pytest.raises(DegreeMismatch):
        SparseMap(sp, sp, 1, {"a": {"a": 1}})


def test_homology_of_interval():
    sp = GradedSpace({0: ("v0", "v1"), 1: ("e",)})
    d = SparseMap(sp, sp, 1, {"v0": {"e": -1}, "v1": {"e": 1}})
    h = homology(complex_from_map(d))
    assert h.dims == {0: 1, 1: 0}
    assert h.unreliable == frozenset()


def test_d_squared_checked():
    sp = GradedSpace({0: ("a",), 1: ("b",), 2: ("c",)})
    d = SparseMap(sp, sp, 1, {"a": {"b": 1}, "b": {"c": 1}})
    with pytest.raises(ComplexError):
        homology(complex_from_map(d))


def test_window_cut_is_flagged():
    sp = GradedSpace({0: ("a",), 1: ("b",), 2: ("c",)})
    d = SparseMap(sp, sp, 1, {"a": {"b": 1}})
    h = homology(complex_from_map(d, window=(1, 2)))
    assert 1 in h.unreliable and 2 not in h.unreliable


def test_homology_basis_coordinates():
    sp = GradedSpace({0: ("a", "b"), 1: ("c",)})
    d = SparseMap(sp, sp, 1, {"a": {"c": 1}, "b": {"c": 1}})
    hb = HomologyBasis(complex_from_map(d), 0)
    assert hb.dim == 1
    assert not hb.is_boundary({"a": 1, "b": -1})


def test_les_of_split_pair_is_exact():
    # 0 -> A -> A + C -> C -> 0 with A = C = interval
    def interval(tag):
        sp = GradedSpace({0: (tag + "0", tag + "1"), 1: (tag + "e",)})
        return sp, {tag + "0": {tag + "e": -1}, tag + "1": {tag + "e": 1}}
    spa, da = interval("a")
    spc, dc = interval("c")
    spb = spa.direct_sum(spc)
    A = complex_from_map(SparseMap(spa, spa, 1, da))
    C = complex_from_map(SparseMap(spc, spc, 1, dc))
    B = complex_from_map(SparseMap(spb, spb, 1, {**da, **dc}))
    i = SparseMap(spa, spb, 0, {x: {x: 1} for x in spa.labels()})
    p = SparseMap(spb, spc, 0, {x: {x: 1} for x in spc.labels()})
    rep = long_exact_sequence(A, B, C, i, p, range(0, 2))
    assert rep.exact() and not rep.failures()
