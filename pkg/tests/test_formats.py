from importlib.resources import files

import pytest

from exactcy import generators as G
from exactcy import hochcyc
from exactcy.exactlin import GF2
from exactcy.formats import FormatError, parse_algebra, parse_front, parse_quiver


def fixture(name):
    return files("exactcy").joinpath("data", name).read_text()


def same_structure(A, B):
    assert A.labels == B.labels and A.degree == B.degree
    for x in A.labels:
        for y in A.labels:
            if A.composable(x, y):
                assert A.mu((x, y)) == B.mu((x, y))
        assert A.mu((x,)) == B.mu((x,))


@pytest.mark.parametrize("name,ref", [
    ("qx2.alg", G.dual_numbers()), ("ainf.alg", G.ainf_example()),
])
def test_algebra_fixtures_match_generators(name, ref):
    A = parse_algebra(fixture(name))
    same_structure(A, ref)
    assert A.weight == ref.weight
    assert A.mu(("x", "x", "x")) == ref.mu(("x", "x", "x"))


@pytest.mark.parametrize("name", ["k.alg", "kxk.alg", "ut2.alg"])
def test_other_algebra_fixtures_are_valid(name):
    A = parse_algebra(fixture(name))
    assert A.validate() == []


def test_ut2_fixture_has_the_right_homology():
    A = parse_algebra(fixture("ut2.alg"))
    assert hochcyc.hh_table(A, 4).reliable() == hochcyc.hh_table(G.upper_triangular(), 4).reliable()


def test_field_option():
    A = parse_algebra(fixture("qx2.alg"), GF2)
    assert A.field is GF2


def test_q100_fixture():
    Q, w, opts = parse_quiver(fixture("q100.quiver"))
    assert Q.vertices == ("1",)
    assert [(a.label, a.degree) for a in Q.arrows] == [("x", 0)]
    assert w.is_zero() and opts == {"n": 3, "star_names": {"x": "y"}, "loop_names": {"1": "t"}}


def test_empty_arrows_section():
    Q, w, _ = parse_quiver("[vertices]\n1 2\n[arrows]\n")
    assert Q.arrows == () and w.is_zero()


def test_comments_and_whitespace():
    text = "# header\n[vertices]   # the vertices\n  1\n[arrows]\n x :  1->1   deg   0 \n"
    Q, _, _ = parse_quiver(text)
    assert Q.arrow("x").degree == 0


def test_potential_coefficients():
    text = ("[vertices]\n1\n[arrows]\nx: 1 -> 1 deg 0\ny: 1 -> 1 deg 0\n"
            "[potential]\n2 cycle(x y) - 1/2 cycle(y y x)\n")
    _, w, _ = parse_quiver(text)
    assert w.terms == {("x", "y"): 2, ("x", "y", "y"): -0.5}


def test_front_fixture():
    f = parse_front(fixture("lambda3333.front"))
    assert set(f.potential.values()) == {1, 0, -1, -2}
    assert any(c.dim == 2 for c in f.cells)


def err(fn, text):
    with pytest.raises(FormatError) as e:
        fn(text)
    return e.value


def test_syntax_error_location():
    e = err(parse_quiver, "[vertices]\n1\n[arrows]\n  a: 1 => 1 deg 0\n")
    assert (e.line, e.col) == (4, 3)
    assert str(e).startswith("line 4, column 3:")


def test_dangling_vertex():
    e = err(parse_quiver, "[vertices]\n1\n[arrows]\na: 1 -> 7 deg 0\n")
    assert e.line == 4 and e.col == 9 and "7" in str(e)


def test_mismatched_potential_names_the_word():
    text = ("[vertices]\n1 2\n[arrows]\na: 1 -> 2 deg 0\nb: 2 -> 1 deg 0\n"
            "[potential]\n1 cycle(a b)\n1 cycle(a a)\n")
    e = err(parse_quiver, text)
    assert e.line == 8 and "a a" in str(e)


def test_unknown_section_and_header():
    assert err(parse_quiver, "[vertices]\n1\n[bogus]\n").line == 3
    assert err(parse_quiver, "[vertices\n1\n").line == 1
    assert err(parse_quiver, "1\n[vertices]\n").line == 1


def test_algebra_errors():
    base = "[vertices]\n1\n[basis]\ne: 1 -> 1 deg 0 unit\nx: 1 -> 1 deg 0\n"
    assert err(parse_algebra, base + "[algebra]\nx * z = 0\n").line == 7
    assert err(parse_algebra, base + "[algebra]\nx * x = 2/0 x\n").line == 7
    assert err(parse_algebra, "[vertices]\n1\n[basis]\nx: 1 -> 1 deg 0\n").line == 4
    graded = base.replace("x: 1 -> 1 deg 0", "x: 1 -> 1 deg 1")
    e = err(parse_algebra, graded + "[algebra]\nx * x = e\n")
    assert "degree" in str(e)


def test_front_errors():
    text = "[sheets]\nA 0\nB 0\n[cells]\n0 p: A 1, B 2\n0 q: A 1, B 2\n1 e p q: A 2, B 1\n"
    e = err(parse_front, text)
    assert e.line == 7 and "order" in str(e)
    assert err(parse_front, "[sheets]\nA x\n[cells]\n").line == 2
    assert err(parse_front, "[sheets]\nA 0\n[cells]\n0 p: C 1\n").line == 4
