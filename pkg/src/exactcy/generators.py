"""Named test algebras and seeded random generators shared by tests and selftest."""

from __future__ import annotations

import random
from fractions import Fraction

from .algcore import (
    FiniteAlgebra, GradedQuiver, TruncatedDGAlgebra, quotient_truncated, semisimple,
    _all_words, word_degree, word_source, word_target,
)
from .exactlin import QQ, Field


def dual_numbers(deg: int = 0, field: Field = QQ) -> FiniteAlgebra:
    """Q[x]/(x^2) with |x| = deg."""
    return FiniteAlgebra(("1",), ("e", "x"), {"e": 0, "x": deg}, {"e": "1", "x": "1"},
                         {"e": "1", "x": "1"}, {"1": "e"}, field=field,
                         weight={"e": 0, "x": 1}, name="Q[x]/(x^2)")


def product_field(field: Field = QQ) -> FiniteAlgebra:
    """Q × Q, i.e. the semisimple base with two idempotents."""
    A = semisimple(2, field)
    return FiniteAlgebra(A.vertices, A.labels, A.degree, A.source, A.target, A.units,
                         field=field, name="QxQ")


def upper_triangular(field: Field = QQ) -> FiniteAlgebra:
    """Upper-triangular 2x2 matrices = path algebra of 1 -a-> 2."""
    q = GradedQuiver.build(["1", "2"], [("a", "1", "2", 0)])
    A = quotient_truncated(TruncatedDGAlgebra(q, {}, 1, field=field), [], name="UT2")
    return A


def ainf_example(field: Field = QQ) -> FiniteAlgebra:
    """Basis e, x (deg 1), y (deg 2); all binary products of non-units vanish and
    μ^3(x, x, x) = y.  A genuine A∞ algebra with vanishing μ^1 and μ^2 on Ā."""
    return FiniteAlgebra(("1",), ("e", "x", "y"), {"e": 0, "x": 1, "y": 2},
                         {l: "1" for l in "exy"}, {l: "1" for l in "exy"}, {"1": "e"},
                         higher={3: {("x", "x", "x"): {"y": 1}}}, field=field,
                         weight={"e": 0, "x": 1, "y": 3}, name="Ainf3")


def dg_example(field: Field = QQ) -> FiniteAlgebra:
    """e, a (deg -1), b (deg 0); da = b, all products of non-units zero."""
    return FiniteAlgebra(("1",), ("e", "a", "b"), {"e": 0, "a": -1, "b": 0},
                         {l: "1" for l in "eab"}, {l: "1" for l in "eab"}, {"1": "e"},
                         diff={"a": {"b": 1}}, field=field,
                         weight={"e": 0, "a": 1, "b": 1}, name="dg-ab")


def test_algebras(field: Field = QQ) -> list[FiniteAlgebra]:
    """The four named algebras of the consistency suites."""
    return [semisimple(1, field), dual_numbers(0, field), product_field(field),
            upper_triangular(field)]


def _rand_coeff(rng: random.Random, field: Field):
    if field.characteristic == 2:
        return 1
    return Fraction(rng.choice([1, -1, 2, -2, 3]), rng.choice([1, 1, 2]))


def random_algebra(rng: random.Random, max_dim: int = 4, field: Field = QQ,
                   allow_diff: bool = True) -> FiniteAlgebra:
    """Random strictly unital algebra of dimension <= max_dim.

    Truncated path algebra of a random graded quiver, modulo a random
    homogeneous relation, optionally with a differential sending one arrow to
    a parallel arrow of degree one higher.
    """
    while True:
        nv = rng.choice([1, 1, 2])
        verts = [str(i + 1) for i in range(nv)]
        na = rng.randint(1, 3)
        arrows = []
        for k in range(na):
            arrows.append((f"a{k}", rng.choice(verts), rng.choice(verts),
                           rng.choice([-1, 0, 0, 1, 2])))
        diff = {}
        if allow_diff and na >= 2 and rng.random() < 0.4:
            s, t, d = arrows[0][1], arrows[0][2], arrows[0][3]
            arrows[1] = ("a1", s, t, d + 1)
            diff = {"a0": {("a1",): _rand_coeff(rng, field)}}
        q = GradedQuiver.build(verts, arrows)
        W = rng.choice([1, 2, 2, 3])
        try:
            words = _all_words(q, W)
        except ValueError:
            continue
        if len(words) > 12:
            continue
        T = TruncatedDGAlgebra(q, diff, W, field=field)
        rels = []
        long_words = [w for w in words if len(w.letters) >= 2]
        if long_words and rng.random() < 0.5:
            w0 = rng.choice(long_words)
            slot = [w for w in long_words
                    if word_degree(q, w) == word_degree(q, w0)
                    and word_source(q, w) == word_source(q, w0)
                    and word_target(q, w) == word_target(q, w0)]
            rels.append({w: _rand_coeff(rng, field) for w in rng.sample(slot, min(2, len(slot)))})
        try:
            A = quotient_truncated(T, rels, name="random")
        except ValueError:
            continue
        if 1 <= A.dim <= max_dim and A.vertices:
            return A
