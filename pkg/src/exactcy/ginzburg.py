"""Quivers with potential and their Ginzburg dg algebras.

For a graded quiver Q and CY dimension n the double quiver adds a reversed
arrow a* with |a*| = 2 - n - |a| for every arrow and a loop t_v with
|t_v| = 1 - n at every vertex.  The differential is

    d a = 0,   d a* = ∂_a w,   d t_v = e_v Σ_a (a a* - (-1)^{|a||a*|} a* a) e_v,

where ∂_a is the graded cyclic derivative: for a cycle a_1 ... a_m and each
occurrence a_i = a, rotate a_i to the front, picking up the Koszul sign
(-1)^{|a_1...a_{i-1}| |a_i...a_m|}, delete it, and multiply by (-1)^{|a|}.
That last sign is what makes d(d t_v) = 0 for graded arrows under the left
Leibniz rule used by the path algebras here; for degree-0 arrows it is
invisible.  The potential must have degree 3 - n so that every differential
has degree +1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algcore import (
    DSquaredReport, FiniteAlgebra, GradedQuiver, TruncatedDGAlgebra, Word,
    check_d_squared, quotient_truncated,
)
from .exactlin import QQ, Field, homology, vadd


class GradingError(ValueError):
    pass


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class Potential:
    """Linear combination of cycles, each stored in its lexicographically least
    rotation (rotation signs absorbed into the coefficient)."""

    quiver: GradedQuiver
    terms: Mapping[tuple, object]
    field: Field = QQ

    def __post_init__(self):
        q = self.quiver
        canon: dict = {}
        for letters, c in self.terms.items():
            letters = tuple(letters)
            if not letters:
                raise ValueError("empty word in potential")
            for a in letters:
                q.arrow(a)
            Word(letters)
            for x, y in zip(letters, letters[1:]):
                if q.arrow(x).source != q.arrow(y).target:
                    raise ValueError(f"potential word {' '.join(letters)} is not composable")
            if q.arrow(letters[-1]).source != q.arrow(letters[0]).target:
                raise ValueError(f"potential word {' '.join(letters)} is not a cycle")
            sign, rep = canonical_rotation(q, letters)
            vadd(canon, {rep: sign * c}, self.field)
        object.__setattr__(self, "terms", canon)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(self.quiver.arrow(a).degree for a in w) for w in self.terms}

    def lengths(self) -> set[int]:
        return {len(w) for w in self.terms}


def rotation_sign(q: GradedQuiver, letters: tuple, i: int) -> int:
    """Sign of moving a_1..a_i to the end: (-1)^{|a_1..a_i| |a_{i+1}..a_m|}."""
    head = sum(q.arrow(a).degree for a in letters[:i])
    tail = sum(q.arrow(a).degree for a in letters[i:])
    return _sgn(head * tail)


def canonical_rotation(q: GradedQuiver, letters: tuple) -> tuple[int, tuple]:
    best = None
    for i in range(len(letters)):
        rot = letters[i:] + letters[:i]
        if best is None or rot < best[1]:
            best = (rotation_sign(q, letters, i), rot)
    return best


def cyclic_derivative(w: Potential, a: str) -> dict:
    """∂_a w as a combination of Words."""
    q = w.quiver
    out: dict = {}
    for letters, c in w.terms.items():
        for i, b in enumerate(letters):
            if b != a:
                continue
            sign = rotation_sign(q, letters, i) * _sgn(q.arrow(a).degree)
            rest = letters[i + 1:] + letters[:i]
            word = Word(rest) if rest else Word.idem(q.arrow(a).target)
            vadd(out, {word: sign * c}, w.field)
    return out


@dataclass
class GinzburgPresentation:
    quiver: GradedQuiver
    potential: Potential
    n: int
    algebra: TruncatedDGAlgebra
    star: dict                 # arrow -> reversed arrow
    loops: dict                # vertex -> loop t_v
    d_squared: DSquaredReport = field(default_factory=lambda: DSquaredReport(True))

    def differential_table(self) -> dict:
        """Generator -> d(generator) as {Word: coeff}, every generator listed."""
        out = {}
        for arr in self.algebra.quiver.arrows:
            out[arr.label] = dict(self.algebra.generator_diff.get(arr.label, {}))
        return out

    def format_differential(self, gen: str) -> str:
        return format_vector(self.algebra.generator_diff.get(gen, {}))


def format_vector(v: Mapping) -> str:
    if not v:
        return "0"
    parts = []
    for w, c in v.items():
        txt = "".join(w.letters) if not w.is_idempotent() else str(w)
        if c == 1:
            parts.append(f"+ {txt}")
        elif c == -1:
            parts.append(f"- {txt}")
        else:
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {abs(c)}{txt}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def build_ginzburg(Q: GradedQuiver, w: Potential | None, n: int, W: int, window=None,
                   star_names: Mapping[str, str] | None = None,
                   loop_names: Mapping[str, str] | None = None,
                   field: Field = QQ) -> GinzburgPresentation:
    """Ginzburg dg algebra of (Q, w) truncated at weight W.

    Weights: for a potential whose cycles all have length m, arrows get weight
    1, reversed arrows m - 1 and loops m (w = 0 counts as m = 2), which makes d
    weight-homogeneous so every weight slot is an exact subcomplex.  Otherwise
    weight is word length and the truncation is a quotient.  Raises
    GradingError when the potential has the wrong degree or contains a
    length-one cycle, ValueError when d^2 != 0."""
    w = w if w is not None else Potential(Q, {}, field)
    if w.quiver != Q:
        raise ValueError("potential lives on a different quiver")
    bad = w.degrees() - {3 - n}
    if bad:
        raise GradingError(f"potential has degree {sorted(bad)}, needs {3 - n}")
    if 1 in w.lengths():
        raise GradingError("length-one cycles would make d lower word length")
    lengths = w.lengths()
    if not lengths:
        m = 2
    elif len(lengths) == 1:
        (m,) = lengths
    else:
        m = None
    star_names = dict(star_names or {})
    loop_names = dict(loop_names or {})
    taken = {a.label for a in Q.arrows} | set(Q.vertices)
    arrows = []
    star, loops = {}, {}
    for a in Q.arrows:
        arrows.append((a.label, a.source, a.target, a.degree, 1))
    for a in Q.arrows:
        name = star_names.get(a.label, a.label + "*")
        if name in taken:
            raise ValueError(f"name {name!r} already used")
        taken.add(name)
        star[a.label] = name
        arrows.append((name, a.target, a.source, 2 - n - a.degree,
                       (m - 1) if m else 1))
    for v in Q.vertices:
        name = loop_names.get(v, f"t{v}")
        if name in taken:
            raise ValueError(f"name {name!r} already used")
        taken.add(name)
        loops[v] = name
        arrows.append((name, v, v, 1 - n, m if m else 1))
    G = GradedQuiver(Q.base, tuple(arrows))
    diff: dict = {}
    for a in Q.arrows:
        da = cyclic_derivative(w, a.label)
        if da:
            diff[star[a.label]] = da
    for v in Q.vertices:
        dt: dict = {}
        for a in Q.arrows:
            s = star[a.label]
            if a.target == v:
                vadd(dt, {Word((a.label, s)): 1}, field)
            if a.source == v:
                deg_s = 2 - n - a.degree
                vadd(dt, {Word((s, a.label)): -_sgn(a.degree * deg_s)}, field)
        if dt:
            diff[loops[v]] = dt
    alg = TruncatedDGAlgebra(G, diff, W, window, completed=True, field=field)
    rep = check_d_squared(alg)
    if not rep.ok:
        raise ValueError(f"d^2 != 0 on generators {sorted(rep.offenders)}")
    return GinzburgPresentation(Q, w, n, alg, star, loops, rep)


def jacobi_algebra(Q: GradedQuiver, w: Potential, W: int, field: Field = QQ) -> FiniteAlgebra:
    """Path algebra of Q modulo (∂_a w), truncated at word length W."""
    if any(a.degree != 0 for a in Q.arrows):
        raise GradingError("Jacobi algebra needs all arrows in degree 0")
    base = TruncatedDGAlgebra(Q.with_weights({a.label: 1 for a in Q.arrows}), {}, W,
                              field=field)
    rels = [cyclic_derivative(w, a.label) for a in Q.arrows]
    return quotient_truncated(base, [r for r in rels if r], name="Jacobi")


def weight_dimensions(A: FiniteAlgebra, degree: int | None = 0) -> dict[int, int]:
    out: dict = {}
    for x in A.labels:
        if degree is None or A.degree[x] == degree:
            out[A.weight[x]] = out.get(A.weight[x], 0) + 1
    return dict(sorted(out.items()))


def ginzburg_homology(g: GinzburgPresentation, window) -> dict[tuple[int, int], int]:
    """Betti numbers per (weight, degree) when d preserves weight, otherwise per
    (None, degree) with every degree flagged by the truncation."""
    alg = g.algebra
    table = {}
    if alg.is_weight_homogeneous():
        for wt in range(alg.weight_bound + 1):
            h = homology(alg.chain_complex(window, weight=wt))
            for k, v in h.dims.items():
                if k not in h.unreliable:
                    table[(wt, k)] = v
    else:
        h = homology(alg.chain_complex(window))
        for k, v in h.dims.items():
            table[(None, k)] = v
    return table


def ginzburg_finite(g: GinzburgPresentation) -> FiniteAlgebra:
    """The weight-truncated dg algebra G / (weight > W) as a FiniteAlgebra."""
    return quotient_truncated(g.algebra, [], name="Ginzburg")


def q100(n: int = 3, W: int = 4, field: Field = QQ) -> GinzburgPresentation:
    """One vertex, one degree-0 loop x, zero potential; x* is named y, t_1 is t."""
    Q = GradedQuiver.build(["1"], [("x", "1", "1", 0)])
    return build_ginzburg(Q, Potential(Q, {}, field), n, W, star_names={"x": "y"},
                          loop_names={"1": "t"}, field=field)


def simple_cycles(Q: GradedQuiver, max_len: int) -> list[tuple]:
    """Composable closed words of length <= max_len, one per rotation class."""
    out = set()
    frontier = [(a.label,) for a in Q.arrows]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            if Q.arrow(w[-1]).source == Q.arrow(w[0]).target:
                out.add(canonical_rotation(Q, w)[1])
            for a in Q.arrows:
                if Q.arrow(w[-1]).source == a.target:
                    nxt.append(w + (a.label,))
        frontier = nxt
    return sorted(out, key=lambda w: (len(w), w))


def random_quiver_with_potential(rng: random.Random, n: int = 3, field: Field = QQ,
                                 max_vertices: int = 3, max_arrows: int = 4,
                                 max_cycle: int = 4):
    """Random graded quiver and potential of degree 3 - n built from cycles of
    length 2..max_cycle."""
    nv = rng.randint(1, max_vertices)
    verts = [str(i + 1) for i in range(nv)]
    na = rng.randint(1, max_arrows)
    arrows = [(f"a{k}", rng.choice(verts), rng.choice(verts), rng.choice([0, 0, 0, 1, -1]))
              for k in range(na)]
    Q = GradedQuiver.build(verts, arrows)
    cycles = [c for c in simple_cycles(Q, max_cycle)
              if len(c) >= 2 and sum(Q.arrow(a).degree for a in c) == 3 - n]
    terms = {}
    for c in rng.sample(cycles, min(len(cycles), rng.randint(0, 3))):
        coeff = 1 if field.characteristic == 2 else Fraction(rng.choice([1, -1, 2, 3]))
        terms[c] = coeff
    return Q, Potential(Q, terms, field)
