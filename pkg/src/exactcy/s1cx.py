"""S^1-complexes: graded spaces with operations δ_j of degree 1 - 2j such that
Σ_{j=0}^{k} δ_j δ_{k-j} = 0 for every k.

Also pre-morphisms and their boundary, the derived tensor product over chains
on the circle, the u-linear orbit / fixed-point / Tate models, the diagonal
action on tensor products, and the Gysin sequence of the orbit model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exactlin import (
    QQ, BoundedComplex, Field, GradedSpace, LESReport, SparseMap,
    long_exact_sequence, vadd,
)

UMODES = {"orbits": "positive", "fixed": "negative", "tate": "periodic"}


@dataclass(frozen=True)
class S1Complex:
    """``deltas[j]`` is δ_j.  ``strict`` asserts δ_j = 0 for j >= 2; ``complete``
    asserts the list is exhaustive (δ_j = 0 beyond the last stored one).  When
    neither holds, relations that need an unstored δ are skipped."""

    space: GradedSpace
    deltas: tuple
    strict: bool = False
    complete: bool = True

    def __post_init__(self):
        deltas = tuple(self.deltas)
        if not deltas:
            raise ValueError("an S^1-complex needs at least δ_0")
        for j, dj in enumerate(deltas):
            if dj.shift != 1 - 2 * j:
                raise ValueError(f"δ_{j} must have shift {1 - 2 * j}, got {dj.shift}")
        if self.strict and any(not dj.is_zero() for dj in deltas[2:]):
            raise ValueError("strict complex with nonzero δ_j, j >= 2")
        object.__setattr__(self, "deltas", deltas)

    @property
    def J(self) -> int:
        return len(self.deltas) - 1

    @property
    def field(self) -> Field:
        return self.deltas[0].field

    def delta(self, j: int) -> SparseMap | None:
        """δ_j, the zero map when known to vanish, None when unknown."""
        if j < len(self.deltas):
            return self.deltas[j]
        if self.strict or self.complete:
            return SparseMap.zero(self.space, self.space, 1 - 2 * j, self.field)
        return None

    def known_order(self) -> int:
        """Largest k for which relation k can be checked."""
        if self.strict:
            return max(2, 2 * self.J)
        return 2 * self.J if self.complete else self.J

    def as_complex(self, window=None) -> BoundedComplex:
        cx = BoundedComplex(self.space, self.deltas[0])
        return cx.restrict(*window) if window else cx

    @classmethod
    def trivial(cls, space: GradedSpace, field: Field = QQ) -> "S1Complex":
        return cls(space, (SparseMap.zero(space, space, 1, field),), strict=True)

    @classmethod
    def ground(cls, field: Field = QQ, label="1") -> "S1Complex":
        return cls.trivial(GradedSpace({0: (label,)}), field)


@dataclass
class AxiomReport:
    verdicts: dict  # k -> "pass" | "fail" | "skipped"
    residues: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v != "fail" for v in self.verdicts.values())

    def failed(self) -> list[int]:
        return sorted(k for k, v in self.verdicts.items() if v == "fail")

    def __bool__(self):
        return self.ok


def relation(p: S1Complex, k: int) -> SparseMap | None:
    """Σ_{j=0}^{k} δ_j δ_{k-j}, or None if some participant is unknown."""
    total = SparseMap.zero(p.space, p.space, 2 - 2 * k, p.field)
    for j in range(k + 1):
        a, b = p.delta(j), p.delta(k - j)
        if a is None or b is None:
            return None
        if a.is_zero() or b.is_zero():
            continue
        total = total + a.compose(b)
    return total


def verify_axioms(p: S1Complex, max_k: int | None = None) -> AxiomReport:
    top = p.known_order() if max_k is None else max_k
    verdicts, residues = {}, {}
    for k in range(top + 1):
        r = relation(p, k)
        if r is None:
            verdicts[k] = "skipped"
        elif r.is_zero():
            verdicts[k] = "pass"
        else:
            verdicts[k] = "fail"
            residues[k] = r
    return AxiomReport(verdicts, residues)


# --- pre-morphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class PreMorphism:
    """Components F^d : P -> Q of shift deg - 2d."""

    source: S1Complex
    target: S1Complex
    components: tuple
    deg: int

    def __post_init__(self):
        for d, F in enumerate(self.components):
            if F.shift != self.deg - 2 * d:
                raise ValueError(f"F^{d} must have shift {self.deg - 2 * d}")

    def component(self, d: int) -> SparseMap:
        if d < len(self.components):
            return self.components[d]
        return SparseMap.zero(self.source.space, self.target.space, self.deg - 2 * d,
                              self.source.field)

    @classmethod
    def identity(cls, p: S1Complex) -> "PreMorphism":
        return cls(p, p, (SparseMap.identity(p.space, p.field),), 0)


def premorphism_boundary(F: PreMorphism, order: int | None = None) -> PreMorphism:
    """(∂F)^s = Σ_i F^i δ^P_{s-i} - (-1)^{deg F} Σ_j δ^Q_{s-j} F^j."""
    P, Q = F.source, F.target
    top = order if order is not None else len(F.components) - 1 + max(P.J, Q.J)
    sign = -1 if F.deg % 2 == 0 else 1
    comps = []
    for s in range(top + 1):
        acc = SparseMap.zero(P.space, Q.space, F.deg + 1 - 2 * s, P.field)
        for i in range(s + 1):
            dp, dq = P.delta(s - i), Q.delta(s - i)
            if dp is None or dq is None:
                raise ValueError(f"(∂F)^{s} needs an unknown δ_{s - i}")
            Fi = F.component(i)
            if not Fi.is_zero() and not dp.is_zero():
                acc = acc + Fi.compose(dp)
            if not Fi.is_zero() and not dq.is_zero():
                acc = acc + dq.compose(Fi).scaled(sign)
        comps.append(acc)
    return PreMorphism(P, Q, tuple(comps), F.deg + 1)


# --- u-linear models ---------------------------------------------------------------


def u_exponents(mode: str, U: int) -> list[int]:
    """u-powers kept by each truncation, in basis order."""
    mode = UMODES.get(mode, mode)
    if mode == "positive":
        return [-k for k in range(U)]
    if mode == "negative":
        return list(range(U))
    if mode == "periodic":
        return sorted(range(-U, U + 1), key=lambda e: (abs(e), -e))
    raise ValueError(f"unknown mode {mode!r}")


def u_space(space: GradedSpace, exps: list[int]) -> GradedSpace:
    pairs = []
    for e in exps:
        for d in space.degrees:
            for lab in space.basis(d):
                pairs.append(((lab, e), d + 2 * e))
    return GradedSpace.from_pairs(pairs)


def u_model(p: S1Complex, U: int, window=None, mode: str = "orbits") -> BoundedComplex:
    """P ⊗ (u-truncation) with δ_eq = Σ δ_j u^j.  Labels are (label, exponent).

    orbits keeps u^0..u^{-(U-1)} (a subcomplex of P((u))/uP[[u]]), fixed keeps
    u^0..u^{U-1} (the quotient P[[u]]/u^U), tate keeps u^{-U}..u^{U}."""
    if U < 1:
        raise ValueError("u-order must be >= 1")
    exps = u_exponents(mode, U)
    keep = set(exps)
    space = u_space(p.space, exps)
    stored = [(j, dj) for j, dj in enumerate(p.deltas) if not dj.is_zero()]
    cols: dict = {}
    for lab in p.space.labels():
        images = [(j, dj.columns.get(lab)) for j, dj in stored]
        for e in exps:
            col: dict = {}
            for j, img in images:
                if img and e + j in keep:
                    for r, c in img.items():
                        col[(r, e + j)] = c
            if col:
                cols[(lab, e)] = col
    d = SparseMap(space, space, 1, cols, p.field)
    cx = BoundedComplex(space, d)
    return cx.restrict(*window) if window else cx


def derived_tensor(q: S1Complex, p: S1Complex, D: int) -> BoundedComplex:
    """Q ⊗^L P on Q ⊗ t^d ⊗ P, d <= D, |t| = -2, with
    ∂(q t^d p) = Σ_i (-1)^{|p|} δ_i q ⊗ t^{d-i} ⊗ p + q ⊗ t^{d-i} ⊗ δ_i p."""
    f = p.field
    pairs = []
    for d in range(D + 1):
        for dq in q.space.degrees:
            for a in q.space.basis(dq):
                for dp in p.space.degrees:
                    for b in p.space.basis(dp):
                        pairs.append(((a, d, b), dq + dp - 2 * d))
    space = GradedSpace.from_pairs(pairs)
    cols = {}
    for (a, d, b) in space.labels():
        col: dict = {}
        sp = -1 if p.space.degree_of(b) % 2 else 1
        for i in range(d + 1):
            dqi, dpi = q.delta(i), p.delta(i)
            if dqi is not None:
                for r, c in dqi.columns.get(a, {}).items():
                    vadd(col, {(r, d - i, b): sp * c}, f)
            if dpi is not None:
                for r, c in dpi.columns.get(b, {}).items():
                    vadd(col, {(a, d - i, r): c}, f)
        cols[(a, d, b)] = col
    return BoundedComplex(space, SparseMap(space, space, 1, cols, f))


def diagonal(p: S1Complex, q: S1Complex) -> S1Complex:
    """δ_k(p ⊗ q) = (-1)^{|q|} δ_k(p) ⊗ q + p ⊗ δ_k(q) on P ⊗ Q."""
    f = p.field
    pairs = [((a, b), dp + dq) for dp in p.space.degrees for a in p.space.basis(dp)
             for dq in q.space.degrees for b in q.space.basis(dq)]
    space = GradedSpace.from_pairs(pairs)
    J = max(p.J, q.J)
    deltas = []
    for k in range(J + 1):
        dpk, dqk = p.delta(k), q.delta(k)
        cols = {}
        for (a, b) in space.labels():
            col: dict = {}
            sq = -1 if q.space.degree_of(b) % 2 else 1
            if dpk is not None:
                for r, c in dpk.columns.get(a, {}).items():
                    vadd(col, {(r, b): sq * c}, f)
            if dqk is not None:
                for r, c in dqk.columns.get(b, {}).items():
                    vadd(col, {(a, r): c}, f)
            cols[(a, b)] = col
        deltas.append(SparseMap(space, space, 1 - 2 * k, cols, f))
    out = S1Complex(space, tuple(deltas), strict=p.strict and q.strict,
                    complete=p.complete and q.complete)
    rep = verify_axioms(out)
    if not rep.ok:
        raise ValueError(f"diagonal action violates relations {rep.failed()}")
    return out


# --- marking map and the Gysin sequence -------------------------------------------


def eq_differential(p: S1Complex, beta: Mapping, keep: set) -> dict:
    """δ_eq applied to Σ β_{(x, e)} x u^e, keeping exponents in ``keep``."""
    out: dict = {}
    for (lab, e), c in beta.items():
        for j, dj in enumerate(p.deltas):
            if e + j in keep:
                for r, x in dj.columns.get(lab, {}).items():
                    vadd(out, {(r, e + j): c * x}, p.field)
    return out


def marking_chain(beta: Mapping, p: S1Complex) -> dict:
    """Σ_k δ_{k+1}(β_k) for a positive-mode cocycle Σ β_k u^{-k}."""
    top = max((-e for (_, e) in beta), default=0)
    keep = set(range(-top, 1))
    if eq_differential(p, beta, keep):
        raise ValueError("beta is not an equivariant cocycle")
    out: dict = {}
    for (lab, e), c in beta.items():
        k = -e
        dk = p.delta(k + 1)
        if dk is None:
            raise ValueError(f"marking needs unknown δ_{k + 1}")
        vadd(out, {r: c * x for r, x in dk.columns.get(lab, {}).items()}, p.field)
    if p.deltas[0].apply(out):
        raise AssertionError("marking chain is not δ_0-closed")
    return out


def gysin_maps(p: S1Complex, U: int):
    """(P, P_hS1 at order U, P_hS1 at order U-1, inclusion, u-multiplication)."""
    P = p.as_complex()
    B = u_model(p, U, None, "orbits")
    C = u_model(p, U - 1, None, "orbits")
    i_cols = {lab: {(lab, 0): 1} for lab in p.space.labels()}
    i_map = SparseMap(P.spaces, B.spaces, 0, i_cols, p.field)
    s_cols = {(lab, e): {(lab, e + 1): 1} for (lab, e) in B.spaces.labels() if e < 0}
    s_map = SparseMap(B.spaces, C.spaces, 2, s_cols, p.field)
    return P, B, C, i_map, s_map


def gysin_check(p: S1Complex, U: int, window, reliable=None,
                connecting: str = "marking") -> LESReport:
    """Long exact sequence of 0 -> P -> P_hS1 -> P_hS1[2] -> 0 over the degrees
    in ``window``, with the connecting map from the marking formula (or the
    snake-lemma chase when ``connecting="snake"``)."""
    if U < 2:
        raise ValueError("the Gysin sequence needs u-order >= 2")
    P, B, C, i_map, s_map = gysin_maps(p, U)
    conn = None
    if connecting == "marking":
        conn = lambda z: marking_chain(z, p)  # noqa: E731
    lo, hi = window
    return long_exact_sequence(P, B, C, i_map, s_map, range(lo, hi + 1), conn,
                               reliable or (lambda name, k: True))


def orbit_reliability(p: S1Complex, U: int, bound: int | None = None):
    """Reliability predicate for Gysin nodes: P itself is taken as exact data
    (degrees >= ``bound`` when given), and the orbit model at order U is
    complete in degree D once D - 1 > max|P| - 2U."""
    top = max(p.space.degrees, default=0)

    def ok(name, k):
        if bound is not None and k < bound:
            return False
        if name == "A":
            return True
        order = U if name == "B" else U - 1
        return k - 1 > top - 2 * order

    return ok


# --- random complexes and mutations ------------------------------------------------


def _rand_scalar(rng: random.Random, field: Field):
    if field.characteristic == 2:
        return 1
    return Fraction(rng.choice([1, -1, 2, -2, 3, -3]), rng.choice([1, 1, 2, 3]))


def _piece(kind: str, d: int, tag: str):
    """Basis with degrees and (δ_0, δ_1) entries for one indecomposable piece."""
    if kind == "point":
        return [(tag + "x", d)], {}, {}
    if kind == "d0":
        return [(tag + "x", d), (tag + "y", d + 1)], {tag + "x": {tag + "y": 1}}, {}
    if kind == "d1":
        return [(tag + "x", d), (tag + "y", d - 1)], {}, {tag + "x": {tag + "y": 1}}
    # square: δ0 a = b, δ1 a = c, δ0 c = e, δ1 b = -e
    basis = [(tag + "a", d), (tag + "b", d + 1), (tag + "c", d - 1), (tag + "e", d)]
    d0 = {tag + "a": {tag + "b": 1}, tag + "c": {tag + "e": 1}}
    d1 = {tag + "a": {tag + "c": 1}, tag + "b": {tag + "e": -1}}
    return basis, d0, d1


def _conjugate(m: SparseMap, g: dict, ginv: dict) -> SparseMap:
    """g ∘ m ∘ g^{-1} for per-label basis changes given as column dicts."""
    f = m.field
    cols = {}
    for lab in m.source.labels():
        v = m.apply(ginv.get(lab, {lab: 1}))
        out: dict = {}
        for r, c in v.items():
            vadd(out, g.get(r, {r: 1}), f, c)
        cols[lab] = out
    return SparseMap(m.source, m.target, m.shift, cols, f)


def _random_basis_change(rng, space: GradedSpace, field: Field):
    """Random unitriangular change of basis within each degree and its inverse."""
    g, ginv = {}, {}
    for d in space.degrees:
        labs = list(space.basis(d))
        rng.shuffle(labs)
        n = len(labs)
        # g = I + N with N strictly upper triangular in the shuffled order
        N = {}
        for j in range(n):
            for i in range(j):
                if rng.random() < 0.5:
                    N[(i, j)] = _rand_scalar(rng, field)
        G = [[field(1 if i == j else N.get((i, j), 0)) for j in range(n)] for i in range(n)]
        Ginv = _unitriangular_inverse(G, field)
        for j in range(n):
            g[labs[j]] = {labs[i]: G[i][j] for i in range(n) if G[i][j]}
            ginv[labs[j]] = {labs[i]: Ginv[i][j] for i in range(n) if Ginv[i][j]}
    return g, ginv


def _unitriangular_inverse(G, field):
    n = len(G)
    inv = [[field(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            inv[i][j] = field(-sum(G[i][k] * inv[k][j] for k in range(i + 1, j + 1)))
    return inv


def random_strict_complex(rng: random.Random, field: Field = QQ, max_per_degree: int = 8,
                          pieces: int | None = None) -> S1Complex:
    """Direct sum of model pieces (points, δ_0-pairs, δ_1-pairs, squares) in a
    random basis.  At most ``max_per_degree`` basis vectors per degree."""
    n = pieces if pieces is not None else rng.randint(1, 6)
    basis, d0, d1 = [], {}, {}
    count: dict = {}
    for t in range(n):
        kind = rng.choice(["point", "d0", "d1", "square"])
        deg = rng.randint(-3, 2)
        b, p0, p1 = _piece(kind, deg, f"p{t}")
        new = dict(count)
        for _, dd in b:
            new[dd] = new.get(dd, 0) + 1
        if max(new.values()) > max_per_degree:
            continue
        count = new
        basis += b
        d0.update(p0)
        d1.update(p1)
    space = GradedSpace.from_pairs(basis)
    m0 = SparseMap(space, space, 1, d0, field)
    m1 = SparseMap(space, space, -1, d1, field)
    g, ginv = _random_basis_change(rng, space, field)
    return S1Complex(space, (_conjugate(m0, g, ginv), _conjugate(m1, g, ginv)),
                     strict=True)


def random_s1_complex(rng: random.Random, field: Field = QQ, J: int = 3) -> S1Complex:
    """Non-strict complex: a strict one conjugated by a random u-linear
    automorphism g = 1 + u g_1 + u^2 g_2 + ..., kept up to u^J.  Relations up
    to order J hold exactly; higher ones involve unstored operations."""
    p = random_strict_complex(rng, field)
    space = p.space
    gs = [SparseMap.identity(space, field)]
    for j in range(1, J + 1):
        cols = {}
        for d in space.degrees:
            tgt = space.basis(d - 2 * j)
            for lab in space.basis(d):
                if tgt and rng.random() < 0.5:
                    cols[lab] = {rng.choice(tgt): _rand_scalar(rng, field)}
        gs.append(SparseMap(space, space, -2 * j, cols, field))
    # inverse power series h with g h = 1 up to u^J
    hs = [SparseMap.identity(space, field)]
    for j in range(1, J + 1):
        acc = SparseMap.zero(space, space, -2 * j, field)
        for i in range(1, j + 1):
            acc = acc - gs[i].compose(hs[j - i])
        hs.append(acc)
    deltas = []
    for k in range(J + 1):
        acc = SparseMap.zero(space, space, 1 - 2 * k, field)
        for a in range(k + 1):
            for b in range(k - a + 1):
                c = k - a - b
                dl = p.delta(b)
                if dl.is_zero():
                    continue
                acc = acc + gs[a].compose(dl).compose(hs[c])
        deltas.append(acc)
    return S1Complex(space, tuple(deltas), strict=False, complete=False)


def mutate_sign(p: S1Complex, rng: random.Random, j: int | None = None):
    """Flip the sign of one stored entry of some δ_j chosen so that a checked
    relation must break.  Returns (mutated complex, (j, row, col)).

    An entry (r, c) of δ_j is detectable when some δ_a with a checked relation
    j + a has a nonzero column r or a nonzero row c: the relation then changes
    by -2x(δ_a E_rc + E_rc δ_a), which cannot vanish since no δ_a has diagonal
    entries."""
    if p.field.characteristic == 2:
        raise ValueError("sign flips are invisible over Z/2")
    top = p.known_order()
    rows_of = []
    for a, da in enumerate(p.deltas):
        rows = {r for _, col in da.columns.items() for r in col}
        rows_of.append((set(da.columns), rows))
    candidates = []
    for jj, dj in enumerate(p.deltas):
        if j is not None and jj != j:
            continue
        for c, col in dj.columns.items():
            for r in col:
                for a, (colset, rowset) in enumerate(rows_of):
                    if jj + a <= top and (r in colset or c in rowset):
                        candidates.append((jj, r, c))
                        break
    if not candidates:
        return None
    jj, r, c = candidates[rng.randrange(len(candidates))]
    dj = p.deltas[jj]
    cols = {k: dict(v) for k, v in dj.columns.items()}
    cols[c][r] = -cols[c][r]
    new = list(p.deltas)
    new[jj] = SparseMap(dj.source, dj.target, dj.shift, cols, dj.field)
    return S1Complex(p.space, tuple(new), p.strict, p.complete), (jj, r, c)
