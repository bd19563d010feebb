"""Graded quivers, truncated path algebras with generator differentials, and
finite-dimensional dg / A-infinity algebras over a semisimple base.

Path convention: a word is stored left to right as the product a_k ... a_1, so
a_1 acts first.  Adjacent letters compose when source(a_{i+1}) = target(a_i).
A word w with source s and target t lies in e_t A e_s.

Signs: the differential is extended by the left Leibniz rule
d(w1 w2) = d(w1) w2 + (-1)^{|w1|} w1 d(w2), grading is cohomological.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Mapping, NamedTuple

from .exactlin import (
    QQ, BoundedComplex, Field, GradedSpace, Reducer, SparseMap, vadd, vclean,
    vscale,
)


class TruncationOverflow(ArithmeticError):
    """A computed term lies above the weight bound."""


class Arrow(NamedTuple):
    label: str
    source: str
    target: str
    degree: int
    weight: int = 1


@dataclass(frozen=True)
class SemisimpleBase:
    idempotents: tuple

    def __post_init__(self):
        ids = tuple(self.idempotents)
        if not ids:
            raise ValueError("semisimple base needs at least one idempotent")
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate idempotent labels")
        object.__setattr__(self, "idempotents", ids)

    def __len__(self):
        return len(self.idempotents)


@dataclass(frozen=True)
class GradedQuiver:
    base: SemisimpleBase
    arrows: tuple

    def __post_init__(self):
        arrows = tuple(Arrow(*a) for a in self.arrows)
        seen = set()
        verts = set(self.base.idempotents)
        for a in arrows:
            if a.label in seen:
                raise ValueError(f"duplicate arrow label {a.label!r}")
            seen.add(a.label)
            if a.source not in verts or a.target not in verts:
                raise ValueError(f"arrow {a.label!r} has a dangling endpoint")
            if a.weight < 0:
                raise ValueError("arrow weights must be non-negative")
            if a.label in verts:
                raise ValueError(f"arrow label {a.label!r} clashes with a vertex")
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "_by_label", {a.label: a for a in arrows})

    @classmethod
    def build(cls, vertices: Iterable[str], arrows: Iterable) -> "GradedQuiver":
        return cls(SemisimpleBase(tuple(vertices)), tuple(arrows))

    @property
    def vertices(self) -> tuple:
        return self.base.idempotents

    def arrow(self, label: str) -> Arrow:
        return self._by_label[label]

    def with_weights(self, weights: Mapping[str, int]) -> "GradedQuiver":
        arrows = [a._replace(weight=weights.get(a.label, a.weight)) for a in self.arrows]
        return GradedQuiver(self.base, tuple(arrows))


class Word(NamedTuple):
    """Path a_k ... a_1 (``letters`` left to right) or the idempotent at ``vertex``."""

    letters: tuple
    vertex: str | None = None

    @classmethod
    def idem(cls, v: str) -> "Word":
        return cls((), v)

    def is_idempotent(self) -> bool:
        return not self.letters

    def __str__(self):
        return "e_" + str(self.vertex) if not self.letters else "·".join(self.letters)


def word_source(q: GradedQuiver, w: Word) -> str:
    return w.vertex if not w.letters else q.arrow(w.letters[-1]).source


def word_target(q: GradedQuiver, w: Word) -> str:
    return w.vertex if not w.letters else q.arrow(w.letters[0]).target


def word_degree(q: GradedQuiver, w: Word) -> int:
    return sum(q.arrow(a).degree for a in w.letters)


def word_weight(q: GradedQuiver, w: Word) -> int:
    return sum(q.arrow(a).weight for a in w.letters)


def word_from_letters(q: GradedQuiver, letters: Iterable[str]) -> Word:
    letters = tuple(letters)
    for left, right in zip(letters, letters[1:]):
        if q.arrow(left).source != q.arrow(right).target:
            raise ValueError(f"letters {left!r} and {right!r} do not compose")
    if not letters:
        raise ValueError("use Word.idem for idempotents")
    return Word(letters)


def word_mul(q: GradedQuiver, u: Word, v: Word) -> Word | None:
    """u * v, or None when the product vanishes."""
    if word_source(q, u) != word_target(q, v):
        return None
    if u.is_idempotent():
        return v
    if v.is_idempotent():
        return u
    return Word(u.letters + v.letters)


def vec_mul(q: GradedQuiver, x: Mapping, y: Mapping, field: Field) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            w = word_mul(q, u, v)
            if w is not None:
                vadd(out, {w: a * b}, field)
    return out


def _word_key(w: Word):
    return (len(w.letters), w.letters, "" if w.vertex is None else str(w.vertex))


def enumerate_words(q: GradedQuiver, W: int, window: tuple[int, int] | None = None
                    ) -> GradedSpace:
    """All composable words of weight <= W (degree in ``window`` if given),
    ordered by weight, then length, then arrow labels."""
    return GradedSpace.from_pairs(
        (w, word_degree(q, w)) for w in _all_words(q, W)
        if window is None or window[0] <= word_degree(q, w) <= window[1])


def _all_words(q: GradedQuiver, W: int) -> list[Word]:
    words = [Word.idem(v) for v in q.vertices]
    frontier = [(Word((a.label,)), a.weight) for a in q.arrows if a.weight <= W]
    zero_weight = [a for a in q.arrows if a.weight == 0]
    if zero_weight:
        raise ValueError("weight-zero arrows make the truncation infinite")
    while frontier:
        words.extend(w for w, _ in frontier)
        nxt = []
        for w, wt in frontier:
            head = q.arrow(w.letters[0])
            for a in q.arrows:
                if a.source == head.target and wt + a.weight <= W:
                    nxt.append((Word((a.label,) + w.letters), wt + a.weight))
        frontier = nxt
    words.sort(key=lambda w: (word_weight(q, w), _word_key(w)))
    return words


# --- truncated dg algebras ---------------------------------------------------------


@dataclass
class DSquaredReport:
    ok: bool
    offenders: dict = field(default_factory=dict)  # generator -> residue

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class TruncatedDGAlgebra:
    """Path algebra of ``quiver`` with d given on arrows, modulo weight > W."""

    quiver: GradedQuiver
    generator_diff: Mapping[str, Mapping]
    weight_bound: int
    degree_window: tuple[int, int] | None = None
    completed: bool = False
    field: Field = QQ

    def __post_init__(self):
        q = self.quiver
        clean = {}
        for a, dv in self.generator_diff.items():
            arr = q.arrow(a)
            dv = vclean({_coerce_word(q, w): c for w, c in dv.items()}, self.field)
            for w in dv:
                if word_degree(q, w) != arr.degree + 1:
                    raise ValueError(f"d({a}) has a term {w} of the wrong degree")
                if word_source(q, w) != arr.source or word_target(q, w) != arr.target:
                    raise ValueError(f"d({a}) has a term {w} with other endpoints")
            if dv:
                clean[a] = dv
        object.__setattr__(self, "generator_diff", clean)

    def weight(self, w: Word) -> int:
        return word_weight(self.quiver, w)

    def degree(self, w: Word) -> int:
        return word_degree(self.quiver, w)

    def words(self, window=None) -> GradedSpace:
        return enumerate_words(self.quiver, self.weight_bound,
                               window if window is not None else self.degree_window)

    def _trim(self, v: dict, truncate: bool) -> dict:
        over = [w for w in v if self.weight(w) > self.weight_bound]
        if over and not truncate:
            raise TruncationOverflow(f"term {over[0]} exceeds weight {self.weight_bound}")
        for w in over:
            del v[w]
        return v

    def diff_vector(self, v: Mapping, truncate: bool = False) -> dict:
        out: dict = {}
        for w, c in v.items():
            vadd(out, leibniz_extend(self, w, truncate), self.field, c)
        return out

    def mul(self, x: Mapping, y: Mapping, truncate: bool = True) -> dict:
        return self._trim(vec_mul(self.quiver, x, y, self.field), truncate)

    def is_weight_homogeneous(self) -> bool:
        """True when d preserves weight, so each weight slot is a subcomplex."""
        for a, dv in self.generator_diff.items():
            wa = self.quiver.arrow(a).weight
            if any(self.weight(w) != wa for w in dv):
                return False
        return True

    def is_weight_nondecreasing(self) -> bool:
        for a, dv in self.generator_diff.items():
            wa = self.quiver.arrow(a).weight
            if any(self.weight(w) < wa for w in dv):
                return False
        return True

    def chain_complex(self, window=None, weight: int | None = None) -> BoundedComplex:
        """Underlying complex of the truncation, optionally one weight slot.

        Words of weight > W are dropped, which is a quotient complex when d
        never lowers weight; degrees next to the window edges are flagged.
        """
        lo, hi = window if window is not None else (self.degree_window or (None, None))
        words = [w for w in _all_words(self.quiver, self.weight_bound)
                 if weight is None or self.weight(w) == weight]
        degs = [self.degree(w) for w in words]
        if lo is None:
            lo, hi = (min(degs), max(degs)) if degs else (0, 0)
        space = GradedSpace.from_pairs((w, d) for w, d in zip(words, degs) if lo <= d <= hi)
        dmap = SparseMap.from_function(
            space, space, 1, lambda w: leibniz_extend(self, w, truncate=True),
            self.field, strict=False)
        low_cut = any(d < lo for d in degs)
        high_cut = any(d > hi for d in degs)
        unreliable = set()
        if weight is None and not self.is_weight_homogeneous():
            unreliable = set(range(lo, hi + 1))
        return BoundedComplex(space, dmap, (lo, hi), (low_cut, high_cut),
                              frozenset(unreliable))


def _coerce_word(q: GradedQuiver, w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        if w in q.vertices:
            return Word.idem(w)
        return word_from_letters(q, w.split())
    return word_from_letters(q, w)


def leibniz_extend(a: TruncatedDGAlgebra, w: Word, truncate: bool = False) -> dict:
    """d(a_k...a_1) = Σ_i (-1)^{|a_k...a_{i+1}|} a_k...d(a_i)...a_1."""
    q = a.quiver
    out: dict = {}
    if w.is_idempotent():
        return out
    letters = w.letters
    left_deg = 0
    for i, lab in enumerate(letters):
        dv = a.generator_diff.get(lab)
        if dv:
            sign = -1 if left_deg % 2 else 1
            left = letters[:i]
            right = letters[i + 1:]
            for t, c in dv.items():
                new = left + t.letters + right
                new_word = Word(new) if new else t
                vadd(out, {new_word: sign * c}, a.field)
        left_deg += q.arrow(lab).degree
    return a._trim(out, truncate)


def check_d_squared(a: TruncatedDGAlgebra) -> DSquaredReport:
    """d(d(x)) = 0 for every generator, computed modulo weight > W."""
    offenders = {}
    for arr in a.quiver.arrows:
        dv = a.generator_diff.get(arr.label, {})
        dd = a.diff_vector(dv, truncate=True)
        if dd:
            offenders[arr.label] = dd
    return DSquaredReport(not offenders, offenders)


# --- finite-dimensional algebras -----------------------------------------------


@dataclass(frozen=True)
class FiniteAlgebra:
    """Finite-dimensional strictly unital algebra over the semisimple base.

    ``products[(x, y)]`` is the ordinary product x·y, ``diff[x]`` is dx, and
    ``higher[k][(x_k, ..., x_1)]`` stores A∞ operations of arity k >= 3 in the
    sign convention where μ¹(x) = (-1)^{|x|} dx and μ²(x2, x1) = (-1)^{|x1|} x2·x1.
    Unit labels are handled implicitly: products with units need not be listed.
    """

    vertices: tuple
    labels: tuple
    degree: Mapping[str, int]
    source: Mapping[str, str]
    target: Mapping[str, str]
    units: Mapping[str, str]
    products: Mapping[tuple, Mapping] = field(default_factory=dict)
    diff: Mapping[str, Mapping] = field(default_factory=dict)
    higher: Mapping[int, Mapping[tuple, Mapping]] = field(default_factory=dict)
    field: Field = QQ
    weight: Mapping[str, int] | None = None
    arity: int = 4
    name: str = ""

    def __post_init__(self):
        f = self.field
        object.__setattr__(self, "products", {
            k: vclean(v, f) for k, v in self.products.items() if vclean(v, f)})
        object.__setattr__(self, "diff", {
            k: vclean(v, f) for k, v in self.diff.items() if vclean(v, f)})
        object.__setattr__(self, "higher", {
            k: {t: vclean(v, f) for t, v in ops.items() if vclean(v, f)}
            for k, ops in self.higher.items()})
        unit_set = set(self.units.values())
        object.__setattr__(self, "_unit_set", unit_set)
        object.__setattr__(self, "_unit_of", {u: v for v, u in self.units.items()})
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        for v, u in self.units.items():
            if self.source[u] != v or self.target[u] != v or self.degree[u] != 0:
                raise ValueError(f"unit {u!r} must be a degree-0 loop at {v!r}")

    # -- basic data --------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    def is_unit(self, x) -> bool:
        return x in self._unit_set

    def augmentation_ideal(self) -> tuple:
        return tuple(x for x in self.labels if x not in self._unit_set)

    def has_higher(self) -> bool:
        return any(self.higher.values())

    def space(self) -> GradedSpace:
        return GradedSpace.from_pairs((x, self.degree[x]) for x in self.labels)

    def composable(self, x, y) -> bool:
        """x·y can be nonzero: source(x) = target(y)."""
        return self.source[x] == self.target[y]

    # -- operations --------------------------------------------------------------

    def mul(self, x, y) -> dict:
        if not self.composable(x, y):
            return {}
        if x in self._unit_set:
            return {y: 1}
        if y in self._unit_set:
            return {x: 1}
        return dict(self.products.get((x, y), {}))

    def d(self, x) -> dict:
        return dict(self.diff.get(x, {}))

    def mu(self, xs: tuple) -> dict:
        """Signed A∞ operation μ^k(x_k, ..., x_1) on basis labels."""
        k = len(xs)
        f = self.field
        if k == 1:
            x = xs[0]
            return vscale(self.d(x), (-1) ** (self.degree[x] % 2), f)
        if k == 2:
            x2, x1 = xs
            return vscale(self.mul(x2, x1), (-1) ** (self.degree[x1] % 2), f)
        if k > self.arity:
            return {}
        for x in xs:
            if x in self._unit_set:
                return {}
        return dict(self.higher.get(k, {}).get(tuple(xs), {}))

    def mu_vec(self, vecs: list[Mapping]) -> dict:
        out: dict = {}
        for combo in cartesian(*[list(v.items()) for v in vecs]):
            coeff = 1
            for _, c in combo:
                coeff *= c
            vadd(out, self.mu(tuple(x for x, _ in combo)), self.field, coeff)
        return out

    def mul_vec(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, s in x.items():
            for b, t in y.items():
                vadd(out, self.mul(a, b), self.field, s * t)
        return out

    def d_vec(self, x: Mapping) -> dict:
        out: dict = {}
        for a, s in x.items():
            vadd(out, self.d(a), self.field, s)
        return out

    # -- checks --------------------------------------------------------------------

    def validate(self) -> list[str]:
        """List of violated axioms (empty when valid)."""
        errs = []
        f = self.field
        L = self.labels
        for (x, y), v in self.products.items():
            if x in self._unit_set or y in self._unit_set:
                continue
            for z in v:
                if self.degree[z] != self.degree[x] + self.degree[y]:
                    errs.append(f"product {x}*{y} not degree-additive")
                if self.source[z] != self.source[y] or self.target[z] != self.target[x]:
                    errs.append(f"product {x}*{y} breaks endpoints")
        for x, v in self.diff.items():
            if x in self._unit_set:
                errs.append(f"unit {x} has nonzero differential")
            for z in v:
                if self.degree[z] != self.degree[x] + 1:
                    errs.append(f"d({x}) has wrong degree")
        for x in L:
            if self.d_vec(self.d(x)):
                errs.append(f"d^2({x}) != 0")
        for x in L:
            for y in L:
                if not self.composable(x, y):
                    continue
                lhs = self.d_vec(self.mul(x, y))
                rhs = self.mul_vec(self.d(x), {y: 1})
                vadd(rhs, self.mul_vec({x: 1}, self.d(y)), f, (-1) ** (self.degree[x] % 2))
                if lhs != rhs:
                    errs.append(f"Leibniz fails on ({x}, {y})")
                for z in L:
                    if not self.composable(y, z):
                        continue
                    a = self.mul_vec(self.mul(x, y), {z: 1})
                    b = self.mul_vec({x: 1}, self.mul(y, z))
                    if a != b and not self.has_higher():
                        errs.append(f"associativity fails on ({x}, {y}, {z})")
        if self.has_higher():
            errs.extend(self.check_ainf_relations())
        return errs

    def check_ainf_relations(self, max_arity: int | None = None) -> list[str]:
        """A∞ relations for total arity up to the stored bound."""
        top = max_arity or self.arity
        errs = []
        L = self.labels
        for n in range(1, top + 1):
            for xs in cartesian(L, repeat=n):
                if not all(self.composable(xs[i], xs[i + 1]) for i in range(n - 1)):
                    continue
                if ainf_relation(self, xs):
                    errs.append(f"A∞ relation fails at {xs}")
        return errs


def reduced_degree(A: FiniteAlgebra, x) -> int:
    return A.degree[x] - 1


def ainf_relation(A: FiniteAlgebra, xs: tuple) -> dict:
    """Σ (-1)^{✠_1^i} μ(x_n..x_{i+j+1}, μ^j(x_{i+j}..x_{i+1}), x_i..x_1)."""
    n = len(xs)
    rev = xs[::-1]  # rev[0] = x_1
    out: dict = {}
    f = A.field
    for i in range(n):
        sgn_i = sum(reduced_degree(A, rev[t]) for t in range(i)) % 2
        for j in range(1, n - i + 1):
            inner = A.mu(tuple(reversed(rev[i:i + j])))
            if not inner:
                continue
            left = tuple(reversed(rev[i + j:]))
            right = tuple(reversed(rev[:i]))
            for y, c in inner.items():
                args = left + (y,) + right
                if not all(A.composable(args[t], args[t + 1]) for t in range(len(args) - 1)):
                    continue
                vadd(out, A.mu(args), f, c * (-1) ** sgn_i)
    return out


def quotient_truncated(a: TruncatedDGAlgebra, relations: Iterable[Mapping],
                       name: str = "") -> FiniteAlgebra:
    """Truncated path algebra modulo the two-sided ideal of ``relations``.

    Normal forms keep the smallest words: elimination pivots on the largest word
    of each ideal element.  The differential descends when the ideal is closed
    under d (checked); otherwise ValueError.
    """
    q = a.quiver
    f = a.field
    W = a.weight_bound
    words = _all_words(q, W)
    order = {w: i for i, w in enumerate(words)}
    key = lambda w: -order[w]  # noqa: E731
    rels = []
    for r in relations:
        r = vclean({_coerce_word(q, w): c for w, c in r.items()}, f)
        if not r:
            continue
        degs = {word_degree(q, w) for w in r}
        if len(degs) != 1:
            raise ValueError("relation is not degree-homogeneous")
        rels.append(a._trim(r, True))
    red = Reducer(f)
    for r in rels:
        rw = min(word_weight(q, w) for w in r)
        for u in words:
            wu = word_weight(q, u)
            if wu + rw > W:
                break
            for v in words:
                if wu + rw + word_weight(q, v) > W:
                    break
                prod = vec_mul(q, vec_mul(q, {u: 1}, r, f), {v: 1}, f)
                prod = a._trim(prod, True)
                if prod:
                    red.insert({key(w): c for w, c in prod.items()})

    def normal_form(vec: Mapping) -> dict:
        vec = a._trim(dict(vec), True)
        rem, _ = red.reduce({key(w): c for w, c in vec.items()})
        return {words[-k]: c for k, c in rem.items()}

    pivots = {words[-k] for k in red.pivots}
    basis = [w for w in words if w not in pivots]
    dead = {v for v in q.vertices if Word.idem(v) in pivots}
    labels, lab_of = [], {}
    for w in basis:
        s = str(w)
        lab_of[w] = s
        labels.append(s)
    to_lab = lambda vec: {lab_of[w]: c for w, c in vec.items()}  # noqa: E731
    degree = {lab_of[w]: word_degree(q, w) for w in basis}
    src = {lab_of[w]: word_source(q, w) for w in basis}
    tgt = {lab_of[w]: word_target(q, w) for w in basis}
    wgt = {lab_of[w]: word_weight(q, w) for w in basis}
    vertices = tuple(v for v in q.vertices if v not in dead)
    units = {v: lab_of[Word.idem(v)] for v in vertices}
    products = {}
    for x in basis:
        for y in basis:
            if x.is_idempotent() or y.is_idempotent():
                continue
            w = word_mul(q, x, y)
            if w is None:
                continue
            nf = normal_form({w: 1})
            if nf:
                products[(lab_of[x], lab_of[y])] = to_lab(nf)
    diff = {}
    if a.generator_diff:
        for r in rels:
            if normal_form(a.diff_vector(r, truncate=True)):
                raise ValueError("ideal is not closed under the differential")
        for x in basis:
            nf = normal_form(leibniz_extend(a, x, truncate=True))
            if nf:
                diff[lab_of[x]] = to_lab(nf)
    alg = FiniteAlgebra(vertices, tuple(labels), degree, src, tgt, units, products,
                        diff, {}, f, wgt, name=name)
    object.__setattr__(alg, "normal_form_words", normal_form)
    return alg


def path_algebra(a: TruncatedDGAlgebra, name: str = "") -> FiniteAlgebra:
    return quotient_truncated(a, [], name)


def semisimple(r: int = 1, field: Field = QQ) -> FiniteAlgebra:
    verts = tuple(f"{i + 1}" for i in range(r))
    labels = tuple(f"e{v}" for v in verts)
    return FiniteAlgebra(verts, labels, {l: 0 for l in labels},
                         dict(zip(labels, verts)), dict(zip(labels, verts)),
                         dict(zip(verts, labels)), field=field,
                         name="k" if r == 1 else f"k^{r}")
