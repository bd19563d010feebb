"""Bar and cobar constructions for augmented algebras, and the dual algebra.

Everything is over the semisimple base 𝕜 = ⊕ 𝕂 e_v and uses the trivial
augmentation, projection onto the span of the idempotents.  Bar words are
composable tuples over the augmentation ideal Ā, with letters shifted by one,
so a word x_k..x_1 sits in degree Σ(|x_i| - 1).

When the algebra carries an internal weight with Ā in weight >= 1 and all
operations additive in weight, every construction splits into weight slots.
A slot of weight w only meets words with at most w letters, so it is computed
exactly as soon as w is below the truncation bounds.  That is how the checks
here certify their answers; without a weight grading they fall back on
comparing two truncation levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Mapping

from .algcore import (
    FiniteAlgebra, GradedQuiver, TruncatedDGAlgebra, Word, check_d_squared,
    quotient_truncated,
)
from .exactlin import (
    BoundedComplex, ComplexError, GradedSpace, Homology, SparseMap, homology, vadd,
)
from .hochcyc import bar_b_prime


class AugmentationError(ValueError):
    pass


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class AugmentedAlgebra:
    """Strictly unital algebra with the augmentation killing Ā = non-unit labels."""

    algebra: FiniteAlgebra
    ideal: tuple = ()
    weights: Mapping[str, int] | None = None
    exact_weight: int | None = None   # weights above this were cut off upstream

    @classmethod
    def of(cls, A) -> "AugmentedAlgebra":
        if isinstance(A, AugmentedAlgebra):
            return A
        cut = None
        if isinstance(A, TruncatedDGAlgebra):
            cut = A.weight_bound
            A = quotient_truncated(A, [], name="truncated")
        ideal = A.augmentation_ideal()
        _check_augmentation(A, ideal)
        return cls(A, ideal, _additive_weights(A, ideal), cut)

    def weight_cap(self, top: int) -> int:
        """Largest weight that is exact for the untruncated algebra."""
        return top if self.exact_weight is None else min(top, self.exact_weight)

    @property
    def field(self):
        return self.algebra.field

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def weight(self, letters) -> int:
        if self.weights is None:
            return len(letters)
        return sum(self.weights[x] for x in letters)

    def bar_degree(self, letters) -> int:
        return sum(self.algebra.degree[x] - 1 for x in letters)


def _operations(A: FiniteAlgebra, ideal: tuple):
    """Yield (inputs, output vector) for every nonzero structure map on Ā."""
    for x in ideal:
        if A.d(x):
            yield (x,), A.d(x)
    for (x, y), v in A.products.items():
        if x in ideal and y in ideal:
            yield (x, y), v
    for k, ops in A.higher.items():
        for xs, v in ops.items():
            yield tuple(xs), v


def _check_augmentation(A: FiniteAlgebra, ideal: tuple) -> None:
    units = set(A.labels) - set(ideal)
    for u in units:
        if A.d(u):
            raise AugmentationError(f"d({u}) != 0 for the unit {u}")
    for xs, v in _operations(A, ideal):
        if any(x in units for x in xs):
            continue
        hit = units & set(v)
        if hit:
            raise AugmentationError(
                f"operation on {' '.join(xs)} leaves the augmentation ideal")


def _additive_weights(A: FiniteAlgebra, ideal: tuple):
    if not ideal:
        return {}
    w = A.weight
    if w is None or any(w[x] < 1 for x in ideal):
        return None
    for xs, v in _operations(A, ideal):
        total = sum(w[x] for x in xs)
        if any(w[y] != total for y in v):
            return None
    return {x: w[x] for x in ideal}


# --- bar ------------------------------------------------------------------------


@dataclass
class BarCoalgebra:
    aug: AugmentedAlgebra
    B: int
    max_weight: int | None
    space: GradedSpace
    differential: SparseMap
    words: list = field(default_factory=list)

    def weight(self, w: Word) -> int:
        return self.aug.weight(w.letters)

    def complex(self, window=None, weight: int | None = None) -> BoundedComplex:
        keep = [w for w in self.words if weight is None or self.weight(w) == weight]
        return _subcomplex(self.differential, keep, window, self.space)


def _subcomplex(d: SparseMap, keep: list, window, space: GradedSpace) -> BoundedComplex:
    sp = GradedSpace.from_pairs((w, space.degree_of(w)) for w in keep)
    cols = {c: {r: x for r, x in d.columns.get(c, {}).items() if r in sp} for c in keep}
    dm = SparseMap(sp, sp, 1, {c: v for c, v in cols.items() if v}, d.field)
    cx = BoundedComplex(sp, dm, None, (False, False), frozenset())
    if window is not None:
        cx = cx.restrict(*window)
    return cx


def bar_words(aug: AugmentedAlgebra, B: int, max_weight: int | None = None) -> list[Word]:
    """Empty words (one per vertex) and composable words over Ā of length <= B."""
    A = aug.algebra
    out = [Word.idem(v) for v in A.vertices]
    frontier = [(x,) for x in aug.ideal]
    for _ in range(B):
        nxt = []
        for w in frontier:
            if max_weight is not None and aug.weight(w) > max_weight:
                continue
            out.append(Word(w))
            for y in aug.ideal:
                if A.composable(w[-1], y):
                    nxt.append(w + (y,))
        frontier = nxt
    key = lambda w: (aug.weight(w.letters), len(w.letters), w.letters, w.vertex or "")  # noqa: E731
    return sorted(out, key=key)


def bar(A, B: int, window=None, max_weight: int | None = None) -> BarCoalgebra:
    """Bar construction truncated at length B (and optionally internal weight).

    The bar differential never lengthens a word, so the truncation is a
    subcomplex and d^2 = 0 holds on the nose; a failure raises ComplexError."""
    if B < 1:
        raise ValueError("bar length must be at least 1")
    aug = AugmentedAlgebra.of(A)
    alg = aug.algebra
    words = bar_words(aug, B, max_weight)
    space = GradedSpace.from_pairs((w, aug.bar_degree(w.letters)) for w in words)

    def col(w: Word):
        if w.is_idempotent():
            return {}
        return {Word(t): c for t, c in bar_b_prime(alg, w.letters).items()}

    d = SparseMap.from_function(space, space, 1, col, alg.field)
    if not d.compose(d).is_zero():
        raise ComplexError("bar differential does not square to zero")
    C = BarCoalgebra(aug, B, max_weight, space, d, words)
    if window is not None:
        C.window = window
    return C


# --- dual algebra -------------------------------------------------------------------


def dual_label(x: str) -> str:
    return x + "^"


def dual_algebra(C: BarCoalgebra) -> TruncatedDGAlgebra:
    """Graded dual of the bar coalgebra as a completed tensor algebra.

    The word x_k..x_1 is dual to x_1^ .. x_k^ (letters reversed), so x^ is an
    arrow t(x) -> s(x) of degree 1 - |x|.  Under this identification the
    transpose of the bar differential is the derivation with

        d(x^) = Σ_y <x, μ^j(y_j..y_1)> y_1^ .. y_j^

    and the bar Leibniz sign (letters to the right) becomes the left Leibniz
    sign of the path algebra.  Weight is the internal weight when there is one
    and the word length otherwise."""
    aug = C.aug
    A = aug.algebra
    arrows = []
    for x in aug.ideal:
        wt = aug.weights[x] if aug.weighted else 1
        arrows.append((dual_label(x), A.target[x], A.source[x], 1 - A.degree[x], wt))
    q = GradedQuiver.build(A.vertices, arrows)
    diff: dict = {}
    for w in C.words:
        if w.is_idempotent():
            continue
        for x, c in A.mu(w.letters).items():
            rev = tuple(dual_label(y) for y in reversed(w.letters))
            vadd(diff.setdefault(dual_label(x), {}), {Word(rev): c}, A.field)
    bound = C.max_weight if (aug.weighted and C.max_weight is not None) else C.B
    return TruncatedDGAlgebra(q, {k: v for k, v in diff.items() if v}, bound,
                              completed=True, field=A.field)


# --- cobar -----------------------------------------------------------------------


def cobar_label(letters: tuple) -> str:
    return "[" + ",".join(letters) + "]"


def cobar_sign_split(aug: AugmentedAlgebra, left: tuple, right: tuple) -> int:
    # b' obeys d(LR) = (-1)^{|R|} d(L) R + L d(R); this sign makes the cobar
    # differential square to zero under the left Leibniz rule.
    l, r = aug.bar_degree(left), aug.bar_degree(right)
    return _sgn(l * r + l)


def completed_cobar(C: BarCoalgebra, P: int, window=None) -> TruncatedDGAlgebra:
    """Cobar construction on the bar coalgebra modulo F^P.

    Generators are the nonempty bar words c, desuspended to degree |c| + 1:

        d[c] = -[b'c] + Σ_{c = c' c''} (-1)^{|c'||c''| + |c'|} [c'][c''].

    Without an internal weight the weight of a cobar word is its tensor length
    and the truncation is literally ΩC/F^P.  With one, the weight is the
    internal weight bounded by min(B, P - 1); below that bound every cobar word
    has tensor length < P, so each kept slot coincides with the slot of ΩC/F^P."""
    if P < 1:
        raise ValueError("cobar depth must be at least 1")
    aug = C.aug
    A = aug.algebra
    arrows, labels = [], {}
    for w in C.words:
        if w.is_idempotent():
            continue
        lab = cobar_label(w.letters)
        labels[w.letters] = lab
        wt = aug.weight(w.letters) if aug.weighted else 1
        arrows.append((lab, A.source[w.letters[-1]], A.target[w.letters[0]],
                       aug.bar_degree(w.letters) + 1, wt))
    q = GradedQuiver.build(A.vertices, arrows)
    diff: dict = {}
    for w in C.words:
        if w.is_idempotent():
            continue
        out: dict = {}
        for t, c in C.differential.columns.get(w, {}).items():
            vadd(out, {Word((labels[t.letters],)): -c}, A.field)
        for i in range(1, len(w.letters)):
            left, right = w.letters[:i], w.letters[i:]
            vadd(out, {Word((labels[left], labels[right])):
                       cobar_sign_split(aug, left, right)}, A.field)
        if out:
            diff[labels[w.letters]] = out
    if aug.weighted:
        cap = C.max_weight if C.max_weight is not None else C.B
        bound = min(cap, C.B, P - 1)
    else:
        bound = P - 1
    T = TruncatedDGAlgebra(q, diff, bound, window, completed=True, field=A.field)
    rep = check_d_squared(T)
    if not rep.ok:
        raise ComplexError(f"cobar d^2 != 0 on {sorted(rep.offenders)}")
    return T


# --- Betti tables ------------------------------------------------------------------


def algebra_betti(A: FiniteAlgebra, max_weight: int | None = None) -> dict:
    """H(A, μ^1) as {(weight, degree): dim}; weight None when A is unweighted."""
    aug = AugmentedAlgebra.of(A)
    alg = aug.algebra
    slots: dict = {}
    for x in alg.labels:
        w = (0 if alg.is_unit(x) else aug.weights[x]) if aug.weighted else None
        if max_weight is None or w is None or w <= max_weight:
            slots.setdefault(w, []).append(x)
    out = {}
    for w, labs in slots.items():
        sp = GradedSpace.from_pairs((x, alg.degree[x]) for x in labs)
        d = SparseMap.from_function(sp, sp, 1, alg.d, alg.field, strict=False)
        h = homology(BoundedComplex(sp, d, None, (False, False), frozenset()))
        for k, v in h.dims.items():
            if v:
                out[(w, k)] = v
    return out


def _slot_betti(T: TruncatedDGAlgebra, weights) -> dict:
    out = {}
    for w in weights:
        cx = T.chain_complex(weight=w)
        if not cx.spaces.degrees:
            continue
        for k, v in homology(cx).dims.items():
            if v:
                out[(w, k)] = v
    return out


def _by_degree(table: Mapping) -> dict:
    out: dict = {}
    for (_, k), v in table.items():
        out[k] = out.get(k, 0) + v
    return dict(sorted(out.items()))


@dataclass
class BettiReport:
    slots: dict                # (weight, degree) -> dim, exact slots only
    degrees: Homology          # aggregated by degree, with unreliable degrees
    certified: bool            # True when exactness comes from the weight grading


def ext_betti(A, window=(0, 4), B: int = 6) -> BettiReport:
    """Betti numbers of RHom_A(𝕜, 𝕜) = H(dual of the bar construction).

    Weighted: slots of weight <= B are exact, and degree k is reliable when no
    dual word of weight > B can have degree <= k + 1.  A truncated dg algebra
    of weight bound W is exact only up to weight W, so min(B, W) is used.
    Unweighted: degrees agreeing between B and B + 1 are reported reliable."""
    aug = AugmentedAlgebra.of(A)
    lo, hi = window
    if aug.weighted:
        top = aug.weight_cap(B)
        T = dual_algebra(bar(aug, B, max_weight=top))
        slots = _slot_betti(T, range(top + 1))
        degs = {k: v for k, v in _by_degree(slots).items() if lo <= k <= hi}
        floor = _dual_degree_floor(aug, top)
        dims = {k: degs.get(k, 0) for k in range(lo, hi + 1)}
        bad = {k for k in dims if floor is None or k + 1 >= floor}
        return BettiReport({s: v for s, v in slots.items() if lo <= s[1] <= hi},
                           Homology(dims, frozenset(bad)), True)
    h1 = _unweighted_ext(aug, B, window)
    h2 = _unweighted_ext(aug, B + 1, window)
    bad = {k for k in h1.dims if h1.dims[k] != h2.dims.get(k)} | set(h1.unreliable)
    return BettiReport({(None, k): v for k, v in h1.dims.items() if v},
                       Homology(h1.dims, frozenset(bad)), False)


def _dual_degree_floor(aug: AugmentedAlgebra, B: int):
    """Lower bound for the degree of dual words of weight > B, or None."""
    A = aug.algebra
    if not aug.ideal:
        return float("inf")
    shifts = [1 - A.degree[x] for x in aug.ideal]
    if min(shifts) < 1:
        return None
    m = max(aug.weights.values())
    return min(shifts) * ceil((B + 1) / m)


def _unweighted_ext(aug: AugmentedAlgebra, B: int, window) -> Homology:
    T = dual_algebra(bar(aug, B))
    cx = T.chain_complex()
    lo, hi = window
    h = homology(cx)
    dims = {k: h.dims.get(k, 0) for k in range(lo, hi + 1)}
    return Homology(dims, frozenset())


@dataclass
class BarCobarReport:
    algebra: dict
    cobar: dict
    slots: list                # weights compared exactly
    mismatches: list

    @property
    def agree(self) -> bool:
        return not self.mismatches


def bar_cobar_check(A, B: int = 6, P: int = 5) -> BarCobarReport:
    """Compare H(ΩBA) with H(A) slot by slot on the exact weights.

    Needs an internal weight grading; raises AugmentationError otherwise."""
    aug = AugmentedAlgebra.of(A)
    if not aug.weighted:
        raise AugmentationError("bar-cobar check needs an internal weight grading")
    top = aug.weight_cap(min(B, P - 1))
    C = bar(aug, B, max_weight=top)
    T = completed_cobar(C, P)
    cob = _slot_betti(T, range(top + 1))
    alg = algebra_betti(aug.algebra, top)
    keys = sorted(set(cob) | set(alg))
    bad = [(k, alg.get(k, 0), cob.get(k, 0)) for k in keys if alg.get(k, 0) != cob.get(k, 0)]
    return BarCobarReport(alg, cob, list(range(top + 1)), bad)
