"""Hochschild and non-unital Hochschild complexes, Connes' operator, and the
u-linear cyclic complexes with their long exact sequence.

A tensor word x_d ⊗ ... ⊗ x_1 is a tuple read left to right, so ``w[0]`` is
x_d (the special slot) and ``w[-1]`` is x_1.  Consecutive factors are
composable over the base, and the word closes up: source(x_d) = target(x_1).
Elements of CH^nu are dicts keyed by ``(tag, word)`` with tag "c" (check) or
"h" (hat).  Reduced degrees ||x|| = |x| - 1; a check word has degree
Σ||x_i|| + 1 and its hat copy has degree Σ||x_i||.  Differentials raise degree
by one and Connes' operator lowers it by one, so |u| = 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .algcore import FiniteAlgebra
from .s1cx import S1Complex, u_exponents, u_space
from .exactlin import (
    BoundedComplex, ComplexError, GradedSpace, Homology, HomologyBasis, SparseMap, homology,
    induced_matrix, kernel_of_columns, matrix_rank, solve, vadd, vscale,
)

CHECK, HAT = "c", "h"


def rdeg(A: FiniteAlgebra, x) -> int:
    return A.degree[x] - 1


def maltese(A: FiniteAlgebra, word: tuple, i: int, j: int) -> int:
    """✠_i^j = Σ_{k=i}^{j} ||x_k|| with x_k = word[d - k]."""
    d = len(word)
    return sum(rdeg(A, word[d - k]) for k in range(i, j + 1))


def check_degree(A: FiniteAlgebra, word: tuple) -> int:
    return sum(rdeg(A, x) for x in word) + 1


def element_degree(A: FiniteAlgebra, key: tuple) -> int:
    tag, word = key
    return check_degree(A, word) - (1 if tag == HAT else 0)


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


def _composable(A: FiniteAlgebra, word: tuple) -> bool:
    return all(A.composable(word[p], word[p + 1]) for p in range(len(word) - 1))


# --- the operators on single words ------------------------------------------------


def _fold(A: FiniteAlgebra, word: tuple, s: int, j: int) -> dict:
    """x_d..x_{s+j+1} ⊗ μ^j(x_{s+j}..x_{s+1}) ⊗ x_s..x_1, unsigned."""
    d = len(word)
    lo, hi = d - s - j, d - s
    out = {}
    for y, c in A.mu(word[lo:hi]).items():
        out[word[:lo] + (y,) + word[hi:]] = c
    return out


def bar_b_prime(A: FiniteAlgebra, word: tuple) -> dict:
    """Bar differential Σ_{s,j} (-1)^{✠_1^s} (fold μ^j at x_{s+j}..x_{s+1})."""
    out: dict = {}
    d = len(word)
    for s in range(d):
        sign = _sgn(maltese(A, word, 1, s))
        for j in range(1, min(d - s, A.arity) + 1):
            vadd(out, _fold(A, word, s, j), A.field, sign)
    return out


def rotate(word: tuple, i: int) -> tuple:
    """x_i..x_1 ⊗ x_d..x_{i+1}."""
    d = len(word)
    return word[d - i:] + word[:d - i]


def special_folds(A: FiniteAlgebra, word: tuple) -> dict:
    """Folds whose input contains the special slot x_d, including wrap-arounds:
    Σ_{0<=i<j} (-1)^{✠_1^i ✠_{i+1}^d + ✠_1^{d-1} + 1}
        μ^j(x_i..x_1, x_d..x_{d-j+i+1}) ⊗ x_{d-j+i}..x_{i+1}.

    i = 0 is the ordinary leftmost fold.  The common sign is the Koszul sign of
    rotating x_i..x_1 to the front times (-1)^{✠_1^{d-1}+1}."""
    out: dict = {}
    d = len(word)
    base = maltese(A, word, 1, d - 1) + 1
    for i in range(d):
        rot = rotate(word, i)
        sign = _sgn(maltese(A, word, 1, i) * maltese(A, word, i + 1, d) + base)
        for j in range(i + 1, min(d, A.arity) + 1):
            for y, c in A.mu(rot[:j]).items():
                vadd(out, {(y,) + rot[j:]: c}, A.field, sign)
    return out


def inner_folds(A: FiniteAlgebra, word: tuple) -> dict:
    """Folds avoiding x_d: Σ_{s+j<d} (-1)^{✠_1^s} x_d..μ^j(x_{s+j}..x_{s+1})..x_1."""
    out: dict = {}
    d = len(word)
    for s in range(d):
        sign = _sgn(maltese(A, word, 1, s))
        for j in range(1, min(d - s - 1, A.arity) + 1):
            vadd(out, _fold(A, word, s, j), A.field, sign)
    return out


def hochschild_b(A: FiniteAlgebra, word: tuple) -> dict:
    """Hochschild differential on a check word: inner folds plus folds through x_d."""
    out = inner_folds(A, word)
    vadd(out, special_folds(A, word), A.field)
    return out


def wrap_terms(A: FiniteAlgebra, word: tuple) -> dict:
    """b(w) - b'(w): the part of the Hochschild differential absent from the bar one."""
    out = hochschild_b(A, word)
    vadd(out, bar_b_prime(A, word), A.field, -1)
    return out


def d_wedge_vee(A: FiniteAlgebra, word: tuple) -> dict:
    """Hat word to check words:
    (-1)^{✠_2^d + ||x_1||·✠_2^d + 1} x_1 ⊗ x_d..x_2 + (-1)^{✠_1^{d-1}} x_d..x_1."""
    d = len(word)
    m2d = maltese(A, word, 2, d)
    x1 = rdeg(A, word[-1])
    out: dict = {}
    vadd(out, {rotate(word, 1): _sgn(m2d + x1 * m2d + 1)}, A.field)
    vadd(out, {word: _sgn(maltese(A, word, 1, d - 1))}, A.field)
    return out


def lam(A: FiniteAlgebra, word: tuple) -> tuple[int, tuple]:
    """Cyclic permutation λ: (sign, x_1 ⊗ x_k..x_2)."""
    k = len(word)
    x1 = rdeg(A, word[-1])
    sign = _sgn(x1 * maltese(A, word, 2, k) + x1 + rdeg(A, word[0]))
    return sign, rotate(word, 1)


def norm_N(A: FiniteAlgebra, word: tuple) -> dict:
    out: dict = {}
    sign, w = 1, word
    for _ in range(len(word)):
        vadd(out, {w: sign}, A.field)
        s, w = lam(A, w)
        sign *= s
    return out


def s_nu_sign(A: FiniteAlgebra, word: tuple) -> int:
    return _sgn(maltese(A, word, 1, len(word)) + rdeg(A, word[0]) + 1)


def B_nu_word(A: FiniteAlgebra, word: tuple) -> dict:
    """Connes' operator on a check word, with values in hat words:
    Σ_{i=0}^{k-1} (-1)^{✠_1^i ✠_{i+1}^k + ||x_k|| + ✠_1^k + 1} hat(x_i..x_1 x_k..x_{i+1})."""
    k = len(word)
    tot = maltese(A, word, 1, k)
    xk = rdeg(A, word[0])
    out: dict = {}
    for i in range(k):
        sign = _sgn(maltese(A, word, 1, i) * maltese(A, word, i + 1, k) + xk + tot + 1)
        vadd(out, {rotate(word, i): sign}, A.field)
    return out


# --- operators on elements ------------------------------------------------------------


def _linear(fn, A, v: Mapping, out_tag=None) -> dict:
    out: dict = {}
    for w, c in v.items():
        res = fn(A, w)
        if out_tag is not None:
            res = {(out_tag, u): x for u, x in res.items()}
        vadd(out, res, A.field, c)
    return out


def b_nu(A: FiniteAlgebra, elem: Mapping) -> dict:
    """Block differential [[b, d_∧∨], [0, b']] on a tagged element."""
    out: dict = {}
    for (tag, word), c in elem.items():
        if tag == CHECK:
            res = {(CHECK, u): x for u, x in hochschild_b(A, word).items()}
        else:
            res = {(HAT, u): x for u, x in bar_b_prime(A, word).items()}
            vadd(res, {(CHECK, u): x for u, x in d_wedge_vee(A, word).items()}, A.field)
        vadd(out, res, A.field, c)
    return out


def B_nu(A: FiniteAlgebra, elem: Mapping) -> dict:
    out: dict = {}
    for (tag, word), c in elem.items():
        if tag == CHECK:
            vadd(out, {(HAT, u): x for u, x in B_nu_word(A, word).items()}, A.field, c)
    return out


def s_nu(A: FiniteAlgebra, elem: Mapping) -> dict:
    out: dict = {}
    for (tag, word), c in elem.items():
        if tag == CHECK:
            vadd(out, {(HAT, word): s_nu_sign(A, word)}, A.field, c)
    return out


def N_elem(A: FiniteAlgebra, elem: Mapping) -> dict:
    out: dict = {}
    for (tag, word), c in elem.items():
        if tag == CHECK:
            vadd(out, {(CHECK, u): x for u, x in norm_N(A, word).items()}, A.field, c)
    return out


# --- enumerating words and building complexes -------------------------------------


def cyclic_words(A: FiniteAlgebra, L: int, reduced: bool = False) -> list[tuple]:
    """Cyclically composable words of length 1..L, shortest first.

    ``reduced`` keeps only words whose non-special factors avoid the units."""
    inner = A.augmentation_ideal() if reduced else A.labels
    out = []
    layer = [(x,) for x in A.labels]
    for n in range(1, L + 1):
        out.extend(w for w in layer if A.composable(w[-1], w[0]))
        if n == L:
            break
        layer = [w + (y,) for w in layer for y in inner if A.composable(w[-1], y)]
    return out


def _drop_degenerate(A: FiniteAlgebra, v: dict) -> dict:
    return {w: c for w, c in v.items() if not any(A.is_unit(x) for x in w[1:])}


def certified_degrees(A: FiniteAlgebra, L: int, U: int | None = None,
                      mode: str = "positive"):
    """Lower bound D0 such that every degree >= D0 of the length-L truncation
    (and u-order U model) is complete, or None without a certificate.

    With M = max ||x|| < 0, a word of length n has degree <= nM + 1, so every
    word of length > L sits in degree <= (L+1)M + 1.  In the positive model the
    missing levels u^{-k}, k >= U, sit in degrees <= M + 1 - 2U; in the
    negative and periodic models a missing word x u^e lands in degree
    deg(x) + 2e with e <= U - 1 (resp. U).  A degree is complete once it and
    the degree below are clear of every missing cell."""
    M = max(rdeg(A, x) for x in A.labels)
    if M >= 0:
        return None
    top_missing = (L + 1) * M + 1
    if U is not None:
        if mode == "positive":
            top_missing = max(top_missing, M + 1 - 2 * U)
        elif mode == "negative":
            top_missing += 2 * (U - 1)
        else:
            top_missing += 2 * U
    return top_missing + 2


def build_hochschild_complex(A: FiniteAlgebra, L: int, window=None,
                             reduced: bool = True) -> BoundedComplex:
    """Hochschild chain complex on words of length <= L (a subcomplex).

    Degrees below the certified bound, or every degree when no certificate
    exists, are flagged unreliable."""
    words = cyclic_words(A, L, reduced)
    space = GradedSpace.from_pairs((w, check_degree(A, w)) for w in words)

    def col(w):
        v = hochschild_b(A, w)
        return _drop_degenerate(A, v) if reduced else v

    d = SparseMap.from_function(space, space, 1, col, A.field)
    return _finish(space, d, window, certified_degrees(A, L))


def chnu_space(A: FiniteAlgebra, L: int) -> GradedSpace:
    words = cyclic_words(A, L)
    pairs = []
    for w in words:
        pairs.append(((CHECK, w), check_degree(A, w)))
        pairs.append(((HAT, w), check_degree(A, w) - 1))
    return GradedSpace.from_pairs(pairs)


def chnu_maps(A: FiniteAlgebra, L: int) -> tuple[GradedSpace, SparseMap, SparseMap]:
    """(space, b_nu, B_nu) on CH^nu truncated at length L."""
    space = chnu_space(A, L)
    bmap = SparseMap.from_function(space, space, 1, lambda k: b_nu(A, {k: 1}), A.field)
    Bmap = SparseMap.from_function(space, space, -1, lambda k: B_nu(A, {k: 1}), A.field)
    return space, bmap, Bmap


def build_chnu_complex(A: FiniteAlgebra, L: int, window=None):
    """Non-unital Hochschild complex with its strict S^1 structure.

    Returns (complex, S1Complex with δ_0 = b_nu, δ_1 = B_nu)."""
    space, bmap, Bmap = chnu_maps(A, L)
    cx = _finish(space, bmap, window, certified_degrees(A, L))
    bad = bmap.compose(Bmap) + Bmap.compose(bmap)
    if not bad.is_zero():
        raise ComplexError("b_nu B_nu + B_nu b_nu != 0: sign error")
    return cx, S1Complex(space, (bmap, Bmap), strict=True)


def _finish(space, d, window, d0, extra_unreliable=()) -> BoundedComplex:
    degs = list(space.degrees) or [0]
    natural = (min(degs), max(degs))
    if d0 is not None:
        # certified degrees with no chains are still results (zeros)
        natural = (min(natural[0], d0 - 1), natural[1])
    unreliable = set(extra_unreliable)
    lo, hi = window if window is not None else natural
    for k in range(lo, hi + 1):
        if d0 is None or k < d0:
            unreliable.add(k)
    cx = BoundedComplex(space, d, natural, (False, False), frozenset(unreliable))
    if window is not None:
        cx = cx.restrict(*window)
    return cx


def _pad(window):
    return None if window is None else (window[0] - 1, window[1] + 1)


def _trim(h: Homology, window) -> Homology:
    """Drop the padding degrees again, so a window does not spoil its edges."""
    if window is None:
        return h
    lo, hi = window
    return Homology({k: v for k, v in h.dims.items() if lo <= k <= hi},
                    frozenset(k for k in h.unreliable if lo <= k <= hi))


def hh_table(A: FiniteAlgebra, L: int, window=None, reduced: bool = True) -> Homology:
    return _trim(homology(build_hochschild_complex(A, L, _pad(window), reduced)), window)


def hh_nu_table(A: FiniteAlgebra, L: int, window=None) -> Homology:
    return _trim(homology(build_chnu_complex(A, L, _pad(window))[0]), window)


def hh_best_table(A: FiniteAlgebra, L: int, window=None) -> Homology:
    """hh_table, falling back to the (L+1) stability re-run without a certificate."""
    if certified_degrees(A, L) is not None:
        return hh_table(A, L, window)
    pad = _pad(window)
    return _trim(stabilized(lambda l, u: build_hochschild_complex(A, l, pad), L), window)


# --- u-linear models ----------------------------------------------------------------

MODES = ("positive", "negative", "periodic")


def cyclic_complex(A: FiniteAlgebra, L: int, window, U: int, mode: str = "positive"
                   ) -> BoundedComplex:
    """CH^nu ⊗ (u-truncation) with b_eq = b_nu + u B_nu, built directly from the
    Hochschild operators.  Labels are ((tag, word), exponent)."""
    if U < 1:
        raise ValueError("u-order must be >= 1")
    base = chnu_space(A, L)
    exps = u_exponents(mode, U)
    keep = set(exps)
    space = u_space(base, exps)

    def col(label):
        key, e = label
        out = {}
        for k2, c in b_nu(A, {key: 1}).items():
            out[(k2, e)] = c
        if e + 1 in keep:
            for k2, c in B_nu(A, {key: 1}).items():
                out[(k2, e + 1)] = c
        return out

    d = SparseMap.from_function(space, space, 1, col, A.field)
    return _finish(space, d, window, certified_degrees(A, L, U, mode))


def stabilized(build, L: int, U: int | None = None) -> Homology:
    """Homology of ``build(L, U)`` where an uncertified degree is accepted as
    reliable when its value survives the re-run at (L+1, U+1).  Degrees cut by
    the requested window always stay unreliable."""
    cx = build(L, U)
    h = homology(cx)
    cx2 = build(L + 1, None if U is None else U + 1)
    h2 = homology(cx2)
    keep = set(cx.edge_degrees()) | set(cx2.edge_degrees())
    unreliable = {k for k in h.unreliable if k in keep or h[k] != h2[k]}
    return Homology(h.dims, frozenset(unreliable))


def cyclic_table(A: FiniteAlgebra, L: int, window, U: int, mode: str) -> Homology:
    """Cyclic homology dimensions of the chosen u-model with reliability flags.

    Positive mode with a degree certificate: the certificate decides.  Negative
    and periodic truncations are quotients whose top u-level creates spurious
    classes, so a degree must be certified at order U+1 and keep its value
    from U to U+1.  Without any certificate the (L+1, U+1) re-run decides."""
    return _trim(_cyclic_table(A, L, _pad(window), U, mode), window)


def _cyclic_table(A: FiniteAlgebra, L: int, window, U: int, mode: str) -> Homology:
    if certified_degrees(A, L) is None:
        return stabilized(lambda l, u: cyclic_complex(A, l, window, u, mode), L, U)
    cx = cyclic_complex(A, L, window, U, mode)
    h = homology(cx)
    if mode == "positive":
        return h
    cx2 = cyclic_complex(A, L, window, U + 1, mode)
    h2 = homology(cx2)
    bad = set(cx.edge_degrees()) | set(h2.unreliable)
    bad |= {k for k in h.dims if h[k] != h2[k]}
    return Homology(h.dims, frozenset(k for k in bad if k in h.dims))


# --- Connes' long exact sequence, marking map, exactness witnesses ----------------


@dataclass
class UChain:
    """Σ_k c_k u^{-k} (positive) or Σ_k c_k u^k (negative); ``coeffs[e]`` is the
    CH^nu element at u-exponent e."""

    coeffs: dict
    mode: str = "positive"

    def to_vector(self) -> dict:
        return {(key, e): c for e, el in self.coeffs.items() for key, c in el.items()}

    @classmethod
    def from_vector(cls, v: Mapping, mode: str = "positive") -> "UChain":
        coeffs: dict = {}
        for (key, e), c in v.items():
            coeffs.setdefault(e, {})[key] = c
        return cls(coeffs, mode)

    def is_zero(self) -> bool:
        return not any(self.coeffs.values())


@dataclass
class ConnesSetup:
    A: FiniteAlgebra
    L: int
    U: int
    chnu: BoundedComplex
    s1: S1Complex
    cc: BoundedComplex      # positive model at order U
    cc_low: BoundedComplex  # positive model at order U - 1
    i_map: SparseMap
    s_map: SparseMap

    def connecting(self, z: Mapping) -> dict:
        """Snake chase: lift through S, apply b_eq, read off the u^0 part."""
        from .exactlin import snake_connecting
        return snake_connecting(self.i_map, self.s_map, self.cc, z)


def connes_setup(A: FiniteAlgebra, L: int, U: int) -> ConnesSetup:
    if U < 2:
        raise ValueError("Connes' sequence needs u-order >= 2")
    chnu, s1 = build_chnu_complex(A, L)
    cc = cyclic_complex(A, L, None, U, "positive")
    cc_low = cyclic_complex(A, L, None, U - 1, "positive")
    for cx in (chnu, cc, cc_low):
        cx.check_d_squared()
    i_map = SparseMap(chnu.spaces, cc.spaces, 0,
                      {k: {(k, 0): 1} for k in chnu.spaces.labels()}, A.field)
    s_map = SparseMap(cc.spaces, cc_low.spaces, 2,
                      {(k, e): {(k, e + 1): 1} for (k, e) in cc.spaces.labels() if e < 0},
                      A.field)
    return ConnesSetup(A, L, U, chnu, s1, cc, cc_low, i_map, s_map)


def connes_reliability(A: FiniteAlgebra, L: int, U: int):
    """Certified-degree predicate for the three columns of Connes' sequence,
    or None when no certificate exists."""
    bounds = {"A": certified_degrees(A, L), "B": certified_degrees(A, L, U),
              "C": certified_degrees(A, L, U - 1)}
    if bounds["A"] is None:
        return None
    return lambda name, k: k >= bounds[name]


def connes_les(A: FiniteAlgebra, L: int, window, U: int) -> LESReport:
    """HH^nu -I-> HC -S-> HC[2] -B-> HH^nu[1] over the degrees in ``window``.

    B is the chain-level snake chase in the positive u-model.  Without a
    degree certificate a node counts as reliable when its dimension is the
    same after re-running at (L+1, U+1)."""
    from .exactlin import long_exact_sequence

    st = connes_setup(A, L, U)
    lo, hi = window
    rel = connes_reliability(A, L, U)
    stable_dims = None
    if rel is None:
        st2 = connes_setup(A, L + 1, U + 1)
        rep2 = long_exact_sequence(st2.chnu, st2.cc, st2.cc_low, st2.i_map, st2.s_map,
                                   range(lo, hi + 1), st2.connecting)
        stable_dims = {(n.name, n.degree): n.dim for n in rep2.nodes}
    report = long_exact_sequence(st.chnu, st.cc, st.cc_low, st.i_map, st.s_map,
                                 range(lo, hi + 1), st.connecting,
                                 rel or (lambda name, k: True))
    if stable_dims is not None:
        for n in report.nodes:
            n.reliable = stable_dims.get((n.name, n.degree)) == n.dim
    return report


def marking_chain(beta, s1: S1Complex) -> dict:
    """Σ_k δ_{k+1}(β_k) for an equivariant cocycle in the positive model."""
    from .s1cx import marking_chain as _marking

    v = beta.to_vector() if isinstance(beta, UChain) else beta
    return _marking(v, s1)


@dataclass
class Witness:
    status: str               # "found" | "none" | "inconclusive-at-truncation"
    chain: UChain | None
    degree: int


def exactness_witness(A: FiniteAlgebra, L: int, U: int, eta: Mapping,
                      setup: ConnesSetup | None = None) -> Witness:
    """Search a positive cyclic cocycle η̃ with B[η̃] = [η].

    The equation is solved on homology: coordinates of [η] against the matrix
    of the connecting map.  "none" is only claimed when every degree involved
    is certified complete."""
    from .exactlin import HomologyBasis, solve as lin_solve

    st = setup or connes_setup(A, L, U)
    eta = {k: c for k, c in eta.items() if A.field(c)}
    if not eta:
        return Witness("found", UChain({}), 0)
    degs = {st.chnu.spaces.degree_of(k) for k in eta}
    if len(degs) != 1:
        raise ValueError("eta is not homogeneous")
    (D,) = degs
    if st.chnu.differential.apply(eta):
        raise ValueError("eta is not a b_nu-cycle")
    tgt = HomologyBasis(st.chnu, D)
    src = HomologyBasis(st.cc_low, D + 1)
    y = tgt.coordinates(eta)
    if not any(y):
        return Witness("found", UChain({}), D + 1)
    cols = [tgt.coordinates(st.connecting(rep)) for rep in src.reps]
    s_space = GradedSpace({0: tuple(range(len(cols)))})
    t_space = GradedSpace({0: tuple(range(tgt.dim))})
    m = SparseMap(s_space, t_space, 0,
                  {j: {i: c for i, c in enumerate(col) if c} for j, col in enumerate(cols)},
                  A.field)
    x = lin_solve(m, {i: c for i, c in enumerate(y) if c})
    if x is not None:
        chain: dict = {}
        for j, c in x.items():
            vadd(chain, src.reps[j], A.field, c)
        return Witness("found", UChain.from_vector(chain), D + 1)
    rel = connes_reliability(A, L, U)
    certain = rel is not None and rel("A", D) and rel("C", D + 1) and rel("C", D)
    return Witness("none" if certain else "inconclusive-at-truncation", None, D + 1)


def compare_les(r1: LESReport, r2: LESReport) -> list[str]:
    """Differences between two LES reports, map by map."""
    diffs = []
    for key in sorted(set(r1.matrices) | set(r2.matrices), key=str):
        if r1.matrices.get(key) != r2.matrices.get(key):
            diffs.append(f"matrix {key} differs")
    d1 = {(n.name, n.degree): n.dim for n in r1.nodes}
    d2 = {(n.name, n.degree): n.dim for n in r2.nodes}
    if d1 != d2:
        diffs.append("node dimensions differ")
    return diffs
