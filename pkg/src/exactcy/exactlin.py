"""Exact sparse linear algebra over Q and Z/2, and homology of bounded complexes.

Vectors are plain dicts ``{label: scalar}`` with no zero values stored.  Maps
are stored column-wise.  Elimination always picks the leftmost available pivot
(smallest row index in the target's basis order), so every answer is a
deterministic function of the basis orders.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Label = Hashable


class FieldMismatch(ValueError):
    pass


class ComplexError(ValueError):
    """d∘d is nonzero where it must vanish."""


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    name: str
    characteristic: int

    def __call__(self, x) -> Fraction | int:
        if self.characteristic == 2:
            if isinstance(x, Fraction):
                if x.denominator % 2 == 0:
                    raise ZeroDivisionError("denominator vanishes in Z/2")
                return x.numerator % 2
            return int(x) % 2
        return Fraction(x)

    def inv(self, x):
        if self.characteristic == 2:
            if x % 2 == 0:
                raise ZeroDivisionError
            return 1
        return 1 / Fraction(x)

    def parse(self, text: str):
        return self(Fraction(text))


QQ = Field("q", 0)
GF2 = Field("f2", 2)


def field_from_tag(tag: str) -> Field:
    try:
        return {"q": QQ, "f2": GF2}[tag]
    except KeyError:
        raise ValueError(f"unknown field tag {tag!r} (expected q or f2)") from None


# --- vectors -----------------------------------------------------------------


def vadd(v: dict, w: Mapping, field: Field, scale=1) -> dict:
    """In-place v += scale*w, dropping zeros; returns v."""
    for k, c in w.items():
        x = field(v.get(k, 0) + scale * c)
        if x:
            v[k] = x
        else:
            v.pop(k, None)
    return v


def vscale(v: Mapping, c, field: Field) -> dict:
    out = {}
    for k, x in v.items():
        y = field(c * x)
        if y:
            out[k] = y
    return out


def vclean(v: Mapping, field: Field) -> dict:
    return {k: field(x) for k, x in v.items() if field(x)}


# --- graded spaces and maps --------------------------------------------------


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space: degree -> ordered tuple of basis labels."""

    degrees: Mapping[int, tuple]

    def __post_init__(self):
        clean = {}
        for d in sorted(self.degrees):
            labels = tuple(self.degrees[d])
            if not labels:
                continue
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate labels in degree {d}")
            clean[d] = labels
        object.__setattr__(self, "degrees", clean)
        index = {}
        for d, labels in clean.items():
            for i, lab in enumerate(labels):
                if lab in index:
                    raise ValueError(f"label {lab!r} appears in two degrees")
                index[lab] = (d, i)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Label, int]]) -> "GradedSpace":
        degs: dict[int, list] = {}
        for lab, d in pairs:
            degs.setdefault(d, []).append(lab)
        return cls({d: tuple(v) for d, v in degs.items()})

    def degree_of(self, label) -> int:
        return self._index[label][0]

    def position(self, label) -> int:
        return self._index[label][1]

    def __contains__(self, label) -> bool:
        return label in self._index

    def basis(self, d: int) -> tuple:
        return self.degrees.get(d, ())

    def dim(self, d: int | None = None) -> int:
        if d is None:
            return len(self._index)
        return len(self.degrees.get(d, ()))

    def labels(self):
        for d in self.degrees:
            yield from self.degrees[d]

    def restrict(self, lo: int, hi: int) -> "GradedSpace":
        return GradedSpace({d: v for d, v in self.degrees.items() if lo <= d <= hi})

    def direct_sum(self, other: "GradedSpace") -> "GradedSpace":
        degs = {d: tuple(v) for d, v in self.degrees.items()}
        for d, v in other.degrees.items():
            degs[d] = degs.get(d, ()) + tuple(v)
        return GradedSpace(degs)


@dataclass(frozen=True)
class SparseMap:
    """Degree-homogeneous linear map; ``columns[src_label] = {tgt_label: c}``."""

    source: GradedSpace
    target: GradedSpace
    shift: int
    columns: Mapping[Label, Mapping[Label, object]]
    field: Field = QQ

    def __post_init__(self):
        cols = {}
        for c, col in self.columns.items():
            if c not in self.source:
                raise ValueError(f"column label {c!r} not in source")
            dc = self.source.degree_of(c)
            clean = {}
            for r, x in col.items():
                x = self.field(x)
                if not x:
                    continue
                if r not in self.target:
                    raise ValueError(f"row label {r!r} not in target")
                if self.target.degree_of(r) != dc + self.shift:
                    raise DegreeMismatch(
                        f"entry {r!r}<-{c!r} breaks shift {self.shift}")
                clean[r] = x
            if clean:
                cols[c] = clean
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_function(cls, source, target, shift, fn, field=QQ, strict=True):
        """Build from ``fn(label) -> vector``; with ``strict=False`` terms
        outside the target are dropped (used for quotient truncations)."""
        cols = {}
        for lab in source.labels():
            v = fn(lab)
            if not strict:
                v = {k: x for k, x in v.items() if k in target}
            cols[lab] = v
        return cls(source, target, shift, cols, field)

    @classmethod
    def zero(cls, source, target, shift, field=QQ):
        return cls(source, target, shift, {}, field)

    @classmethod
    def identity(cls, space, field=QQ):
        return cls(space, space, 0, {lab: {lab: 1} for lab in space.labels()}, field)

    def entries(self):
        for c, col in self.columns.items():
            for r, x in col.items():
                yield r, c, x

    def is_zero(self) -> bool:
        return not self.columns

    def apply(self, v: Mapping) -> dict:
        out: dict = {}
        for c, x in v.items():
            col = self.columns.get(c)
            if col:
                vadd(out, col, self.field, x)
        return out

    def compose(self, other: "SparseMap") -> "SparseMap":
        """self ∘ other."""
        self._check_field(other)
        cols = {c: self.apply(col) for c, col in other.columns.items()}
        return SparseMap(other.source, self.target, self.shift + other.shift,
                         cols, self.field)

    def __add__(self, other: "SparseMap") -> "SparseMap":
        self._check_field(other)
        if other.shift != self.shift:
            raise DegreeMismatch("cannot add maps of different shift")
        cols = {c: dict(col) for c, col in self.columns.items()}
        for c, col in other.columns.items():
            vadd(cols.setdefault(c, {}), col, self.field)
        return SparseMap(self.source, self.target, self.shift, cols, self.field)

    def scaled(self, s) -> "SparseMap":
        cols = {c: vscale(col, s, self.field) for c, col in self.columns.items()}
        return SparseMap(self.source, self.target, self.shift, cols, self.field)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def block(self, d: int) -> list[dict]:
        """Columns for source degree d as dicts {row_position: value}."""
        out = []
        for lab in self.source.basis(d):
            col = self.columns.get(lab, {})
            out.append({self.target.position(r): x for r, x in col.items()})
        return out

    def transpose(self) -> "SparseMap":
        """Dual map between the same label sets, degrees negated."""
        src = GradedSpace({-d: v for d, v in self.target.degrees.items()})
        tgt = GradedSpace({-d: v for d, v in self.source.degrees.items()})
        cols: dict = {}
        for r, c, x in self.entries():
            cols.setdefault(r, {})[c] = x
        return SparseMap(src, tgt, self.shift, cols, self.field)

    def _check_field(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")


# --- elimination ---------------------------------------------------------------


class Reducer:
    """Incremental echelon form with provenance tracking.

    Each stored pivot vector carries a ``tag`` vector saying which inserted
    inputs it is a combination of.  Pivots are chosen as the smallest key.
    """

    def __init__(self, field: Field):
        self.field = field
        self.pivots: dict = {}  # key -> (vector, tag)

    def reduce(self, v: Mapping, tag: Mapping | None = None):
        f = self.field
        v = dict(v)
        tag = dict(tag or {})
        while v:
            p = min(v)
            if p not in self.pivots:
                break
            pv, ptag = self.pivots[p]
            c = f(v[p] * f.inv(pv[p]))
            vadd(v, pv, f, -c)
            vadd(tag, ptag, f, -c)
        return v, tag

    def insert(self, v: Mapping, tag: Mapping | None = None) -> bool:
        """Add v; returns True if it was independent of what is stored."""
        r, t = self.reduce(v, tag)
        if not r:
            return False
        self.pivots[min(r)] = (r, t)
        return True

    def rank(self) -> int:
        return len(self.pivots)


def rank_of_columns(cols: Iterable[Mapping], field: Field) -> int:
    red = Reducer(field)
    for col in cols:
        red.insert(col)
    return red.rank()


def rank(m: SparseMap) -> int:
    return sum(rank_of_columns(m.block(d), m.field) for d in m.source.degrees)


def kernel_of_columns(cols: list[Mapping], field: Field) -> list[dict]:
    """Basis of {x : Σ x_i cols[i] = 0} as dicts over column indices."""
    red = Reducer(field)
    basis = []
    for i, col in enumerate(cols):
        r, t = red.reduce(col, {i: 1})
        if r:
            red.pivots[min(r)] = (r, t)
        else:
            basis.append(t)
    return basis


def solve(m: SparseMap, y: Mapping) -> dict | None:
    """Some x with m(x) = y, or None when y is not in the image."""
    y = vclean(y, m.field)
    if not y:
        return {}
    degs = {m.target.degree_of(k) for k in y}
    if len(degs) != 1:
        raise DegreeMismatch("right-hand side is not degree-homogeneous")
    (dt,) = degs
    d = dt - m.shift
    labels = m.source.basis(d)
    red = Reducer(m.field)
    for i, col in enumerate(m.block(d)):
        red.insert(col, {i: 1})
    tpos = {m.target.position(k): x for k, x in y.items()}
    r, t = red.reduce(tpos)
    if r:
        return None
    x = {labels[i]: m.field(-c) for i, c in t.items() if m.field(c)}
    assert m.apply(x) == y
    return x


# --- complexes -----------------------------------------------------------------


@dataclass(frozen=True)
class Homology:
    """Betti numbers per degree plus the degrees whose value is not trustworthy."""

    dims: Mapping[int, int]
    unreliable: frozenset = frozenset()

    def __getitem__(self, d):
        return self.dims.get(d, 0)

    def is_reliable(self, d) -> bool:
        """False for flagged degrees and for degrees that were never computed."""
        return d in self.dims and d not in self.unreliable

    def reliable(self) -> dict[int, int]:
        return {d: v for d, v in self.dims.items() if d not in self.unreliable}

    def nonzero(self) -> dict[int, int]:
        return {d: v for d, v in self.dims.items() if v}


@dataclass(frozen=True)
class BoundedComplex:
    """Cochain complex (differential of degree +1) living in a degree window.

    ``boundary_flags = (low_cut, high_cut)`` says whether the complex was cut at
    the window edges; a cut edge has meaningless homology.  ``unreliable``
    lists further degrees spoiled by truncations made upstream.
    """

    spaces: GradedSpace
    differential: SparseMap
    window: tuple[int, int] | None = None
    boundary_flags: tuple[bool, bool] = (False, False)
    unreliable: frozenset = frozenset()

    def __post_init__(self):
        if self.differential.shift != 1:
            raise DegreeMismatch("differential must have degree +1")
        if self.window is None:
            ds = list(self.spaces.degrees) or [0]
            object.__setattr__(self, "window", (min(ds), max(ds)))

    @property
    def field(self):
        return self.differential.field

    def edge_degrees(self) -> set[int]:
        lo, hi = self.window
        out = set()
        if self.boundary_flags[0]:
            out.add(lo)
        if self.boundary_flags[1]:
            out.add(hi)
        return out

    def check_d_squared(self) -> None:
        dd = self.differential.compose(self.differential)
        if not dd.is_zero():
            bad = sorted({self.spaces.degree_of(c) for c in dd.columns})
            raise ComplexError(f"d∘d ≠ 0 starting in degrees {bad}")

    def restrict(self, lo: int, hi: int) -> "BoundedComplex":
        sp = self.spaces.restrict(lo, hi)
        cols = {c: {r: x for r, x in col.items() if r in sp}
                for c, col in self.differential.columns.items() if c in sp}
        d = SparseMap(sp, sp, 1, cols, self.field)
        low_cut = self.boundary_flags[0] or any(k < lo for k in self.spaces.degrees)
        high_cut = self.boundary_flags[1] or any(k > hi for k in self.spaces.degrees)
        return BoundedComplex(sp, d, (lo, hi), (low_cut, high_cut), self.unreliable)


def complex_from_map(d: SparseMap, window=None, unreliable=()) -> BoundedComplex:
    c = BoundedComplex(d.source, d, None, (False, False), frozenset(unreliable))
    if window is not None:
        c = c.restrict(*window)
    return c


def homology(c: BoundedComplex, check: bool = True) -> Homology:
    if check:
        c.check_d_squared()
    d = c.differential
    lo, hi = c.window
    ranks = {k: rank_of_columns(d.block(k), d.field) for k in range(lo - 1, hi + 1)}
    dims = {}
    for k in range(lo, hi + 1):
        dims[k] = c.spaces.dim(k) - ranks[k] - ranks[k - 1]
    bad = frozenset(c.edge_degrees() | set(c.unreliable))
    return Homology(dims, frozenset(k for k in bad if lo <= k <= hi))


class HomologyBasis:
    """Chosen cycle representatives for H^k and coordinates of cycles in them."""

    def __init__(self, c: BoundedComplex, k: int):
        d = c.differential
        f = d.field
        self.field = f
        self.degree = k
        self.labels = c.spaces.basis(k)
        pos = {lab: i for i, lab in enumerate(self.labels)}
        self._pos = pos
        self._red = Reducer(f)
        # boundaries first, untagged
        for col in d.block(k - 1):
            self._red.insert(col)
        kernel = kernel_of_columns(d.block(k), f)
        self.reps: list[dict] = []
        for z in kernel:
            idx = len(self.reps)
            if self._red.insert(z, {idx: 1}):
                self.reps.append({self.labels[i]: x for i, x in z.items()})

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, z: Mapping) -> list:
        """Coordinates of the class of cycle z; raises if z is not a cycle."""
        v = {self._pos[k]: x for k, x in z.items()}
        r, t = self._red.reduce(v)
        if r:
            raise ValueError("vector is not a cycle of this complex")
        out = [0] * self.dim
        for i, x in t.items():
            out[i] = self.field(-x)
        return out

    def is_boundary(self, z: Mapping) -> bool:
        return not any(self.coordinates(z))


def matrix_rank(rows: list[list], field: Field) -> int:
    cols = []
    n = len(rows[0]) if rows else 0
    for j in range(n):
        cols.append({i: r[j] for i, r in enumerate(rows) if field(r[j])})
    return rank_of_columns(cols, field)


def induced_matrix(f: SparseMap, src: HomologyBasis, tgt: HomologyBasis) -> list[list]:
    """Matrix (rows = target classes) of the map induced on homology."""
    cols = [tgt.coordinates(f.apply(rep)) for rep in src.reps]
    return [[cols[j][i] for j in range(len(cols))] for i in range(tgt.dim)]


def matmul(a: list[list], b: list[list], field: Field, inner: int) -> list[list]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    return [[field(sum(a[i][k] * b[k][j] for k in range(inner)))
             for j in range(len(b[0]))] for i in range(len(a))]


# --- long exact sequences of short exact sequences -------------------------------


@dataclass
class LESNode:
    name: str          # "A", "B" or "C"
    degree: int
    dim: int
    rank_in: int
    rank_out: int
    composite_zero: bool
    reliable: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.rank_in + self.rank_out == self.dim


@dataclass
class LESReport:
    """Homology long exact sequence of 0 -> A -> B -> C -> 0 (shift s on C).

    ``matrices[(name, k)]`` is the induced matrix leaving node (name, k):
    "i" : H^k(A) -> H^k(B), "p" : H^k(B) -> H^{k+s}(C), "delta" : H^k(C) -> H^{k-s+1}(A).
    """

    nodes: list
    matrices: dict
    dims: dict

    def exact(self, reliable_only: bool = True) -> bool:
        return all(n.exact for n in self.nodes if n.reliable or not reliable_only)

    def failures(self) -> list:
        return [n for n in self.nodes if n.reliable and not n.exact]


def snake_connecting(i_map: SparseMap, p_map: SparseMap, B: BoundedComplex,
                     z: Mapping) -> dict:
    """Connecting homomorphism at chain level: lift z through p, apply d_B,
    pull back through i.  Raises ValueError when z is not liftable."""
    lift = solve(p_map, z)
    if lift is None:
        raise ValueError("p is not surjective onto this cycle")
    dz = B.differential.apply(lift)
    back = solve(i_map, dz)
    if back is None:
        raise ValueError("d(lift) does not come from A: z is not a cycle")
    return back


def long_exact_sequence(A: BoundedComplex, B: BoundedComplex, C: BoundedComplex,
                        i_map: SparseMap, p_map: SparseMap, degrees: Iterable[int],
                        connecting=None, reliable=lambda name, k: True) -> LESReport:
    """Ranks and exactness of H(A) -> H(B) -> H(C) -> H(A)[1] at each degree.

    ``connecting(z)`` computes the chain-level boundary of a C-cycle; the
    default is the snake-lemma chase.  ``p_map`` has shift s (so C sits in
    degrees shifted by s relative to B).
    """
    s = p_map.shift
    if connecting is None:
        connecting = lambda z: snake_connecting(i_map, p_map, B, z)  # noqa: E731
    degrees = sorted(set(degrees))
    bases = {}

    def basis(name, k):
        if (name, k) not in bases:
            cx = {"A": A, "B": B, "C": C}[name]
            bases[(name, k)] = HomologyBasis(cx, k)
        return bases[(name, k)]

    f = B.field
    matrices = {}
    for k in degrees:
        matrices[("i", k)] = induced_matrix(i_map, basis("A", k), basis("B", k))
        matrices[("p", k)] = induced_matrix(p_map, basis("B", k), basis("C", k + s))
        src, tgt = basis("C", k + s), basis("A", k + 1)
        cols = [tgt.coordinates(connecting(rep)) for rep in src.reps]
        matrices[("delta", k + s)] = [[cols[j][r] for j in range(len(cols))]
                                      for r in range(tgt.dim)]

    def rk(m):
        return matrix_rank(m, f) if m and m[0] else 0

    def zero(m):
        return all(not f(x) for row in m for x in row)

    nodes = []
    for k in degrees:
        # node A^k: in = delta from C^{k-1+s}, out = i_k
        if ("delta", k - 1 + s) in matrices:
            m_in = matrices[("delta", k - 1 + s)]
            comp = matmul(matrices[("i", k)], m_in, f, basis("A", k).dim)
            nodes.append(LESNode("A", k, basis("A", k).dim, rk(m_in),
                                 rk(matrices[("i", k)]), zero(comp), reliable("A", k)))
        comp = matmul(matrices[("p", k)], matrices[("i", k)], f, basis("B", k).dim)
        nodes.append(LESNode("B", k, basis("B", k).dim, rk(matrices[("i", k)]),
                             rk(matrices[("p", k)]), zero(comp), reliable("B", k)))
        comp = matmul(matrices[("delta", k + s)], matrices[("p", k)], f,
                      basis("C", k + s).dim)
        nodes.append(LESNode("C", k + s, basis("C", k + s).dim, rk(matrices[("p", k)]),
                             rk(matrices[("delta", k + s)]), zero(comp),
                             reliable("C", k + s)))
    dims = {key: b.dim for key, b in bases.items()}
    return LESReport(nodes, matrices, dims)
