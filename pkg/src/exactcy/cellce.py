"""Cellular Chekanov-Eliashberg generators, the b-differential and the
cancellation of positive-degree generators, all over Z/2.

Over each cell of a front's polygonal decomposition the sheets carry heights;
S_m ≺ S_n when S_m is strictly higher.  Every pair S_m ≺ S_n gives a generator
a (0-cells), b (1-cells) or c (2-cells) of degree μ(S_n) - μ(S_m) + 1, + 0 and
- 1 respectively.  For a 1-cell β from α to γ,

    d b^{m,n} = a_α^{m,n} + a_γ^{m,n} + Σ_k a_α^{m,k} b^{k,n} + Σ_k b^{m,k} a_γ^{k,n}

with k running over the sheets of β strictly between m and n, and a term
dropped when its pair is not ordered over the relevant cell.  Only these
b-differentials are modelled, so cancellation rewrites a presentation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple


class FrontError(ValueError):
    pass


class CancellationCycle(RuntimeError):
    def __init__(self, msg, log):
        super().__init__(msg)
        self.log = log


@dataclass(frozen=True)
class Cell:
    name: str
    dim: int
    heights: Mapping[str, Fraction]            # sheet -> height over the cell
    ends: tuple = ()                           # (α, γ) for 1-cells

    def ordered_pairs(self):
        """Pairs (m, n) with m strictly above n, top pair first."""
        sh = sorted(self.heights, key=lambda s: (-self.heights[s], s))
        out = []
        for i, m in enumerate(sh):
            for n in sh[i + 1:]:
                if self.heights[m] > self.heights[n]:
                    out.append((m, n))
        return out

    def precedes(self, m, n) -> bool:
        h = self.heights
        return m in h and n in h and h[m] > h[n]


@dataclass(frozen=True)
class FrontComplex:
    potential: Mapping[str, int]               # Maslov potential per sheet
    cells: tuple
    matchings: Mapping[tuple, Mapping[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        names = [c.name for c in self.cells]
        if len(set(names)) != len(names):
            raise FrontError("duplicate cell names")
        by = {c.name: c for c in self.cells}
        object.__setattr__(self, "_by", by)
        for c in self.cells:
            if c.dim not in (0, 1, 2):
                raise FrontError(f"cell {c.name}: dimension must be 0, 1 or 2")
            for s in c.heights:
                if s not in self.potential:
                    raise FrontError(f"cell {c.name}: sheet {s} has no Maslov potential")
            if c.dim == 1:
                if len(c.ends) != 2:
                    raise FrontError(f"1-cell {c.name} needs two endpoints")
                for e in c.ends:
                    if e not in by or by[e].dim != 0:
                        raise FrontError(f"1-cell {c.name}: endpoint {e} is not a 0-cell")
                    self._check_matching(c, by[e])
            elif c.ends:
                raise FrontError(f"cell {c.name}: only 1-cells have endpoints")

    def _check_matching(self, beta: Cell, end: Cell):
        m = self.match(beta.name, end.name)
        img = [m[s] for s in beta.heights]
        if len(set(img)) != len(img):
            raise FrontError(f"matching {beta.name}->{end.name} is not injective")
        for s in img:
            if s not in end.heights:
                raise FrontError(f"sheet {s} of {beta.name} is missing over {end.name}")
        for x in beta.heights:
            for y in beta.heights:
                if end.precedes(m[x], m[y]) and beta.heights[y] > beta.heights[x]:
                    raise FrontError(f"matching {beta.name}->{end.name} reverses the order")

    def cell(self, name: str) -> Cell:
        return self._by[name]

    def match(self, beta: str, end: str) -> dict:
        given = self.matchings.get((beta, end), {})
        return {s: given.get(s, s) for s in self.cell(beta).heights}


class Gen(NamedTuple):
    kind: str       # "a", "b" or "c"
    cell: str
    m: str
    n: str

    def __str__(self):
        return f"{self.kind}[{self.cell};{self.m},{self.n}]"


# A Z/2 polynomial is a frozenset of monomials; a monomial is a tuple of Gens.
Poly = frozenset


def padd(p: Poly, q: Poly) -> Poly:
    return p ^ q


def pmul(p: Poly, q: Poly) -> Poly:
    out: set = set()
    for u in p:
        for v in q:
            out ^= {u + v}
    return frozenset(out)


def pformat(p: Poly) -> str:
    if not p:
        return "0"
    return " + ".join("".join(str(g) for g in mono) or "1" for mono in sorted(p, key=_mono_key))


def _mono_key(mono):
    return (len(mono), tuple(tuple(g) for g in mono))


@dataclass
class CEGenerators:
    front: FrontComplex
    degree: dict                   # Gen -> degree
    diff: dict                     # b-Gen -> Poly

    def generators(self) -> list:
        return sorted(self.degree, key=tuple)

    def copy(self) -> "CEGenerators":
        return CEGenerators(self.front, dict(self.degree), dict(self.diff))

    def positive(self) -> list:
        return [g for g in self.generators() if self.degree[g] > 0]

    def max_degree(self):
        return max(self.degree.values()) if self.degree else None


def generator_degree(f: FrontComplex, g: Gen) -> int:
    shift = {"a": 1, "b": 0, "c": -1}[g.kind]
    return f.potential[g.n] - f.potential[g.m] + shift


def grade_generators(f: FrontComplex) -> CEGenerators:
    kinds = {0: "a", 1: "b", 2: "c"}
    degree = {}
    for c in f.cells:
        for m, n in c.ordered_pairs():
            g = Gen(kinds[c.dim], c.name, m, n)
            degree[g] = generator_degree(f, g)
    gens = CEGenerators(f, degree, {})
    for g in list(degree):
        if g.kind == "b":
            gens.diff[g] = b_differential(gens, g)
    return gens


def _a(f: FrontComplex, beta: Cell, end: str, m: str, n: str):
    """The a-generator over ``end`` for the β-sheets m, n, or None."""
    mt = f.match(beta.name, end)
    if f.cell(end).precedes(mt[m], mt[n]):
        return Gen("a", end, mt[m], mt[n])
    return None


def b_differential(g: CEGenerators, b: Gen) -> Poly:
    """d_C b over Z/2, from the front data alone."""
    f = g.front
    beta = f.cell(b.cell)
    if b.kind != "b" or not beta.precedes(b.m, b.n):
        raise FrontError(f"{b} is not a b-generator")
    alpha, gamma = beta.ends
    m, n = b.m, b.n
    out: set = set()
    for end in (alpha, gamma):
        a = _a(f, beta, end, m, n)
        if a is not None:
            out ^= {(a,)}
    between = [k for k in beta.heights if beta.precedes(m, k) and beta.precedes(k, n)]
    for k in between:
        a = _a(f, beta, alpha, m, k)
        if a is not None:
            out ^= {(a, Gen("b", beta.name, k, n))}
        a = _a(f, beta, gamma, k, n)
        if a is not None:
            out ^= {(Gen("b", beta.name, m, k), a)}
    return frozenset(out)


def term_degree(g: CEGenerators, mono) -> int:
    return sum(g.degree[x] for x in mono)


def degree_spectrum(g: CEGenerators) -> dict:
    return dict(sorted(Counter(g.degree.values()).items()))


# --- cancellation -------------------------------------------------------------------


class Elimination(NamedTuple):
    b: Gen
    a: Gen
    replacement: Poly


def substitute(p: Poly, a: Gen, rep: Poly) -> Poly:
    out: Poly = frozenset()
    for mono in p:
        if a not in mono:
            out = padd(out, frozenset({mono}))
            continue
        acc: Poly = frozenset({()})
        for x in mono:
            acc = pmul(acc, rep if x == a else frozenset({(x,)}))
        out = padd(out, acc)
    return out


def kill(p: Poly, b: Gen) -> Poly:
    return frozenset(m for m in p if b not in m)


def eligible(g: CEGenerators, b: Gen):
    """The positive a that b cancels, or None: d b must be a + (terms free of a)."""
    db = g.diff.get(b)
    if not db or b not in g.degree:
        return None
    linear = [mono[0] for mono in db if len(mono) == 1 and mono[0].kind == "a"]
    if len(linear) != 1:
        return None  # the partner endpoint must contribute nothing linear
    a = linear[0]
    if g.degree.get(a, 0) <= 0:
        return None
    if any(a in mono for mono in db if mono != (a,)):
        return None
    return a


@dataclass
class CancellationResult:
    before: CEGenerators
    after: CEGenerators
    log: list
    stuck: list                   # positive generators nothing could cancel

    @property
    def max_degree(self):
        return self.after.max_degree()


def eliminate(g: CEGenerators, b: Gen, a: Gen) -> Elimination:
    """Quotient by <d b, b>: drop b, replace a by d b - a everywhere.  In place."""
    rep = kill(padd(g.diff[b], frozenset({(a,)})), b)
    for x in (a, b):
        del g.degree[x]
    g.diff.pop(b)
    g.diff.pop(a, None)
    for key, p in list(g.diff.items()):
        g.diff[key] = substitute(kill(p, b), a, rep)
    return Elimination(b, a, rep)


def cancel_positive(g: CEGenerators, order: list | None = None) -> CancellationResult:
    """Eliminate positive a-generators against 1-cell generators until none is
    eligible.  The smallest eligible b (by cell, then sheets) goes first; with
    ``order`` the given (b, a) pairs are replayed instead."""
    work = g.copy()
    log: list = []
    gone: set = set()

    def step(b, a):
        if b in gone or a in gone:
            raise CancellationCycle(f"elimination revisits {b if b in gone else a}", log)
        if eligible(work, b) != a:
            raise CancellationCycle(f"{b} cannot cancel {a} at this point", log)
        log.append(eliminate(work, b, a))
        gone.update((a, b))

    if order is not None:
        for b, a in order:
            step(b, a)
    else:
        while True:
            choice = None
            for b in sorted(work.diff, key=tuple):
                a = eligible(work, b)
                if a is not None:
                    choice = (b, a)
                    break
            if choice is None:
                break
            step(*choice)
    return CancellationResult(g, work, log, work.positive())


def replay(g: CEGenerators, log: list) -> CancellationResult:
    return cancel_positive(g, [(e.b, e.a) for e in log])


def same_presentation(x: CEGenerators, y: CEGenerators) -> bool:
    return x.degree == y.degree and x.diff == y.diff


# --- the fixture's default geometry ----------------------------------------------------


def lambda3333_front() -> FrontComplex:
    """The shipped Λ_{3,3,3,3} decomposition (see data/lambda3333.front)."""
    from importlib.resources import files
    from .formats import parse_front
    return parse_front(files("exactcy").joinpath("data/lambda3333.front").read_text())
