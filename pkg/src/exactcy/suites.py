"""Seeded property suites shared by ``exactcy selftest`` and the test suite.

Every suite returns a SuiteResult whose ``summary()`` is a plain dict, so two
runs with the same seed can be compared byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import cellce, ginzburg, hochcyc, koszul, s1cx
from .exactlin import QQ, homology, kernel_of_columns
from .generators import (
    ainf_example, dg_example, random_algebra, test_algebras,
)


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str):
        self.failures.append(msg)

    def summary(self) -> dict:
        return {"name": self.name, "ok": self.ok, "trials": self.trials,
                "failures": list(self.failures), "stats": dict(self.stats)}


def s1_axioms(seed: int, n_strict: int = 200, n_alg: int = 20, n_mut: int = 50,
              L: int = 5) -> SuiteResult:
    """Axioms on random strict complexes and on CH^nu of random algebras, and
    detection of single sign mutations."""
    res = SuiteResult("s1-axioms")
    rng = random.Random(seed)
    for t in range(n_strict):
        p = s1cx.random_strict_complex(rng, QQ)
        res.trials += 1
        if not s1cx.verify_axioms(p).ok:
            res.fail(f"strict complex #{t} fails {s1cx.verify_axioms(p).failed()}")
    for t in range(n_alg):
        A = random_algebra(rng, max_dim=4)
        _, p = hochcyc.build_chnu_complex(A, L)
        res.trials += 1
        rep = s1cx.verify_axioms(p)
        if not rep.ok:
            res.fail(f"CH^nu of random algebra #{t} fails {rep.failed()}")
    detected = 0
    t = 0
    while t < n_mut:
        p = (s1cx.random_strict_complex(rng, QQ) if t % 2 == 0
             else s1cx.random_s1_complex(rng, QQ))
        out = s1cx.mutate_sign(p, rng)
        if out is None:
            continue
        t += 1
        res.trials += 1
        if not s1cx.verify_axioms(out[0]).ok:
            detected += 1
        else:
            res.fail(f"mutation {out[1]} went undetected")
    res.stats["mutations_detected"] = f"{detected}/{n_mut}"
    return res


def hochschild_identities(algebras=None, L: int = 5) -> SuiteResult:
    """b_nu^2 = 0, B_nu^2 = 0, b_nu B_nu + B_nu b_nu = 0 and B_nu = s_nu N."""
    res = SuiteResult("hochschild-identities")
    for A in algebras if algebras is not None else test_algebras():
        space, bmap, Bmap = hochcyc.chnu_maps(A, L)
        checks = {
            "b_nu^2": bmap.compose(bmap),
            "B_nu^2": Bmap.compose(Bmap),
            "b_nu B_nu + B_nu b_nu": bmap.compose(Bmap) + Bmap.compose(bmap),
        }
        for name, m in checks.items():
            if not m.is_zero():
                res.fail(f"{A.name}: {name} != 0")
        for key in space.labels():
            elem = {key: 1}
            lhs = hochcyc.B_nu(A, elem)
            rhs = hochcyc.s_nu(A, hochcyc.N_elem(A, elem))
            if lhs != rhs:
                res.fail(f"{A.name}: B_nu != s_nu N on {key}")
                break
        res.trials += 1
        res.stats[A.name] = len(list(space.labels()))
    return res


def quasi_iso(algebras=None, L: int = 5, degrees=(0, -1, -2, -3)) -> SuiteResult:
    """Reduced CH and CH^nu have equal Betti numbers in the given degrees."""
    res = SuiteResult("ch-vs-chnu")
    for A in algebras if algebras is not None else test_algebras():
        h1 = hochcyc.hh_table(A, L)
        h2 = hochcyc.hh_nu_table(A, L)
        res.trials += 1
        for k in degrees:
            if not (h1.is_reliable(k) and h2.is_reliable(k)):
                res.fail(f"{A.name}: degree {k} not certified at L={L}")
            elif h1[k] != h2[k]:
                res.fail(f"{A.name}: degree {k}: CH {h1[k]} vs CH^nu {h2[k]}")
        res.stats[A.name] = {str(k): h1[k] for k in degrees}
    return res


def connes_gysin(algebras=None, L: int = 5, U: int = 4, window=(-6, 0)) -> SuiteResult:
    """Connes' sequence is exact at reliable nodes and matches the Gysin
    sequence of the exported S^1-complex map for map."""
    res = SuiteResult("connes-gysin")
    for A in algebras if algebras is not None else test_algebras():
        r1 = hochcyc.connes_les(A, L, window, U)
        _, p = hochcyc.build_chnu_complex(A, L)
        rel = hochcyc.connes_reliability(A, L, U)
        r2 = s1cx.gysin_check(p, U, window, rel)
        res.trials += 1
        if r1.failures():
            res.fail(f"{A.name}: Connes sequence not exact at "
                     f"{[(n.name, n.degree) for n in r1.failures()]}")
        if r2.failures():
            res.fail(f"{A.name}: Gysin sequence not exact")
        diffs = hochcyc.compare_les(r1, r2)
        if diffs:
            res.fail(f"{A.name}: pipelines differ: {diffs[0]}")
        res.stats[A.name] = sum(1 for n in r1.nodes if n.reliable)
    return res


def random_cocycle(cx, rng: random.Random):
    """A random nonzero cocycle of ``cx`` (in a random degree), or None."""
    degs = [k for k in cx.spaces.degrees]
    rng.shuffle(degs)
    d = cx.differential
    for k in degs:
        ker = kernel_of_columns(d.block(k), d.field)
        if not ker:
            continue
        labels = cx.spaces.basis(k)
        z: dict = {}
        for v in ker:
            c = d.field(rng.choice([1, -1, 2, 3]))
            for i, x in v.items():
                z[labels[i]] = d.field(z.get(labels[i], 0) + c * x)
        z = {a: b for a, b in z.items() if b}
        if z:
            return z
    return None


def marking_vs_snake(seed: int, n: int = 50) -> SuiteResult:
    """Σ δ_{k+1} β_k equals the snake-lemma connecting map on the chain level."""
    res = SuiteResult("marking-vs-snake")
    rng = random.Random(seed)
    while res.trials < n:
        p = s1cx.random_strict_complex(rng, QQ)
        U = rng.randint(2, 4)
        P, B, C, i_map, s_map = s1cx.gysin_maps(p, U)
        z = random_cocycle(C, rng)
        if z is None:
            continue
        res.trials += 1
        from .exactlin import snake_connecting
        if s1cx.marking_chain(z, p) != snake_connecting(i_map, s_map, B, z):
            res.fail(f"trial {res.trials}: marking and snake differ")
    return res


def ginzburg_suite(seed: int, n: int = 100, dim: int = 3, W: int = 6) -> SuiteResult:
    """The Q_{1,0,0} differential and d^2 = 0 on random quivers with potential."""
    res = SuiteResult("ginzburg")
    g = ginzburg.q100(dim, 4)
    want = {"x": "0", "y": "0", "t": "xy - yx"}
    got = {k: g.format_differential(k) for k in want}
    res.trials += 1
    if got != want:
        res.fail(f"Q_100 differential {got}")
    rng = random.Random(seed)
    nonzero = 0
    for t in range(n):
        Q, w = ginzburg.random_quiver_with_potential(rng, n=dim)
        res.trials += 1
        nonzero += not w.is_zero()
        try:
            ginzburg.build_ginzburg(Q, w, dim, W)
        except ValueError as e:
            res.fail(f"random (Q, w) #{t}: {e}")
    res.stats["nonzero_potentials"] = nonzero
    return res


def bar_cobar(algebras=None, B: int = 6, P: int = 5) -> SuiteResult:
    res = SuiteResult("bar-cobar")
    for A in algebras if algebras is not None else test_algebras():
        rep = koszul.bar_cobar_check(A, B, P)
        res.trials += 1
        if not rep.agree:
            res.fail(f"{A.name}: {rep.mismatches}")
        res.stats[A.name] = {f"{w},{k}": v for (w, k), v in sorted(rep.cobar.items())}
    return res


def bar_cobar_random(seed: int, n: int = 20, B: int = 4, P: int = 4) -> SuiteResult:
    res = SuiteResult("bar-cobar-random")
    rng = random.Random(seed)
    while res.trials < n:
        A = random_algebra(rng)
        if not koszul.AugmentedAlgebra.of(A).weighted:
            continue
        res.trials += 1
        rep = koszul.bar_cobar_check(A, B, P)
        if not rep.agree:
            res.fail(f"random algebra #{res.trials}: {rep.mismatches}")
    return res


def cellular(front=None) -> SuiteResult:
    res = SuiteResult("cellular-ce")
    f = front or cellce.lambda3333_front()
    g = cellce.grade_generators(f)
    before = cellce.degree_spectrum(g)
    r = cellce.cancel_positive(g)
    res.trials = 1
    if before.get(1, 0) < 1:
        res.fail("no degree-1 generator before cancellation")
    if r.max_degree is None or r.max_degree > 0:
        res.fail(f"max surviving degree {r.max_degree}")
    if not cellce.same_presentation(cellce.replay(g, r.log).after, r.after):
        res.fail("replay differs")
    res.stats = {"before": {str(k): v for k, v in before.items()},
                 "after": {str(k): v for k, v in cellce.degree_spectrum(r.after).items()},
                 "eliminations": len(r.log)}
    return res


def extra_algebras():
    return [ainf_example(), dg_example()]


def all_suites(seed: int, quick: bool = False) -> list[SuiteResult]:
    scale = 4 if quick else 1
    return [
        s1_axioms(seed, 200 // scale, 20 // scale, 50 // scale),
        hochschild_identities(test_algebras() + extra_algebras()),
        quasi_iso(),
        connes_gysin(),
        marking_vs_snake(seed + 1, 50 // scale),
        ginzburg_suite(seed + 2, 100 // scale),
        bar_cobar(),
        bar_cobar_random(seed + 3, 20 // scale),
        cellular(),
    ]
