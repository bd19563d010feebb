"""Command line front end.

Exit codes: 0 success, 1 a computed verdict failed, 2 bad input.
``--format structured`` prints JSON with sorted keys, so equal inputs give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from importlib.resources import files
from pathlib import Path

from . import __version__
from .exactlin import ComplexError, field_from_tag

BUILTIN = {
    "k": "k.alg", "dual": "qx2.alg", "qx2": "qx2.alg", "kxk": "kxk.alg", "ut2": "ut2.alg",
    "ainf": "ainf.alg", "q100": "q100.quiver", "lambda3333": "lambda3333.front",
}


class InputError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    action: str | None = None
    inputs: list = field(default_factory=list)
    field: str = "q"
    weight: int = 6
    length: int = 5
    u_order: int = 4
    bar_length: int = 6
    cobar_depth: int = 5
    arity: int | None = None
    window: tuple | None = None
    seed: int = 0
    format: str = "table"
    mode: str = "all"
    n: int | None = None
    eta: str | None = None
    quick: bool = False

    def __post_init__(self):
        for name in ("weight", "length", "u_order", "bar_length", "cobar_depth", "arity"):
            if getattr(self, name) is not None and getattr(self, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be at least 1")
        if self.window is not None and self.window[0] > self.window[1]:
            raise InputError("empty window")


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be lo:hi, got {text!r}") from None


def read_input(path: str) -> tuple[str, str]:
    """(text, display name); '@name' reads a shipped fixture."""
    if path.startswith("@"):
        name = BUILTIN.get(path[1:])
        if name is None:
            raise InputError(f"unknown fixture {path}; known: {', '.join(sorted(BUILTIN))}")
        return files("exactcy").joinpath("data", name).read_text(encoding="utf-8"), path
    p = Path(path)
    if not p.exists():
        raise InputError(f"{path}: no such file")
    try:
        return p.read_text(encoding="utf-8"), path
    except UnicodeDecodeError:
        raise InputError(f"{path}: not UTF-8") from None


def parse_input(path: str, kind: str, fld=None):
    """Parse ``path`` as an algebra, quiver or front."""
    from .formats import FormatError, parse_algebra, parse_front, parse_quiver
    text, name = read_input(path)
    try:
        if kind == "algebra":
            return parse_algebra(text, fld or field_from_tag("q"))
        if kind == "quiver":
            return parse_quiver(text, fld or field_from_tag("q"))
        if kind == "front":
            return parse_front(text)
    except FormatError as e:
        raise InputError(f"{name}: {e}") from None
    raise InputError(f"unknown input kind {kind}")


# --- reports ---------------------------------------------------------------------------


def _homology_dict(h) -> dict:
    return {"dims": {str(k): v for k, v in sorted(h.dims.items())},
            "unreliable": sorted(h.unreliable)}


def _homology_lines(title: str, h) -> list[str]:
    out = [title, "  degree  dim"]
    for k in sorted(h.dims, reverse=True):
        flag = "  (unreliable)" if k in h.unreliable else ""
        out.append(f"  {k:>6}  {h.dims[k]}{flag}")
    return out


def _les_dict(rep) -> dict:
    return {"exact": rep.exact(), "nodes": [
        {"node": n.name, "degree": n.degree, "dim": n.dim, "rank_in": n.rank_in,
         "rank_out": n.rank_out, "exact": n.exact, "reliable": n.reliable}
        for n in rep.nodes]}


def _les_lines(title: str, rep) -> list[str]:
    out = [title, "  node  degree  dim  rank_in  rank_out  exact  reliable"]
    for n in rep.nodes:
        out.append(f"  {n.name:>4}  {n.degree:>6}  {n.dim:>3}  {n.rank_in:>7}  "
                   f"{n.rank_out:>8}  {'yes' if n.exact else 'NO':>5}  "
                   f"{'yes' if n.reliable else 'no':>8}")
    out.append(f"verdict: {'exact' if rep.exact() else 'NOT exact'} at every reliable node")
    return out


def _window(cfg: JobConfig, default):
    return cfg.window if cfg.window is not None else default


def _chnu_range(A, L: int) -> tuple[int, int]:
    from .hochcyc import chnu_space
    degs = list(chnu_space(A, L).degrees) or [0]
    return min(degs), max(degs)


# --- commands -----------------------------------------------------------------------


def _algebra(cfg: JobConfig):
    from dataclasses import replace
    if not cfg.inputs:
        raise InputError("an input file is required")
    A = parse_input(cfg.inputs[0], "algebra", field_from_tag(cfg.field))
    if cfg.arity is not None and A.arity != cfg.arity:
        return replace(A, arity=cfg.arity)
    return A


def cmd_hh(cfg: JobConfig):
    from . import hochcyc
    A = _algebra(cfg)
    win = cfg.window
    h = hochcyc.hh_best_table(A, cfg.length, win)
    rep = {"algebra": A.name, "length": cfg.length, "window": win and list(win),
           "hochschild": _homology_dict(h)}
    return 0, rep, _homology_lines(f"HH of {A.name or cfg.inputs[0]} (length <= {cfg.length})", h)


def cmd_hc(cfg: JobConfig):
    from . import hochcyc
    A = _algebra(cfg)
    win = cfg.window
    modes = hochcyc.MODES if cfg.mode == "all" else (cfg.mode,)
    rep = {"algebra": A.name, "length": cfg.length, "u_order": cfg.u_order,
           "window": win and list(win), "cyclic": {}}
    lines = []
    for m in modes:
        h = hochcyc.cyclic_table(A, cfg.length, win, cfg.u_order, m)
        rep["cyclic"][m] = _homology_dict(h)
        lines += _homology_lines(f"{m} cyclic homology (length <= {cfg.length}, "
                                 f"u-order {cfg.u_order})", h)
    return 0, rep, lines


def cmd_les(cfg: JobConfig):
    from . import hochcyc
    A = _algebra(cfg)
    win = _window(cfg, _chnu_range(A, cfg.length))
    r = hochcyc.connes_les(A, cfg.length, win, cfg.u_order)
    rep = {"algebra": A.name, "length": cfg.length, "u_order": cfg.u_order,
           "window": list(win), "les": _les_dict(r)}
    return (0 if r.exact() else 1), rep, _les_lines("Connes' long exact sequence", r)


def cmd_gysin(cfg: JobConfig):
    from . import hochcyc, s1cx
    A = _algebra(cfg)
    win = _window(cfg, _chnu_range(A, cfg.length))
    _, p = hochcyc.build_chnu_complex(A, cfg.length)
    rel = hochcyc.connes_reliability(A, cfg.length, cfg.u_order)
    marking = s1cx.gysin_check(p, cfg.u_order, win, rel, "marking")
    snake = s1cx.gysin_check(p, cfg.u_order, win, rel, "snake")
    diffs = hochcyc.compare_les(marking, snake)
    axioms = s1cx.verify_axioms(p)
    ok = marking.exact() and not diffs and axioms.ok
    rep = {"algebra": A.name, "axioms": {str(k): v for k, v in axioms.verdicts.items()},
           "gysin": _les_dict(marking), "marking_equals_snake": not diffs}
    lines = [f"S^1 axioms: {'pass' if axioms.ok else 'FAIL ' + str(axioms.failed())}"]
    lines += _les_lines("Gysin sequence (marking connecting map)", marking)
    lines.append(f"marking map = snake map: {'yes' if not diffs else 'NO'}")
    if rel is None:
        lines.append("note: no degree certificate; every node is reported reliable")
    return (0 if ok else 1), rep, lines


def _quiver(cfg: JobConfig):
    if not cfg.inputs:
        raise InputError("an input file is required")
    return parse_input(cfg.inputs[0], "quiver", field_from_tag(cfg.field))


def cmd_ginzburg(cfg: JobConfig):
    from . import ginzburg
    Q, w, opts = _quiver(cfg)
    n = cfg.n if cfg.n is not None else opts["n"]
    if cfg.action == "jacobi":
        try:
            J = ginzburg.jacobi_algebra(Q, w, cfg.weight, field_from_tag(cfg.field))
        except ginzburg.GradingError as e:
            raise InputError(str(e)) from None
        dims = ginzburg.weight_dimensions(J)
        rep = {"jacobi_dims": {str(k): v for k, v in dims.items()}, "weight": cfg.weight}
        lines = [f"Jacobi algebra, word length <= {cfg.weight}", "  length  dim"]
        lines += [f"  {k:>6}  {v}" for k, v in dims.items()]
        return 0, rep, lines
    try:
        g = ginzburg.build_ginzburg(Q, w, n, cfg.weight, star_names=opts["star_names"],
                                    loop_names=opts["loop_names"],
                                    field=field_from_tag(cfg.field))
    except ginzburg.GradingError as e:
        raise InputError(str(e)) from None
    except ValueError as e:
        return 1, {"d_squared": "fail", "error": str(e)}, [f"d^2 != 0: {e}"]
    if cfg.action == "check":
        table = {a.label: g.format_differential(a.label) for a in g.algebra.quiver.arrows}
        rep = {"n": n, "weight": cfg.weight, "d_squared": "pass", "differential": table}
        lines = [f"Ginzburg algebra, n = {n}, weight <= {cfg.weight}"]
        lines += [f"  d {k} = {v}" for k, v in table.items()]
        lines.append("d^2 = 0 on every generator")
        return 0, rep, lines
    win = _window(cfg, (1 - 2 * n, 0))
    table = ginzburg.ginzburg_homology(g, win)
    rep = {"n": n, "weight": cfg.weight, "window": list(win),
           "homology": {f"{w},{k}": v for (w, k), v in sorted(table.items(), key=str) if v}}
    lines = [f"Ginzburg homology by (weight, degree), n = {n}", "  weight  degree  dim"]
    for (wt, k), v in sorted(table.items(), key=lambda t: (str(t[0][0]), -t[0][1])):
        if v:
            lines.append(f"  {str(wt):>6}  {k:>6}  {v}")
    return 0, rep, lines


def _koszul_input(cfg: JobConfig):
    """An .alg file, or a .quiver file read as its Ginzburg dg algebra at weight W."""
    from . import ginzburg
    path = cfg.inputs[0] if cfg.inputs else ""
    if not (path.endswith(".quiver") or BUILTIN.get(path[1:], "").endswith(".quiver")):
        return _algebra(cfg)
    Q, w, opts = _quiver(cfg)
    try:
        return ginzburg.build_ginzburg(
            Q, w, cfg.n if cfg.n is not None else opts["n"], cfg.weight,
            star_names=opts["star_names"], loop_names=opts["loop_names"],
            field=field_from_tag(cfg.field)).algebra
    except ginzburg.GradingError as e:
        raise InputError(str(e)) from None


def cmd_koszul(cfg: JobConfig):
    from . import koszul
    A = _koszul_input(cfg)
    if cfg.action == "barcobar":
        try:
            r = koszul.bar_cobar_check(A, cfg.bar_length, cfg.cobar_depth)
        except koszul.AugmentationError as e:
            raise InputError(str(e)) from None
        rep = {"agree": r.agree, "slots": r.slots,
               "algebra": {f"{w},{k}": v for (w, k), v in sorted(r.algebra.items())},
               "cobar": {f"{w},{k}": v for (w, k), v in sorted(r.cobar.items())}}
        lines = [f"H(cobar(bar A)) vs H(A) on weights {r.slots[0]}..{r.slots[-1]}",
                 "  weight  degree  H(A)  H(cobar bar A)"]
        for key in sorted(set(r.algebra) | set(r.cobar)):
            lines.append(f"  {key[0]:>6}  {key[1]:>6}  {r.algebra.get(key, 0):>4}  "
                         f"{r.cobar.get(key, 0):>14}")
        lines.append(f"verdict: {'agree' if r.agree else 'DISAGREE'}")
        return (0 if r.agree else 1), rep, lines
    win = _window(cfg, (0, 4))
    try:
        e = koszul.ext_betti(A, win, cfg.bar_length)
    except koszul.AugmentationError as err:
        raise InputError(str(err)) from None
    rep = {"bar_length": cfg.bar_length, "certified_by_weight": e.certified,
           "ext": _homology_dict(e.degrees)}
    return 0, rep, _homology_lines(f"Ext_A(k, k), bar length <= {cfg.bar_length}", e.degrees)


def cmd_ce(cfg: JobConfig):
    from . import cellce
    if not cfg.inputs:
        raise InputError("an input file is required")
    f = parse_input(cfg.inputs[0], "front")
    g = cellce.grade_generators(f)
    spectrum0 = cellce.degree_spectrum(g)
    if cfg.action == "grade":
        rep = {"generators": len(g.degree), "spectrum": {str(k): v for k, v in spectrum0.items()},
               "positive": [str(x) for x in g.positive()]}
        lines = [f"{len(g.degree)} generators", "  degree  count"]
        lines += [f"  {k:>6}  {v}" for k, v in spectrum0.items()]
        return 0, rep, lines
    try:
        r = cellce.cancel_positive(g)
    except cellce.CancellationCycle as e:
        return 1, {"error": str(e), "log": [[str(x.b), str(x.a)] for x in e.log]}, [str(e)]
    after = cellce.degree_spectrum(r.after)
    replay_ok = cellce.same_presentation(cellce.replay(g, r.log).after, r.after)
    rep = {"before": {str(k): v for k, v in spectrum0.items()},
           "after": {str(k): v for k, v in after.items()},
           "log": [[str(e.b), str(e.a), cellce.pformat(e.replacement)] for e in r.log],
           "max_surviving_degree": r.max_degree, "replayable": replay_ok,
           "stuck": [str(x) for x in r.stuck]}
    lines = [f"eliminated {len(r.log)} pairs"]
    lines += [f"  {i + 1}. {e.b} cancels {e.a} := {cellce.pformat(e.replacement)}"
              for i, e in enumerate(r.log)]
    lines.append("  degree  before  after")
    for k in sorted(set(spectrum0) | set(after)):
        lines.append(f"  {k:>6}  {spectrum0.get(k, 0):>6}  {after.get(k, 0):>5}")
    lines.append(f"max surviving degree: {r.max_degree}")
    lines.append(f"log replays identically: {'yes' if replay_ok else 'NO'}")
    ok = replay_ok and (r.max_degree is None or r.max_degree <= 0)
    return (0 if ok else 1), rep, lines


def _parse_eta(text: str, A):
    """'c:x,x + 2 h:x' -> {('c', ('x', 'x')): 1, ('h', ('x',)): 2}."""
    from fractions import Fraction
    out = {}
    for raw in text.replace("-", "+-").split("+"):
        toks = raw.split()
        if not toks:
            continue
        coeff = A.field(1)
        if len(toks) == 2:
            try:
                coeff = A.field(Fraction(toks[0]))
            except ValueError:
                raise InputError(f"bad coefficient {toks[0]!r} in --eta") from None
            toks = toks[1:]
        elif toks[0].startswith("-"):
            coeff, toks = -coeff, [toks[0][1:]]
        if len(toks) != 1 or ":" not in toks[0]:
            raise InputError(f"bad --eta term {raw.strip()!r}; use tag:letters, e.g. c:x,x")
        tag, word = toks[0].split(":", 1)
        letters = tuple(word.split(","))
        if tag not in ("c", "h") or any(x not in A.labels for x in letters):
            raise InputError(f"bad --eta term {raw.strip()!r}")
        out[(tag, letters)] = A.field(out.get((tag, letters), 0) + coeff)
    return out


def cmd_witness(cfg: JobConfig):
    from . import hochcyc
    from .exactlin import HomologyBasis
    A = _algebra(cfg)
    st = hochcyc.connes_setup(A, cfg.length, cfg.u_order)
    targets = []
    if cfg.eta:
        targets.append(("eta", _parse_eta(cfg.eta, A)))
    else:
        lo, hi = _window(cfg, _chnu_range(A, cfg.length))
        for D in range(hi, lo - 1, -1):
            for i, rep_ in enumerate(HomologyBasis(st.chnu, D).reps):
                targets.append((f"class {D}.{i}", rep_))
    results = []
    lines = []
    for name, eta in targets:
        try:
            w = hochcyc.exactness_witness(A, cfg.length, cfg.u_order, eta, st)
        except ValueError as e:
            raise InputError(str(e)) from None
        chain = sorted(([k[0], list(k[1]), e, str(c)] for (k, e), c in
                        (w.chain.to_vector().items() if w.chain else [])), key=str)
        results.append({"target": name, "status": w.status, "degree": w.degree,
                        "chain": chain})
        lines.append(f"{name}: {w.status}" + (f" (witness in degree {w.degree}, "
                                               f"{len(chain)} terms)" if chain else ""))
    rep = {"algebra": A.name, "length": cfg.length, "u_order": cfg.u_order,
           "witnesses": results}
    return 0, rep, lines or ["no classes in the window"]


def cmd_selftest(cfg: JobConfig):
    from . import suites
    res = suites.all_suites(cfg.seed, quick=cfg.quick)
    rep = {"seed": cfg.seed, "suites": [r.summary() for r in res],
           "ok": all(r.ok for r in res)}
    lines = [f"{'PASS' if r.ok else 'FAIL'}  {r.name}  ({r.trials} trials)"
             + ("" if r.ok else f": {r.failures[0]}") for r in res]
    return (0 if rep["ok"] else 1), rep, lines


COMMANDS = {"hh": cmd_hh, "hc": cmd_hc, "les": cmd_les, "gysin": cmd_gysin,
            "ginzburg": cmd_ginzburg, "koszul": cmd_koszul, "ce": cmd_ce,
            "witness": cmd_witness, "selftest": cmd_selftest}


def _run_one(cfg: JobConfig):
    try:
        return COMMANDS[cfg.command](cfg)
    except InputError as e:
        return 2, {"error": str(e)}, [f"error: {e}"]
    except ComplexError as e:
        return 1, {"error": str(e)}, [f"failure: {e}"]


def run(cfg: JobConfig) -> tuple[int, str]:
    """Run a job; returns (exit code, text to print).  Several inputs run one
    after another; the exit code is the worst of them."""
    from dataclasses import replace
    if len(cfg.inputs) <= 1:
        code, rep, lines = _run_one(cfg)
    else:
        code, rep, lines = 0, {"jobs": []}, []
        for path in cfg.inputs:
            c, r, ls = _run_one(replace(cfg, inputs=[path]))
            code = max(code, c)
            rep["jobs"].append({"input": path, "exit": c, "report": r})
            lines += [f"## {path}"] + ls + [""]
    if cfg.format == "structured":
        rep = {"command": cfg.command, "action": cfg.action, "exit": code, "report": rep,
               "config": {k: (list(v) if isinstance(v, tuple) else v)
                          for k, v in asdict(cfg).items()}}
        return code, json.dumps(rep, sort_keys=True, indent=2, default=str)
    return code, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=["q", "f2"], default="q")
    common.add_argument("--weight", type=int, default=6, help="weight truncation W")
    common.add_argument("--length", type=int, default=5, help="word length truncation L")
    common.add_argument("--u-order", type=int, default=4, help="u-truncation U")
    common.add_argument("--bar-length", type=int, default=6, help="bar length B")
    common.add_argument("--cobar-depth", type=int, default=5, help="cobar depth P")
    common.add_argument("--arity", type=int, default=None,
                        help="A-infinity arity bound (default: the file's, else 4)")
    common.add_argument("--window", type=parse_window, default=None, help="degrees lo:hi")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["table", "structured"], default="table")

    p = argparse.ArgumentParser(prog="exactcy", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [("hh", "Hochschild homology table"),
                           ("les", "Connes' long exact sequence"),
                           ("gysin", "Gysin sequence of CH^nu as an S^1-complex")]:
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("inputs", nargs="+", metavar="ALGEBRA")
    s = sub.add_parser("hc", parents=[common], help="cyclic homology, all three models")
    s.add_argument("inputs", nargs="+", metavar="ALGEBRA")
    s.add_argument("--mode", choices=["all", "positive", "negative", "periodic"],
                   default="all")
    s = sub.add_parser("witness", parents=[common], help="exactness witnesses for B")
    s.add_argument("inputs", nargs="+", metavar="ALGEBRA")
    s.add_argument("--eta", default=None, help="CH^nu cycle, e.g. 'c:x,x + 2 h:x'")
    s = sub.add_parser("ginzburg", parents=[common], help="Ginzburg dg algebras")
    s.add_argument("action", choices=["check", "jacobi", "hh"])
    s.add_argument("inputs", nargs="+", metavar="QUIVER")
    s.add_argument("--dim", dest="n", type=int, default=None, help="CY dimension n")
    s = sub.add_parser("koszul", parents=[common], help="Koszul duality checks")
    s.add_argument("action", choices=["ext", "barcobar"])
    s.add_argument("inputs", nargs="+", metavar="ALGEBRA_OR_QUIVER")
    s.add_argument("--dim", dest="n", type=int, default=None, help="CY dimension n")
    s = sub.add_parser("ce", parents=[common], help="cellular CE generators")
    s.add_argument("action", choices=["grade", "cancel"])
    s.add_argument("inputs", nargs="+", metavar="FRONT")
    s = sub.add_parser("selftest", parents=[common], help="seeded property suites")
    s.add_argument("--quick", action="store_true")
    return p


def _glue(argv: list) -> list:
    """'--window -3:0' -> '--window=-3:0' so negative windows are not flags."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in ("--window", "--eta") and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(_glue(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as e:
        return 2 if e.code else 0
    kw = {k: v for k, v in vars(ns).items() if k in JobConfig.__dataclass_fields__}
    try:
        cfg = JobConfig(**kw)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    code, text = run(cfg)
    print(text, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
