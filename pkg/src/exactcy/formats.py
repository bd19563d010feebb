"""Text formats for algebras (.alg), quivers with potential (.quiver) and
fronts (.front).

All three are line based with ``[section]`` headers; ``#`` starts a comment.
Errors carry the line and column of the offending token.

.alg::

    [vertices]
    1
    [basis]
    e: 1 -> 1 deg 0 unit
    x: 1 -> 1 deg 0 weight 1
    [algebra]
    x * x = 0
    d x = 0
    mu3 x x x = y
    [options]
    arity = 4

.quiver::

    [vertices]
    1 2
    [arrows]
    a: 1 -> 2 deg 0
    [potential]
    1 cycle(a b c)
    [options]
    n = 3
    names = x:y 1:t

.front::

    [sheets]
    G+ 1
    [cells]
    0 alpha: G+ 5, G- 3
    1 beta alpha gamma: G+ 5, G- 3
    2 face: G+ 5, G- 3
    [matchings]
    beta gamma: G+ -> G+, G- -> G-
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algcore import FiniteAlgebra
from .cellce import Cell, FrontComplex, FrontError
from .exactlin import Field, QQ


class FormatError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


def _sections(text: str, allowed: set[str]) -> dict[str, list]:
    """section -> [(line_no, col_offset, content)] with comments stripped."""
    out: dict[str, list] = {}
    current = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        body = line.strip()
        if not body:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if body.startswith("["):
            m = re.fullmatch(r"\[(\w+)\]", body)
            if not m:
                raise FormatError("malformed section header", no, col)
            current = m.group(1)
            if current not in allowed:
                raise FormatError(f"unknown section [{current}]", no, col + 1)
            if current in out:
                raise FormatError(f"section [{current}] repeated", no, col + 1)
            out[current] = []
            continue
        if current is None:
            raise FormatError("content before the first section", no, col)
        out[current].append((no, col, body))
    return out


def _col(entry, token: str) -> int:
    no, col, body = entry
    i = body.find(token)
    return col + (i if i >= 0 else 0)


def _cell_line(entries: list, msg: str) -> tuple[int, int]:
    """Line and column of the first cell named in ``msg``."""
    where = {}
    for entry in entries:
        head = entry[2].split(":", 1)[0].split()
        if len(head) >= 2:
            where.setdefault(head[1], (entry[0], _col(entry, head[1])))
    for tok in re.findall(r"[^\s>:-]+", msg):
        if tok in where:
            return where[tok]
    return entries[0][0], entries[0][1]


def _number(entry, tok: str, field: Field):
    try:
        return field(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad coefficient {tok!r}", entry[0], _col(entry, tok)) from None


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*([^+\-]*)")


def parse_combination(entry, text: str, field: Field, known=None) -> dict:
    """'2 x + 1/2 y z - w' -> {('x',): 2, ('y','z'): 1/2, ('w',): -1}."""
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        sign, coeff, word = m.group(1), m.group(2), m.group(3).strip()
        if not first and sign is None:
            raise FormatError("expected + or -", entry[0], _col(entry, text[pos:]))
        if not word:
            raise FormatError("missing term", entry[0], _col(entry, text[pos:] or text))
        letters = tuple(word.split())
        if known is not None:
            for l in letters:
                if l not in known:
                    raise FormatError(f"unknown symbol {l!r}", entry[0], _col(entry, l))
        c = _number(entry, coeff, field) if coeff else field(1)
        if sign == "-":
            c = -c
        out[letters] = field(out.get(letters, 0) + c)
        pos = m.end()
        first = False
        if m.end() == m.start():
            break
    return {k: v for k, v in out.items() if v}


def _options(sec: list) -> dict:
    opts = {}
    for entry in sec:
        no, col, body = entry
        if "=" not in body:
            raise FormatError("expected key = value", no, col)
        k, v = body.split("=", 1)
        opts[k.strip()] = (entry, v.strip())
    return opts


def _int(entry, tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", entry[0], _col(entry, tok)) from None


_ARROW = re.compile(r"(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s+deg\s+(-?\d+)(.*)")


def _vertices(sec) -> list:
    verts = []
    for entry in sec:
        for tok in entry[2].replace(",", " ").split():
            if tok in verts:
                raise FormatError(f"vertex {tok!r} repeated", entry[0], _col(entry, tok))
            verts.append(tok)
    return verts


def parse_algebra(text: str, field: Field = QQ) -> FiniteAlgebra:
    sec = _sections(text, {"vertices", "basis", "algebra", "options"})
    if "vertices" not in sec or "basis" not in sec:
        raise FormatError("an algebra needs [vertices] and [basis]", 1)
    verts = _vertices(sec["vertices"])
    labels, degree, src, tgt, units, weight = [], {}, {}, {}, {}, {}
    for entry in sec["basis"]:
        no, col, body = entry
        m = _ARROW.fullmatch(body)
        if not m:
            raise FormatError("expected 'x: s -> t deg k [weight w] [unit]'", no, col)
        lab, s, t, k, rest = m.groups()
        for v in (s, t):
            if v not in verts:
                raise FormatError(f"unknown vertex {v!r}", no, _col(entry, v))
        if lab in labels:
            raise FormatError(f"basis label {lab!r} repeated", no, col)
        labels.append(lab)
        degree[lab], src[lab], tgt[lab] = int(k), s, t
        toks = rest.split()
        while toks:
            tok = toks.pop(0)
            if tok == "unit":
                if s != t or int(k) != 0:
                    raise FormatError("a unit must be a degree-0 loop", no, _col(entry, tok))
                if s in units:
                    raise FormatError(f"vertex {s} already has a unit", no, _col(entry, tok))
                units[s] = lab
            elif tok == "weight" and toks:
                weight[lab] = _int(entry, toks.pop(0))
            else:
                raise FormatError(f"unexpected {tok!r}", no, _col(entry, tok))
    for v in verts:
        if v not in units:
            raise FormatError(f"vertex {v} has no unit", sec["basis"][0][0])
    known = set(labels)
    products, diff, higher = {}, {}, {}
    for entry in sec.get("algebra", []):
        no, col, body = entry
        if "=" not in body:
            raise FormatError("expected '=' in structure equation", no, col)
        lhs, rhs = body.split("=", 1)
        val = {k[0]: c for k, c in parse_combination(entry, rhs, field, known).items()}
        if any(len(k) != 1 for k in parse_combination(entry, rhs, field, known)):
            raise FormatError("right-hand side must be a combination of basis labels",
                              no, _col(entry, rhs.strip()))
        toks = lhs.split()
        if len(toks) == 3 and toks[1] == "*":
            x, y = toks[0], toks[2]
            for l in (x, y):
                if l not in known:
                    raise FormatError(f"unknown symbol {l!r}", no, _col(entry, l))
            products[(x, y)] = val
        elif len(toks) == 2 and toks[0] == "d":
            if toks[1] not in known:
                raise FormatError(f"unknown symbol {toks[1]!r}", no, _col(entry, toks[1]))
            diff[toks[1]] = val
        elif toks and re.fullmatch(r"mu\d+", toks[0]):
            k = int(toks[0][2:])
            if k < 3 or len(toks) - 1 != k:
                raise FormatError(f"{toks[0]} needs {k} >= 3 inputs", no, col)
            for l in toks[1:]:
                if l not in known:
                    raise FormatError(f"unknown symbol {l!r}", no, _col(entry, l))
            higher.setdefault(k, {})[tuple(toks[1:])] = val
        else:
            raise FormatError("expected 'x * y = ...', 'd x = ...' or 'muK x1 .. xK = ...'",
                              no, col)
    opts = _options(sec.get("options", []))
    arity = _int(opts["arity"][0], opts["arity"][1]) if "arity" in opts else 4
    name = opts["name"][1] if "name" in opts else ""
    unknown = set(opts) - {"arity", "name"}
    if unknown:
        k = sorted(unknown)[0]
        raise FormatError(f"unknown option {k!r}", opts[k][0][0])
    if weight:
        for lab in labels:
            weight.setdefault(lab, 0 if lab in units.values() else 1)
    A = FiniteAlgebra(tuple(verts), tuple(labels), degree, src, tgt, units, products, diff,
                      higher, field, weight or None, arity, name)
    errs = A.validate()
    if errs:
        raise FormatError("invalid algebra: " + errs[0], 1)
    return A


def _cycles_in(body: str) -> list[tuple]:
    return [tuple(m.group(1).split()) for m in re.finditer(r"cycle\(([^)]*)\)", body)]


def parse_quiver(text: str, field: Field = QQ):
    """Returns (quiver, potential, options) with options n, names."""
    from .algcore import GradedQuiver
    from .ginzburg import Potential
    sec = _sections(text, {"vertices", "arrows", "potential", "options"})
    if "vertices" not in sec:
        raise FormatError("a quiver needs [vertices]", 1)
    verts = _vertices(sec["vertices"])
    arrows = []
    for entry in sec.get("arrows", []):
        no, col, body = entry
        m = _ARROW.fullmatch(body)
        if not m or m.group(5).strip():
            raise FormatError("expected 'a: s -> t deg k'", no, col)
        lab, s, t, k, _ = m.groups()
        for v in (s, t):
            if v not in verts:
                raise FormatError(f"unknown vertex {v!r}", no, _col(entry, v))
        arrows.append((lab, s, t, int(k)))
    try:
        Q = GradedQuiver.build(verts, arrows)
    except ValueError as e:
        raise FormatError(str(e), sec["vertices"][0][0]) from None
    known = {a[0] for a in arrows}
    terms = {}
    for entry in sec.get("potential", []):
        no, col, body = entry
        for m in re.finditer(r"([+-]?\s*\d*(?:/\d+)?)\s*cycle\(([^)]*)\)", body):
            coeff = m.group(1).replace(" ", "")
            c = field(1)
            if coeff in ("-",):
                c = -c
            elif coeff not in ("", "+"):
                c = _number(entry, coeff, field)
            letters = tuple(m.group(2).split())
            for l in letters:
                if l not in known:
                    raise FormatError(f"unknown arrow {l!r}", no, _col(entry, l))
            terms[letters] = field(terms.get(letters, 0) + c)
        if "cycle(" not in body:
            raise FormatError("expected 'c cycle(a b ...)'", no, col)
        try:
            Potential(Q, {letters: 1 for letters in _cycles_in(body)}, field)
        except ValueError as e:
            raise FormatError(str(e), no, col) from None
    w = Potential(Q, terms, field)
    opts = _options(sec.get("options", []))
    out = {"n": 3, "star_names": {}, "loop_names": {}}
    for k, (entry, v) in opts.items():
        if k == "n":
            out["n"] = _int(entry, v)
        elif k == "names":
            for pair in v.split():
                if ":" not in pair:
                    raise FormatError("names are 'arrow:dual' or 'vertex:loop'", entry[0],
                                      _col(entry, pair))
                a, b = pair.split(":", 1)
                if a in known:
                    out["star_names"][a] = b
                elif a in verts:
                    out["loop_names"][a] = b
                else:
                    raise FormatError(f"unknown name {a!r}", entry[0], _col(entry, pair))
        else:
            raise FormatError(f"unknown option {k!r}", entry[0])
    return Q, w, out


def parse_front(text: str) -> FrontComplex:
    sec = _sections(text, {"sheets", "cells", "matchings"})
    if "sheets" not in sec or "cells" not in sec:
        raise FormatError("a front needs [sheets] and [cells]", 1)
    pot = {}
    for entry in sec["sheets"]:
        toks = entry[2].split()
        if len(toks) != 2:
            raise FormatError("expected 'sheet potential'", entry[0], entry[1])
        pot[toks[0]] = _int(entry, toks[1])
    cells = []
    for entry in sec["cells"]:
        no, col, body = entry
        if ":" not in body:
            raise FormatError("expected 'dim name [ends]: sheet height, ...'", no, col)
        head, tail = body.split(":", 1)
        htoks = head.split()
        dim = _int(entry, htoks[0]) if htoks else None
        if dim not in (0, 1, 2) or len(htoks) != (4 if dim == 1 else 2):
            raise FormatError("expected '0 name:', '1 name from to:' or '2 name:'", no, col)
        heights = {}
        for part in tail.split(","):
            ptoks = part.split()
            if len(ptoks) != 2:
                raise FormatError("expected 'sheet height'", no, _col(entry, part.strip()))
            try:
                heights[ptoks[0]] = Fraction(ptoks[1])
            except ValueError:
                raise FormatError(f"bad height {ptoks[1]!r}", no, _col(entry, ptoks[1])) from None
        cells.append(Cell(htoks[1], dim, heights, tuple(htoks[2:])))
    matchings = {}
    for entry in sec.get("matchings", []):
        no, col, body = entry
        if ":" not in body:
            raise FormatError("expected 'cell endpoint: s -> t, ...'", no, col)
        head, tail = body.split(":", 1)
        key = tuple(head.split())
        if len(key) != 2:
            raise FormatError("expected 'cell endpoint:'", no, col)
        mp = {}
        for part in tail.split(","):
            if "->" not in part:
                raise FormatError("expected 's -> t'", no, _col(entry, part.strip()))
            a, b = (x.strip() for x in part.split("->"))
            mp[a] = b
        matchings[key] = mp
    try:
        return FrontComplex(pot, tuple(cells), matchings)
    except FrontError as e:
        no, col = _cell_line(sec["cells"], str(e))
        raise FormatError(str(e), no, col) from None
