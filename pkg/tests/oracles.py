"""Independent oracles built with sympy, sharing no code with exactcy.

hh_dual_numbers: HH of k[x]/(x^2) from the 2-periodic bimodule resolution
    ... -> A⊗A --(x⊗1 + 1⊗x)--> A⊗A --(x⊗1 - 1⊗x)--> A⊗A -> A.
hc_dual_numbers: HC of k[x]/(x^2) from Connes' quotient complex
    C^λ_n = A^{⊗n+1} / (1 - t) with the Hochschild b (valid in char 0).
Both return {n: dim} for homological degrees n = 0..top.
"""

from itertools import product

import sympy

# basis of A: index 0 = 1, index 1 = x
MUL = {(0, 0): 0, (0, 1): 1, (1, 0): 1}  # (1, 1) -> 0


def _mul(a, b):
    return MUL.get((a, b))


def _rank(m: sympy.Matrix, char: int) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if char == 0:
        return m.rank()
    rows = [[int(x) % char for x in m.row(i)] for i in range(m.rows)]
    rk, col = 0, 0
    while rk < len(rows) and col < len(rows[0]):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                rows[i] = [(a - b) % char for a, b in zip(rows[i], rows[rk])]
        rk += 1
        col += 1
    return rk


def _bimodule_matrix(sign: int) -> sympy.Matrix:
    """Right multiplication by x⊗1 + sign·1⊗x on A⊗A^op (basis a⊗b)."""
    basis = list(product(range(2), repeat=2))
    m = sympy.zeros(4, 4)
    for j, (a, b) in enumerate(basis):
        for (p, q), c in (((1, 0), 1), ((0, 1), sign)):
            l, r = _mul(p, a), _mul(b, q)  # x·a ⊗ b  and  a ⊗ b·x
            if l is not None and r is not None:
                m[basis.index((l, r)), j] += c
    return m


def _act_on_A(sign: int) -> sympy.Matrix:
    """The bimodule element x⊗1 + sign·1⊗x acting on A by m -> x m + sign m x."""
    m = sympy.zeros(2, 2)
    for j in range(2):
        for (p, q), c in (((1, 0), 1), ((0, 1), sign)):
            v = _mul(p, j)
            v = None if v is None else (v if q == 0 else _mul(v, 1))
            if v is not None:
                m[v, j] += c
    return m


def resolution_is_exact() -> bool:
    """ker of each differential equals the image of the next; the augmentation
    A⊗A -> A has kernel the image of x⊗1 - 1⊗x."""
    d_odd, d_even = _bimodule_matrix(-1), _bimodule_matrix(+1)
    ok = (d_odd * d_even).is_zero_matrix and (d_even * d_odd).is_zero_matrix
    ok &= 4 - d_odd.rank() == d_even.rank() and 4 - d_even.rank() == d_odd.rank()
    aug = sympy.Matrix([[1, 0, 0, 0], [0, 1, 1, 0]])  # a⊗b -> ab
    return ok and 4 - aug.rank() == d_odd.rank() and (aug * d_odd).is_zero_matrix


def hh_dual_numbers(top: int, char: int = 0) -> dict:
    maps = {}
    for n in range(1, top + 2):  # map from degree n to n - 1
        maps[n] = _act_on_A(-1 if n % 2 else +1)
    out = {}
    for n in range(top + 1):
        ker = 2 - (_rank(maps[n], char) if n >= 1 else 0)
        out[n] = ker - _rank(maps[n + 1], char)
    return out


def _tensor_basis(n):
    return list(product(range(2), repeat=n + 1))


def _b(n):
    """Hochschild b: A^{⊗n+1} -> A^{⊗n}, ungraded."""
    src, tgt = _tensor_basis(n), _tensor_basis(n - 1)
    idx = {w: i for i, w in enumerate(tgt)}
    m = sympy.zeros(len(tgt), len(src))
    for j, w in enumerate(src):
        for i in range(n):
            p = _mul(w[i], w[i + 1])
            if p is not None:
                m[idx[w[:i] + (p,) + w[i + 2:]], j] += (-1) ** i
        p = _mul(w[n], w[0])
        if p is not None:
            m[idx[(p,) + w[1:n]], j] += (-1) ** n
    return m


def _one_minus_t(n):
    basis = _tensor_basis(n)
    idx = {w: i for i, w in enumerate(basis)}
    m = sympy.eye(len(basis))
    for j, w in enumerate(basis):
        m[idx[(w[n],) + w[:n]], j] -= (-1) ** n
    return m


def hc_dual_numbers(top: int) -> dict:
    dims, img = {}, {}
    for n in range(top + 2):
        r = _one_minus_t(n).rank()
        dims[n] = 2 ** (n + 1) - r
        if n >= 1:
            both = _b(n).row_join(_one_minus_t(n - 1))
            img[n] = both.rank() - _one_minus_t(n - 1).rank()
    return {n: dims[n] - img.get(n, 0) - img[n + 1] for n in range(top + 1)}
