"""Independent reference computations used to derive and freeze expected values.

These deliberately avoid the package's algorithms: intersection numbers come
from linear algebra on truncated local algebras, series identities from sympy.
"""

from __future__ import annotations

import sympy

from harmcrit.field import CycloNumber


def _rank(rows: list[dict], cols: list) -> int:
    """Rank of sparse rows {col: CycloNumber} by Gaussian elimination."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        r = {k: v for k, v in row.items() if not v.is_zero()}
        while r:
            lead = min(r, key=cols.index)
            if lead not in pivots:
                inv = 1 / r[lead]
                pivots[lead] = {k: v * inv for k, v in r.items()}
                rank += 1
                break
            prow = pivots[lead]
            c = r[lead]
            for k, v in prow.items():
                w = r.get(k)
                w = -(c * v) if w is None else w - c * v
                if w.is_zero():
                    r.pop(k, None)
                else:
                    r[k] = w
    return rank


def local_algebra_dim(F: dict, G: dict, N: int, level: int = 4) -> int:
    """dim of O / ((F, G) + m^N) for polynomials given as {(a, b): CycloNumber}."""
    cols = [(a, d - a) for d in range(N) for a in range(d + 1)]
    rows = []
    for P in (F, G):
        for (sa, sb) in cols:
            row: dict = {}
            for (a, b), c in P.items():
                key = (a + sa, b + sb)
                if key[0] + key[1] < N:
                    row[key] = row[key] + c if key in row else c
            if row:
                rows.append(row)
    return len(cols) - _rank(rows, cols)


def intersection_oracle(F: dict, G: dict, max_n: int = 40):
    """I_0(F, G) when it is at most max_n - 1, else None.

    dim_N is nondecreasing and dim_N == dim_(N+1) forces m^N inside the ideal
    (Nakayama), so the first repeat is the exact local intersection number.
    """
    prev = local_algebra_dim(F, G, 1)
    for N in range(1, max_n):
        cur = local_algebra_dim(F, G, N + 1)
        if cur == prev:
            return cur
        prev = cur
    return None


def series2_dict(s) -> dict:
    return dict(s.terms)


# -- sympy helpers ----------------------------------------------------------

z, x, y = sympy.symbols("z x y")


def sym(c: CycloNumber):
    """Exact sympy value of a cyclotomic number."""
    n = c.level
    zeta = sympy.exp(2 * sympy.pi * sympy.I / n)
    return sympy.nsimplify(sum(sympy.Rational(a) * zeta**k for k, a in enumerate(c.nums)) / c.den)


def sym_poly(s, var=z):
    return sympy.expand(sum(sym(c) * var**k for k, c in enumerate(s.coeffs)))


def sym_conj_poly(s, var=z):
    return sympy.expand(sum(sympy.conjugate(sym(c)) * var**k for k, c in enumerate(s.coeffs)))


def sympy_order_sum(p_expr, m: int, upto: int = 40) -> int:
    """Order sum for g = p^m - conj(z)^m computed with sympy series (finite values only)."""
    pbar = sympy.expand(sympy.conjugate(p_expr.subs(z, sympy.conjugate(z))))
    total = 0
    roots = [sympy.exp(2 * sympy.pi * sympy.I * k / m) for k in range(m)]
    for xi in roots:
        inner = sympy.expand(xi * p_expr)
        comp = sympy.expand(pbar.subs(z, inner))
        for eta in roots:
            expr = sympy.expand(eta * comp - z)
            poly = sympy.Poly(expr, z)
            orders = [mon[0] for mon, c in zip(poly.monoms(), poly.coeffs()) if sympy.simplify(c) != 0]
            if not orders:
                raise ValueError("summand vanishes identically")
            total += min(orders)
    return total


def sympy_recursion(f1, f2, n: int):
    """M_1(0) .. M_n(0) for f = f1 + i f2 from the determinant recursion, done in sympy."""
    J = sympy.expand(sympy.diff(f1, x) * sympy.diff(f2, y) - sympy.diff(f1, y) * sympy.diff(f2, x))
    Jx, Jy = sympy.diff(J, x), sympy.diff(J, y)
    M = sympy.expand(f1 + sympy.I * f2)
    out = []
    for _ in range(n):
        M = sympy.expand(Jx * sympy.diff(M, y) - Jy * sympy.diff(M, x))
        out.append(sympy.nsimplify(M.subs({x: 0, y: 0})))
    return out
