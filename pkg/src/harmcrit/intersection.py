"""Local intersection multiplicity of two plane curve germs at the origin.

The main entry point is :func:`local_intersection`, a Fulton-style recursion on
exact bivariate polynomials.  A common branch through the origin (detected with
an exact gcd) makes the answer infinite.

Polynomials are handled internally as dicts ``{(a, b): CycloNumber}`` for the
monomial ``x^a y^b``.
"""

from __future__ import annotations

from fractions import Fraction

from .field import CycloNumber, common_level, lift_level
from .series import OrderValue, Series2

__all__ = [
    "IntersectionError",
    "MAX_DEGREE",
    "local_intersection",
    "bivariate_gcd",
    "has_common_branch",
    "mu_complexified",
    "truncated_intersection",
]

MAX_DEGREE = 64


class IntersectionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# univariate helpers over the field (lists, low degree first)
# ---------------------------------------------------------------------------


def _utrim(p: list) -> list:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _usub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        if k < len(a) and k < len(b):
            out.append(a[k] - b[k])
        elif k < len(a):
            out.append(a[k])
        else:
            out.append(-b[k])
    return _utrim(out)


def _umul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if y.is_zero():
                continue
            v = x * y
            out[i + j] = v if out[i + j] is None else out[i + j] + v
    zero = CycloNumber.zero(a[0].level)
    return _utrim([zero if v is None else v for v in out])


def _udivmod(a: list, b: list):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = 1 / b[-1]
    zero = CycloNumber.zero(b[-1].level)
    q = [zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = a[k + i] - c * y
        a.pop()
        _utrim(a)
    return _utrim(q), a


def _umonic(a: list) -> list:
    if not a:
        return a
    inv = 1 / a[-1]
    return [c * inv for c in a]


def _ugcd(a: list, b: list) -> list:
    a, b = _utrim(list(a)), _utrim(list(b))
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    return _umonic(a)


# ---------------------------------------------------------------------------
# bivariate <-> y-polynomials over K[x]
# ---------------------------------------------------------------------------


def _as_dict(P) -> tuple[dict, int]:
    if isinstance(P, Series2):
        if not P.exact:
            raise IntersectionError("truncated (non-exact) series are not polynomials")
        return dict(P.terms), P.level
    if isinstance(P, dict):
        return dict(P), common_level(*(c.level for c in P.values()))
    raise TypeError(f"expected a Series2 polynomial, got {type(P).__name__}")


def _lift_dict(P: dict, level: int) -> dict:
    return {k: lift_level(v, level) for k, v in P.items()}


def _to_ypoly(P: dict, level: int) -> list[list]:
    """List (by y-degree) of x-polynomials."""
    dy = max((b for _, b in P), default=-1)
    zero = CycloNumber.zero(level)
    rows: list[list] = [[] for _ in range(dy + 1)]
    for (a, b), c in P.items():
        row = rows[b]
        if len(row) <= a:
            row.extend([zero] * (a + 1 - len(row)))
        row[a] = c
    return [_utrim(r) for r in rows]


def _from_ypoly(rows: list[list]) -> dict:
    out = {}
    for b, row in enumerate(rows):
        for a, c in enumerate(row):
            if not c.is_zero():
                out[(a, b)] = c
    return out


def _ytrim(rows: list[list]) -> list[list]:
    while rows and not rows[-1]:
        rows.pop()
    return rows


def _content(rows: list[list]) -> list:
    g: list = []
    for r in rows:
        if r:
            g = _ugcd(g, r) if g else _umonic(list(r))
            if len(g) == 1:
                break
    return g


def _primitive(rows: list[list]) -> list[list]:
    c = _content(rows)
    if len(c) <= 1:
        return rows
    return [(_udivmod(r, c)[0] if r else []) for r in rows]


def _prem(A: list[list], B: list[list]) -> list[list]:
    """Pseudo-remainder of A by B as polynomials in y over K[x]."""
    R = [list(r) for r in A]
    n = len(B) - 1
    lcB = B[-1]
    while len(R) - 1 >= n and R:
        lcR = R[-1]
        k = len(R) - 1 - n
        R = [_umul(lcB, r) if r else [] for r in R]
        for i, bi in enumerate(B):
            if bi:
                R[k + i] = _usub(R[k + i], _umul(lcR, bi))
        R.pop()
        _ytrim(R)
    return R


def _ypoly_gcd(A: list[list], B: list[list]) -> list[list]:
    """gcd in K[x][y] via a primitive remainder sequence."""
    if not A:
        return B
    if not B:
        return A
    cg = _ugcd(_content(A), _content(B))
    A, B = _primitive(A), _primitive(B)
    if len(A) < len(B):
        A, B = B, A
    while B and len(B) > 1:
        R = _prem(A, B)
        A, B = B, (_primitive(R) if R else R)
    g = A if not B else [[CycloNumber.one(cg[0].level if cg else A[0][0].level)]]
    if not B:
        g = _primitive(g)
    return [_umul(cg, r) if r else [] for r in g]


def bivariate_gcd(F, G) -> Series2:
    """A gcd of two exact bivariate polynomials, normalized to be monic in (y, then x)."""
    Fd, lf = _as_dict(F)
    Gd, lg = _as_dict(G)
    if not Fd and not Gd:
        raise IntersectionError("gcd of two zero polynomials")
    n = common_level(lf, lg)
    Fd, Gd = _lift_dict(Fd, n), _lift_dict(Gd, n)
    g = _ypoly_gcd(_to_ypoly(Fd, n), _to_ypoly(Gd, n))
    d = _from_ypoly(g)
    lead = g[-1][-1]
    inv = 1 / lead
    d = {k: v * inv for k, v in d.items()}
    return Series2(d, trunc=max(MAX_DEGREE, max((a + b for a, b in d), default=0)), level=n)


def _eval_x(rows: list[list], x0: Fraction) -> list:
    out = []
    for r in rows:
        acc = None
        for c in reversed(r):
            acc = c if acc is None else acc * x0 + c
        out.append(acc if acc is not None else None)
    return out


def has_common_branch(F, G) -> bool:
    """Whether F and G share a factor that vanishes at the origin."""
    Fd, lf = _as_dict(F)
    Gd, lg = _as_dict(G)
    n = common_level(lf, lg)
    Fd, Gd = _lift_dict(Fd, n), _lift_dict(Gd, n)
    if not Fd or not Gd:
        other = Fd or Gd
        return (0, 0) not in other
    # common factor x or y
    if all(a > 0 for a, _ in Fd) and all(a > 0 for a, _ in Gd):
        return True
    if all(b > 0 for _, b in Fd) and all(b > 0 for _, b in Gd):
        return True
    A, B = _to_ypoly(Fd, n), _to_ypoly(Gd, n)
    if len(A) > 1 and len(B) > 1:
        # specialization certificate: coprime images at a point where both
        # leading coefficients survive rule out common factors of positive y-degree
        zero = CycloNumber.zero(n)
        for x0 in (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(-3), Fraction(5, 3)):
            la = _eval_x([A[-1]], x0)[0]
            lb = _eval_x([B[-1]], x0)[0]
            if la is None or lb is None or la.is_zero() or lb.is_zero():
                continue
            ua = _utrim([zero if c is None else c for c in _eval_x(A, x0)])
            ub = _utrim([zero if c is None else c for c in _eval_x(B, x0)])
            if len(_ugcd(ua, ub)) == 1:
                return False
            break
    else:
        # one of them has y-degree 0: common factors are pure x, so only x matters
        return False
    g = _from_ypoly(_ypoly_gcd(A, B))
    if (0, 0) not in g:
        return True
    return False


# ---------------------------------------------------------------------------
# Fulton recursion
# ---------------------------------------------------------------------------


def _restr(P: dict) -> tuple[int, int]:
    """(max, min) x-degree of P(x, 0); (-1, -1) when P(x, 0) = 0."""
    hi, lo = -1, -1
    for a, b in P:
        if b == 0:
            if a > hi:
                hi = a
            if lo < 0 or a < lo:
                lo = a
    return hi, lo


def _trunc(P: dict, prec: int | None) -> dict:
    if prec is None:
        return P
    return {k: v for k, v in P.items() if k[0] + k[1] <= prec}


def _total_degree(P: dict) -> int:
    return max((a + b for a, b in P), default=-1)


class _Abort(Exception):
    pass


def _fulton(F: dict, G: dict, T: int | None, bound: int) -> int:
    """Iterative Fulton recursion; with T the data are kept modulo m^(T+1)."""
    acc = 0
    prec = T
    F, G = _trunc(F, prec), _trunc(G, prec)
    while True:
        if (0, 0) in F or (0, 0) in G:
            return acc
        r, _ = _restr(F)
        s, _ = _restr(G)
        if r < 0 and s < 0:
            # y divides both
            if T is not None:
                raise _Abort
            raise IntersectionError("common branch y = 0 reached during recursion")
        if s < 0:
            F, G = G, F
            r, s = s, r
        if r < 0:
            # F = y*H: I(F, G) = ord_x G(x, 0) + I(H, G)
            _, lo = _restr(G)
            acc += lo
            if acc > bound:
                raise AssertionError("intersection value exceeds the Bezout bound")
            if T is not None and acc > T:
                raise _Abort
            F = {(a, b - 1): v for (a, b), v in F.items()}
            if prec is not None:
                prec -= 1
                F, G = _trunc(F, prec), _trunc(G, prec)
            continue
        if s < r:
            F, G = G, F
            r, s = s, r
        # 1 <= r <= s: kill the top of G(x, 0)
        c = G[(s, 0)] / F[(r, 0)]
        sh = s - r
        newG = dict(G)
        for (a, b), v in F.items():
            if prec is not None and a + sh + b > prec:
                continue
            key = (a + sh, b)
            w = newG.get(key)
            w = -(c * v) if w is None else w - c * v
            if w.is_zero():
                newG.pop(key, None)
            else:
                newG[key] = w
        G = newG


def local_intersection(F, G) -> OrderValue:
    """Intersection multiplicity I_0(F, G) of two exact polynomials."""
    Fd, lf = _as_dict(F)
    Gd, lg = _as_dict(G)
    n = common_level(lf, lg)
    Fd, Gd = _lift_dict(Fd, n), _lift_dict(Gd, n)
    dF, dG = _total_degree(Fd), _total_degree(Gd)
    if max(dF, dG) > MAX_DEGREE:
        raise IntersectionError(f"total degree exceeds the guard {MAX_DEGREE}")
    if (0, 0) in Fd or (0, 0) in Gd:
        return OrderValue.exact(0)
    if not Fd or not Gd or has_common_branch(Fd, Gd):
        return OrderValue.infinite()
    bound = dF * dG
    T = 8
    while True:
        T = min(T, bound)
        try:
            k = _fulton(Fd, Gd, T, bound)
        except _Abort:
            if T >= bound:
                raise AssertionError("truncated recursion failed at the Bezout bound")
            T *= 2
            continue
        # a value <= T is certified by Nakayama's lemma
        return OrderValue.exact(k)


def mu_complexified(F, G) -> OrderValue:
    """Multiplicity of a germ whose holomorphic extension has components F, G."""
    for P in (F, G):
        d, _ = _as_dict(P)
        if (0, 0) in d:
            raise IntersectionError("germ components must vanish at the origin")
    return local_intersection(F, G)


def truncated_intersection(F: Series2, G: Series2) -> OrderValue:
    """Certified I_0(F, G) when F, G are only known through their truncation T.

    A value k <= T does not depend on the unknown tail, so it is exact; when
    the recursion cannot finish inside the known jet the result is AtLeast(T + 1).
    """
    if F.exact and G.exact:
        return local_intersection(F, G)
    T = min(F.trunc if not F.exact else 1 << 30, G.trunc if not G.exact else 1 << 30)
    n = common_level(F.level, G.level)
    Fd = _lift_dict({k: v for k, v in F.terms.items() if sum(k) <= T}, n)
    Gd = _lift_dict({k: v for k, v in G.terms.items() if sum(k) <= T}, n)
    if (0, 0) in Fd or (0, 0) in Gd:
        return OrderValue.exact(0)
    if not Fd or not Gd:
        return OrderValue.at_least(T + 1)
    try:
        return OrderValue.exact(_fulton(Fd, Gd, T, 1 << 30))
    except _Abort:
        return OrderValue.at_least(T + 1)
