"""Topological models, germ construction and normal-form reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..field import (CycloNumber, _rational_root, common_level, field_root, lift_level,
                     root_of_unity, unit_modulus_test)
from ..series import DEFAULT_TRUNC, OrderValue, Series1, compose, reversion
from .germ import GermError, HarmonicGerm, germ_order
from .multiplicity import j_invariant

__all__ = [
    "TopologicalModel",
    "classify_model",
    "construct_germ",
    "ConstructionError",
    "PrenormalForm",
    "prenormalize",
    "series_root_power",
]


@dataclass(frozen=True)
class TopologicalModel:
    shape: str  # "convex" or "cusp"
    candidates: tuple[tuple[int, int], ...]  # ordered pairs (2n+ - 1, 2n- - 1)
    degree_abs: int
    fiber_counts: tuple[int, int]
    unique_flag: bool


def classify_model(m: int, j: int) -> TopologicalModel:
    if not isinstance(j, int) or not isinstance(m, int):
        raise ValueError("m and j must be finite integers")
    if m < 1 or j < m:
        raise ValueError(f"need j >= m >= 1, got m = {m}, j = {j}")
    if m % 2:
        cands = ((m, m),) if j % 2 else ((m + 2, m), (m, m + 2))
    else:
        cands = ((m + 1, m - 1), (m - 1, m + 1)) if j % 2 else ((m + 1, m + 1),)
    a, b = cands[0]
    n_sum = (a + 1) // 2 + (b + 1) // 2
    return TopologicalModel(
        shape="convex" if j % 2 else "cusp",
        candidates=cands,
        degree_abs=0 if (m + j) % 2 == 0 else 1,
        fiber_counts=(n_sum, n_sum - 2),
        unique_flag=len(cands) == 1,
    )


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


class ConstructionError(ValueError):
    pass


def _generic_b(m: int) -> CycloNumber:
    level = common_level(8 * m)
    for k in range(8 * m):
        b = root_of_unity(k, 8 * m, level)
        if (-(b * b)) ** m != 1:
            return b
    raise AssertionError("no generic root of unity found")


def construct_germ(m: int, mu, trunc: int = DEFAULT_TRUNC) -> HarmonicGerm:
    """A germ p^m - conj(z)^m with multiplicity mu (an int, or OrderValue.infinite())."""
    if m < 1:
        raise ConstructionError("m must be positive")
    infinite = isinstance(mu, OrderValue) and mu.is_infinite
    if isinstance(mu, OrderValue) and mu.is_exact:
        mu = mu.k
    if not infinite:
        if not isinstance(mu, int):
            raise ConstructionError(f"mu must be an integer or infinite, got {mu!r}")
        if mu < m * m + m:
            raise ConstructionError(f"mu = {mu} is below m^2 + m = {m * m + m}")
    if infinite:
        p = Series1([0] + [-1] * trunc, trunc=trunc, exact=False)
    elif mu == m * m + m:
        b = _generic_b(m)
        p = Series1([0, 1, b], trunc=trunc, level=b.level)
    else:
        nu = mu - (m - 1) * (m + 2)
        i = root_of_unity(1, 4, 4)
        cs = [CycloNumber.zero(4)] + [i**s for s in range(nu - 1)] + [CycloNumber.from_rational(2)]
        p = Series1(cs, trunc=trunc)
    if p.exact and p.degree * m > trunc:
        raise ConstructionError(f"truncation {trunc} too small for degree {p.degree * m}")
    g = HarmonicGerm.pm(p, m)
    rep = j_invariant(g)
    if infinite:
        ok = rep.mu.is_infinite or (rep.mu.is_at_least and rep.mu.k > trunc)
    else:
        ok = rep.mu.is_exact and rep.mu.k == mu and rep.m == m
    if not ok:
        raise AssertionError(f"constructed germ has m = {rep.m}, mu = {rep.mu}; requested {m}, {mu}")
    return g


# ---------------------------------------------------------------------------
# normal-form reduction
# ---------------------------------------------------------------------------


def series_root_power(u: Series1, e: Fraction) -> Series1:
    """u^e for u(0) = 1 by the power recurrence k b_k = sum ((e+1) j - k) a_j b_(k-j)."""
    if u.coeff(0) != 1:
        raise GermError("series_root_power needs u(0) = 1")
    t = u.trunc
    a = list(u.coeffs) + [u.zero_coeff()] * (t + 1 - len(u.coeffs))
    b = [CycloNumber.one(u.level)]
    for k in range(1, t + 1):
        acc = u.zero_coeff()
        for j in range(1, k + 1):
            if not a[j].is_zero():
                acc = acc + a[j] * b[k - j] * ((e + 1) * j - k)
        b.append(acc * Fraction(1, k))
    return Series1._make(b, t, False, u.level)


@dataclass(frozen=True)
class PrenormalForm:
    m: int
    n: OrderValue
    case: str  # "holomorphic-like", "m<n" or "m=n"
    germ: HarmonicGerm | None
    representable: bool
    steps: tuple[str, ...] = ()


def _straighten(P: Series1, Q: Series1, m: int):
    """Compose with phi^-1 where P = phi^m, phi tangent to the identity."""
    u = P.shift_down(m)
    phi = Series1._make([u.zero_coeff()] + list(series_root_power(u, Fraction(1, m)).coeffs),
                        P.trunc, False, P.level)
    inv = reversion(phi)
    return compose(P, inv), compose(Q, inv)


def prenormalize(g: HarmonicGerm) -> PrenormalForm:
    """Orders (m, n) of the normal form z^m - conj(z^n (1 + O(z))) and, when the
    needed constants exist in a cyclotomic field, the transformed germ."""
    p, q = g.p, g.q
    steps: list[str] = []
    if germ_order(g).is_infinite:
        raise GermError("constant germ")
    if p.exact and p.is_zero():
        p, q = q, p
        steps.append("conjugate")
    if q.exact and q.is_zero():
        m = p.ord().k
        a = p.coeff(m)
        P = p.scale(1 / a)
        Z, _ = _straighten(P, P, m)
        if not Z.agrees_with(Series1([0] * m + [1], trunc=Z.trunc), Z.trunc):
            raise AssertionError("straightening did not produce z^m")
        steps += [f"scale by 1/({a})", "compose with inverse m-th root"]
        H = HarmonicGerm(Series1([0] * m + [1], trunc=Z.trunc), Series1([], trunc=Z.trunc))
        return PrenormalForm(m, OrderValue.infinite(), "holomorphic-like", H, True, tuple(steps))
    op, oq = p.ord(), q.ord()
    if not op.is_exact and not oq.is_exact:
        raise GermError(f"orders undecidable at this truncation: ord p {op}, ord q {oq}")
    if not op.is_exact or (oq.is_exact and oq.k < op.k):
        p, q = q, p
        op, oq = oq, op
        steps.append("conjugate")
    m = op.k
    alpha = p.coeff(m)
    if oq.is_exact and oq.k == m:
        beta = q.coeff(m)
        if unit_modulus_test(beta / alpha):
            n = OrderValue.exact(m)
            case = "m=n"
        else:
            # target map w -> w - kappa * conj(w) removes the z^m term of q
            kappa = beta.conj() / alpha.conj()
            p, q = p - q.scale(kappa), q - p.scale(beta / alpha)
            steps.append("target shear w - kappa*conj(w)")
            alpha = p.coeff(m)
            oq = q.ord()
            n = oq
            case = "holomorphic-like" if oq.is_infinite else "m<n"
            if oq.is_infinite:
                return PrenormalForm(m, n, case, None, False, tuple(steps))
    else:
        n = oq
        case = "m<n"
    if not n.is_exact:
        return PrenormalForm(m, n, case, None, False, tuple(steps))
    nk = n.k
    beta = q.coeff(nk)
    # solve c*alpha*lam^m = 1 and conj(c)*beta*lam^n = -1 with lam = r*omega
    ratio2 = alpha.norm_sq() / beta.norm_sq()
    r = Fraction(1)
    if nk > m:
        if not ratio2.is_rational():
            return PrenormalForm(m, n, case, None, False, tuple(steps))
        r = _rational_root(ratio2.to_fraction(), 2 * (nk - m))
        if r is None:
            return PrenormalForm(m, n, case, None, False, tuple(steps))
    unit = -(alpha.conj() / beta) / (r ** (nk - m))
    omega = field_root(unit, m + nk)
    if omega is None:
        return PrenormalForm(m, n, case, None, False, tuple(steps))
    lam = omega * r
    c = 1 / (alpha * lam**m)
    level = common_level(p.level, lam.level)
    p, q = p.at_level(level), q.at_level(level)
    lam, c = lift_level(lam, level), lift_level(c, level)
    lin = Series1([0, lam], trunc=p.trunc, level=level)
    P = compose(p, lin).scale(c)
    Q = compose(q, lin.with_trunc(q.trunc)).scale(c.conj())
    steps.append(f"scale f -> c f(lambda z), lambda = {lam}")
    t = min(P.trunc, Q.trunc)
    P2, Q2 = _straighten(P.with_trunc(t), Q.with_trunc(t), m)
    steps.append("compose with inverse m-th root of p")
    return PrenormalForm(m, n, case, HarmonicGerm(P2, Q2), True, tuple(steps))
