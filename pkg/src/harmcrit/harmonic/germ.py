"""Harmonic germs f = p + conj(q) at the origin and the smooth critical test."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..field import CycloNumber, common_level, root_of_unity, unit_modulus_test
from ..series import OrderValue, Series1, Series2, from_univariate

__all__ = [
    "HarmonicGerm",
    "GermError",
    "RejectionReason",
    "SmoothCriticalRejection",
    "SmoothCriticalData",
    "germ_order",
    "smooth_critical_test",
    "complexify",
    "to_analytic",
    "recenter1",
]


class GermError(ValueError):
    pass


def _minus_z_power(m: int, trunc: int, level: int) -> Series1:
    return Series1([0] * m + [-1], trunc=trunc, level=level)


@dataclass(frozen=True)
class HarmonicGerm:
    """Local expression p + conj(q) with p(0) = q(0) = 0.

    ``base``/``power`` are set for germs built as base^power - conj(z)^power,
    which lets the order-sum formula be used directly.
    """

    p: Series1
    q: Series1
    base: Series1 | None = None
    power: int | None = None

    def __post_init__(self):
        levels = [self.p.level, self.q.level] + ([self.base.level] if self.base is not None else [])
        n = common_level(*levels)
        object.__setattr__(self, "p", self.p.at_level(n))
        object.__setattr__(self, "q", self.q.at_level(n))
        if self.base is not None:
            object.__setattr__(self, "base", self.base.at_level(n))
        if not self.p.coeff(0).is_zero() or not self.q.coeff(0).is_zero():
            raise GermError("p(0) and q(0) must vanish (recenter first)")
        if self.p.exact and self.q.exact and self.p.is_zero() and self.q.is_zero():
            raise GermError("constant germ: p and q both vanish identically")

    @classmethod
    def pm(cls, base: Series1, m: int) -> "HarmonicGerm":
        """The germ base(z)^m - conj(z)^m."""
        if m < 1:
            raise GermError("m must be positive")
        if not base.coeff(0).is_zero():
            raise GermError("p(0) must vanish")
        if base.exact and base.is_zero():
            raise GermError("p must not vanish identically")
        return cls(base**m, _minus_z_power(m, base.trunc, base.level), base, m)

    @property
    def level(self) -> int:
        return self.p.level

    @property
    def trunc(self) -> int:
        return min(self.p.trunc, self.q.trunc)

    @property
    def exact(self) -> bool:
        return self.p.exact and self.q.exact

    def evaluate(self, z: complex) -> complex:
        return self.p.evaluate(z) + self.q.evaluate(z).conjugate()

    def conjugate(self) -> "HarmonicGerm":
        """conj(f), which swaps the roles of p and q."""
        return HarmonicGerm(self.q, self.p)


def recenter1(s: Series1, z0: CycloNumber) -> Series1:
    """Exact Taylor shift s(z0 + w) - s(z0) of a polynomial."""
    if not s.exact:
        raise GermError("only exact polynomials can be recentered")
    n = common_level(s.level, z0.level)
    s = s.at_level(n)
    from ..field import lift_level

    z0 = lift_level(z0, n)
    zero = CycloNumber.zero(n)
    out = [zero] * (len(s.coeffs))
    pw = [CycloNumber.one(n)]
    for _ in range(len(s.coeffs)):
        pw.append(pw[-1] * z0)
    for a, c in enumerate(s.coeffs):
        if c.is_zero():
            continue
        for k in range(1, a + 1):
            out[k] = out[k] + c * pw[a - k] * math.comb(a, k)
    return Series1(out, trunc=s.trunc, exact=True, level=n)


def germ_order(g: HarmonicGerm) -> OrderValue:
    a, b = g.p.ord(), g.q.ord()
    if a.is_infinite:
        return b
    if b.is_infinite:
        return a
    if a.is_exact and b.is_exact:
        return OrderValue.exact(min(a.k, b.k))
    lo = min(a.k, b.k)
    # the smaller one decides only if it is exact
    if a.is_exact and a.k == lo and (b.is_exact or a.k < b.k):
        return a
    if b.is_exact and b.k == lo and (a.is_exact or b.k < a.k):
        return b
    return OrderValue.at_least(lo)


class RejectionReason(enum.Enum):
    HOLOMORPHIC_LIKE = "holomorphic-like"
    ORDER_MISMATCH = "order mismatch"
    NON_UNIT_PSI = "non-unit psi(0)"
    NON_LIGHT = "non-light"
    STAR_OF_ARCS = "star of arcs"
    INDETERMINATE = "indeterminate"


_MESSAGES = {
    RejectionReason.HOLOMORPHIC_LIKE: "one of p, q vanishes identically (holomorphic-like)",
    RejectionReason.ORDER_MISMATCH: "ord p != ord q",
    RejectionReason.NON_UNIT_PSI: "|psi(0)| != 1",
    RejectionReason.NON_LIGHT: "jacobian identically zero (non-light)",
    RejectionReason.STAR_OF_ARCS: "psi'(0) = 0 (critical set is a star of arcs)",
    RejectionReason.INDETERMINATE: "truncation too small to decide",
}


class SmoothCriticalRejection(Exception):
    def __init__(self, reason: RejectionReason, detail: str = ""):
        self.reason = reason
        self.detail = detail
        msg = _MESSAGES[reason]
        super().__init__(f"{msg}: {detail}" if detail else msg)


@dataclass(frozen=True)
class SmoothCriticalData:
    m: int
    lam: CycloNumber
    psi: Series1
    p_red: Series1  # p' / z^(m-1)
    q_red: Series1  # q' / z^(m-1)


def smooth_critical_test(g: HarmonicGerm) -> SmoothCriticalData:
    """Check that 0 is a smooth critical point; raise a typed rejection otherwise."""
    p, q = g.p, g.q
    if (q.exact and q.is_zero()) or (p.exact and p.is_zero()):
        raise SmoothCriticalRejection(RejectionReason.HOLOMORPHIC_LIKE)
    op, oq = p.ord(), q.ord()
    if op.is_exact and oq.is_exact:
        if op.k != oq.k:
            raise SmoothCriticalRejection(RejectionReason.ORDER_MISMATCH, f"ord p = {op.k}, ord q = {oq.k}")
    elif op.is_exact and oq.is_at_least and oq.k > op.k:
        raise SmoothCriticalRejection(RejectionReason.ORDER_MISMATCH, f"ord p = {op.k}, ord q {oq}")
    elif oq.is_exact and op.is_at_least and op.k > oq.k:
        raise SmoothCriticalRejection(RejectionReason.ORDER_MISMATCH, f"ord p {op}, ord q = {oq.k}")
    else:
        raise SmoothCriticalRejection(RejectionReason.INDETERMINATE, f"ord p {op}, ord q {oq}")
    m = op.k
    lam = p.coeff(m) / q.coeff(m)
    if not unit_modulus_test(lam):
        raise SmoothCriticalRejection(RejectionReason.NON_UNIT_PSI)
    dp, dq = p.derivative(), q.derivative()
    diff = dp - dq.scale(lam)
    od = diff.ord()
    if od.is_infinite:
        raise SmoothCriticalRejection(RejectionReason.NON_LIGHT)
    if od.is_at_least:
        raise SmoothCriticalRejection(RejectionReason.INDETERMINATE, f"ord(psi - lambda) {od - (m - 1)}")
    k = od.k - (m - 1)
    if k >= 2:
        raise SmoothCriticalRejection(RejectionReason.STAR_OF_ARCS, f"ord(psi - lambda) = {k}")
    p_red, q_red = dp.shift_down(m - 1), dq.shift_down(m - 1)
    psi = p_red * q_red.inverse()
    return SmoothCriticalData(m, lam, psi, p_red, q_red)


def complexify(g: HarmonicGerm) -> tuple[Series2, Series2]:
    """Holomorphic extension (p(u) + conj(q)(v), q(u) + conj(p)(v)) with u = x, v = y."""
    t = g.trunc
    exact = g.exact
    pb, qb = g.p.conj(), g.q.conj()
    G1: dict = {}
    G2: dict = {}
    for k, c in enumerate(g.p.coeffs):
        if not c.is_zero():
            G1[(k, 0)] = c
    for k, c in enumerate(qb.coeffs):
        if not c.is_zero():
            G1[(0, k)] = c
    for k, c in enumerate(g.q.coeffs):
        if not c.is_zero():
            G2[(k, 0)] = c
    for k, c in enumerate(pb.coeffs):
        if not c.is_zero():
            G2[(0, k)] = c
    return (Series2(G1, trunc=t, exact=exact, level=g.level), Series2(G2, trunc=t, exact=exact, level=g.level))


def to_analytic(g: HarmonicGerm):
    """The real components (f1, f2) of f in coordinates z = x + i*y."""
    from ..analytic import AnalyticGerm

    n = g.level
    i = root_of_unity(1, 4, n)
    t = g.trunc
    zlin = Series2({(1, 0): 1, (0, 1): i}, trunc=t, level=n)
    zbar = Series2({(1, 0): 1, (0, 1): -i}, trunc=t, level=n)
    f = from_univariate(g.p.with_trunc(t) if g.p.trunc > t else g.p, zlin) + from_univariate(
        g.q.conj().with_trunc(t) if g.q.trunc > t else g.q.conj(), zbar)
    fb = f.conj()
    f1 = (f + fb).scale(CycloNumber.from_rational(1, n) / 2)
    f2 = (f - fb).scale(1 / (i * 2))
    return AnalyticGerm(f1, f2)
