"""Float sampling of the critical arc gamma and the critical value curve beta.

Runs in mpmath at 50 digits: for large j the speed |beta'| ~ t^(j-1) is tiny
near 0 and double precision loses the curvature to cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from ..series import Series1
from .germ import HarmonicGerm, SmoothCriticalData

__all__ = ["CurveSample", "CurveResult", "sample_curves", "estimate_j", "SamplerError",
           "curvature_check"]

_DPS = 50
_MAX_NEWTON = 60
_RESIDUAL = mpmath.mpf("1e-40")


class SamplerError(RuntimeError):
    pass


@dataclass(frozen=True)
class CurveSample:
    t: float
    gamma: complex
    beta: complex
    R: float
    kappa: float  # nan where beta' = 0
    converged: bool = True
    residual: float = 0.0
    speed: float = math.nan  # |beta'(t)|


@dataclass(frozen=True)
class CurveResult:
    samples: list[CurveSample]
    j_hat: int | None  # None when beta is constant
    slope: float
    degenerate: bool
    failures: int


class _Poly:
    """Coefficients as mpc, with Horner evaluation of value and two derivatives."""

    def __init__(self, s: Series1):
        self.c = [_mp(c) for c in s.coeffs]

    def eval3(self, z):
        v = d1 = d2 = mpmath.mpc(0)
        for c in reversed(self.c):
            d2 = d2 * z + 2 * d1
            d1 = d1 * z + v
            v = v * z + c
        return v, d1, d2

    def __call__(self, z):
        v = mpmath.mpc(0)
        for c in reversed(self.c):
            v = v * z + c
        return v


def _mp(c) -> mpmath.mpc:
    """Exact value of a cyclotomic number in mpmath precision."""
    n = c.level
    acc = mpmath.mpc(0)
    for k, a in enumerate(c.nums):
        if a:
            acc += a * mpmath.expjpi(mpmath.mpf(2 * k) / n)
    return acc / c.den


class _Tracker:
    def __init__(self, g: HarmonicGerm, data: SmoothCriticalData):
        self.lam = _mp(data.lam)
        self.sqrt_lam = mpmath.sqrt(self.lam)
        self.P = _Poly(g.p)
        self.Q = _Poly(g.q)
        self.P1 = _Poly(data.p_red)
        self.Q1 = _Poly(data.q_red)

    def target(self, t):
        return self.lam * mpmath.expj(t)

    def newton(self, t, z0):
        """Solve p1(z) - target * q1(z) = 0 starting from z0."""
        w = self.target(t)
        z = z0
        for _ in range(_MAX_NEWTON):
            a, da, _ = self.P1.eval3(z)
            b, db, _ = self.Q1.eval3(z)
            F = a - w * b
            dF = da - w * db
            if dF == 0:
                return None
            step = F / dF
            z -= step
            if abs(step) <= _RESIDUAL * (1 + abs(z)):
                a = self.P1(z)
                b = self.Q1(z)
                if b != 0 and abs(a / b - w) <= mpmath.mpf("1e-30"):
                    return z
        return None

    def psi_derivs(self, z):
        a, da, dda = self.P1.eval3(z)
        b, db, ddb = self.Q1.eval3(z)
        N = da * b - a * db
        dN = dda * b - a * ddb
        return N / b**2, (dN * b - 2 * N * db) / b**3

    def gamma_prime(self, t, z):
        d1, _ = self.psi_derivs(z)
        return 1j * self.target(t) / d1

    def curve_point(self, t, z):
        w = self.target(t)
        d1, d2 = self.psi_derivs(z)
        g1 = 1j * w / d1
        g2 = (-w - d2 * g1**2) / d1
        p0, p1, p2 = self.P.eval3(z)
        q0, q1, q2 = self.Q.eval3(z)
        beta = p0 + mpmath.conj(q0)
        b1 = p1 * g1 + mpmath.conj(q1 * g1)
        b2 = p2 * g1**2 + p1 * g2 + mpmath.conj(q2 * g1**2 + q1 * g2)
        R = 2 * mpmath.re(self.sqrt_lam * mpmath.expj(t / 2) * q1 * g1)
        speed = abs(b1)
        kappa = mpmath.im(mpmath.conj(b1) * b2) / speed**3 if speed > 0 else mpmath.nan
        resid = abs(self.P1(z) / self.Q1(z) - w)
        return beta, R, kappa, resid, speed

    def march(self, ts):
        """gamma at each t of an increasing-|t| list on one side of 0, by continuation."""
        out = []
        tc, zc = mpmath.mpf(0), mpmath.mpc(0)
        for t in ts:
            t = mpmath.mpf(t)
            ok = True
            while tc != t:
                h = t - tc
                z = None
                for _ in range(40):
                    pred = zc + self.gamma_prime(tc, zc) * h
                    z = self.newton(tc + h, pred)
                    if z is not None:
                        break
                    h /= 2
                if z is None:
                    ok = False
                    break
                tc, zc = tc + h, z
            out.append((zc, ok))
            if not ok:
                # keep the remaining samples flagged rather than guessing
                out.extend((zc, False) for _ in ts[len(out):])
                break
        return out


def _solve_grid(tr: _Tracker, ts: list[float]):
    """gamma for every t, marching outward from 0 on each side."""
    res: dict[int, tuple] = {}
    pos = sorted((i for i, t in enumerate(ts) if t >= 0), key=lambda i: ts[i])
    neg = sorted((i for i, t in enumerate(ts) if t < 0), key=lambda i: -ts[i])
    for idx in (pos, neg):
        for i, r in zip(idx, tr.march([ts[i] for i in idx])):
            res[i] = r
    return [res[i] for i in range(len(ts))]


def estimate_j(g: HarmonicGerm, data: SmoothCriticalData, t_hi: float = 1e-2, ratio: float = 64.0,
               points: int = 13):
    """Slope of log|beta(t) - beta(0)| against log|t| on a geometric grid of both signs."""
    with mpmath.workdps(_DPS):
        tr = _Tracker(g, data)
        mags = [t_hi * ratio ** (-k / (points - 1)) for k in range(points)]
        ts = sorted(mags) + [-t for t in sorted(mags)]
        sols = _solve_grid(tr, ts)
        xs, ys = [], []
        for t, (z, ok) in zip(ts, sols):
            if not ok:
                continue
            beta = tr.P(z) + mpmath.conj(tr.Q(z))
            a = abs(beta)
            if a == 0:
                continue
            xs.append(float(mpmath.log(abs(t))))
            ys.append(float(mpmath.log(a)))
        scale = float(max((abs(tr.P(z) + mpmath.conj(tr.Q(z))) for z, ok in sols if ok), default=0))
    if len(xs) < 2 or scale < 1e-30:
        return None, math.inf, True
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    return int(round(slope)), slope, False


def sample_curves(g: HarmonicGerm, data: SmoothCriticalData, t_min: float, t_max: float,
                  count: int) -> CurveResult:
    """Samples of gamma, beta, R and kappa on the uniform grid [t_min, t_max]."""
    if count < 1:
        raise SamplerError("count must be at least 1")
    if t_max < t_min:
        raise SamplerError("t_max < t_min")
    if count == 1 or t_max == t_min:
        ts = [float(t_min)]
    else:
        ts = [t_min + (t_max - t_min) * k / (count - 1) for k in range(count)]
    samples = []
    failures = 0
    with mpmath.workdps(_DPS):
        tr = _Tracker(g, data)
        for t, (z, ok) in zip(ts, _solve_grid(tr, ts)):
            if not ok:
                failures += 1
                samples.append(CurveSample(t, complex(z), math.nan, math.nan, math.nan, False, math.inf))
                continue
            beta, R, kappa, resid, speed = tr.curve_point(mpmath.mpf(t), z)
            samples.append(CurveSample(t, complex(z), complex(beta), float(R), float(kappa), True,
                                       float(resid), float(speed)))
    j_hat, slope, degenerate = estimate_j(g, data)
    return CurveResult(samples, j_hat, slope, degenerate, failures)


def curvature_check(g: HarmonicGerm, data: SmoothCriticalData, t: float) -> tuple[float, float]:
    """(kappa, 1 / (2 |beta'|)) at a single t, both evaluated at working precision."""
    with mpmath.workdps(_DPS):
        tr = _Tracker(g, data)
        ((z, ok),) = tr.march([t])
        if not ok:
            raise SamplerError(f"continuation failed at t = {t}")
        _, _, kappa, _, speed = tr.curve_point(mpmath.mpf(t), z)
        return float(kappa), float(1 / (2 * speed))
