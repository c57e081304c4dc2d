"""Planar analytic germs at a regular critical point.

The critical value order ``j`` is read off the iterated determinants

    M_1 = det(grad J, grad f),   M_k = det(grad J, grad M_{k-1}),

with ``f = f1 + i f2`` in real coordinates, and ``mu = j + 1``.  The Wirtinger
version ``L_k`` is recomputed alongside as a consistency check
(``M_n(0) = (2i)^n L_n(0)``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .field import CycloNumber, common_level, root_of_unity
from .intersection import local_intersection
from .series import OrderValue, Series2

__all__ = [
    "AnalyticError",
    "AnalyticGerm",
    "RecursionTrace",
    "WhitneyClass",
    "jacobian",
    "regular_test",
    "j_via_Mn",
    "mu_regular",
    "whitney_classify",
    "FlowSample",
    "FlowResult",
    "sample_gradient_flow",
    "recenter2",
]


class AnalyticError(ValueError):
    pass


def _i(level: int) -> CycloNumber:
    return root_of_unity(1, 4, level)


@dataclass(frozen=True)
class AnalyticGerm:
    """A germ (f1, f2) at the origin; both components vanish there."""

    f1: Series2
    f2: Series2

    def __post_init__(self):
        n = common_level(self.f1.level, self.f2.level)
        object.__setattr__(self, "f1", self.f1.at_level(n))
        object.__setattr__(self, "f2", self.f2.at_level(n))
        if not self.f1.const().is_zero() or not self.f2.const().is_zero():
            raise AnalyticError("germ components must vanish at the origin (recenter first)")

    @property
    def level(self) -> int:
        return self.f1.level

    @property
    def trunc(self) -> int:
        return min(self.f1.trunc, self.f2.trunc)

    @property
    def exact(self) -> bool:
        return self.f1.exact and self.f2.exact

    def complex_form(self) -> Series2:
        """f = f1 + i*f2."""
        return self.f1 + self.f2.scale(_i(self.level))

    def with_trunc(self, t: int) -> "AnalyticGerm":
        return AnalyticGerm(self.f1.with_trunc(t), self.f2.with_trunc(t))


def recenter2(s: Series2, x0: Fraction, y0: Fraction) -> Series2:
    """Exact Taylor shift s(x + x0, y + y0) - s(x0, y0) of a polynomial."""
    if not s.exact:
        raise AnalyticError("only exact polynomials can be recentered")
    x0, y0 = Fraction(x0), Fraction(y0)
    out: dict = {}
    for (a, b), c in s.terms.items():
        for i in range(a + 1):
            ca = math.comb(a, i) * x0 ** (a - i)
            if not ca:
                continue
            for k in range(b + 1):
                cb = math.comb(b, k) * y0 ** (b - k)
                if not cb or (i == 0 and k == 0):
                    continue
                key = (i, k)
                v = c * (ca * cb)
                out[key] = out[key] + v if key in out else v
    return Series2(out, trunc=s.trunc, exact=True, level=s.level)


def jacobian(g: AnalyticGerm) -> Series2:
    """J = f1_x f2_y - f1_y f2_x; truncation drops by one."""
    return g.f1.partial("x") * g.f2.partial("y") - g.f1.partial("y") * g.f2.partial("x")


def regular_test(g: AnalyticGerm) -> bool:
    J = jacobian(g)
    if not J.const().is_zero():
        return False
    return not (J.coeff(1, 0).is_zero() and J.coeff(0, 1).is_zero())


def _det(ax: Series2, ay: Series2, bx: Series2, by: Series2) -> Series2:
    return ax * by - ay * bx


@dataclass
class RecursionTrace:
    """Constants M_n(0) (and L_n(0)) of the determinant recursion."""

    values: list
    j: OrderValue
    l_values: list = field(default_factory=list)
    decidable: int = 0

    def __str__(self):
        return f"j = {self.j} from {len(self.values)} terms"


def _run_recursion(g: AnalyticGerm, T: int, n_want: int, n_cap: int):
    """M_n(0), L_n(0) for n = 1.. while decidable at working truncation T.

    Returns (Ms, Ls, done) where ``done`` means no larger T can add information.
    """
    h = g.with_trunc(T) if (g.exact or T < g.trunc) else g
    level = h.level
    i = _i(level)
    half = Fraction(1, 2)
    f = h.complex_form()
    J = jacobian(h)
    Jx, Jy = J.partial("x"), J.partial("y")
    Jz = (Jx - Jy.scale(i)).scale(half)
    Jzb = (Jx + Jy.scale(i)).scale(half)
    Ms: list = []
    Ls: list = []
    M = L = f
    while len(Ms) < n_cap:
        M = _det(Jx, Jy, M.partial("x"), M.partial("y"))
        Lx, Ly = L.partial("x"), L.partial("y")
        Lz = (Lx - Ly.scale(i)).scale(half)
        Lzb = (Lx + Ly.scale(i)).scale(half)
        L = Lz * Jzb - Lzb * Jz
        if not M.exact and M.trunc < 0:
            return Ms, Ls, False
        Ms.append(M.const())
        Ls.append(L.const())
        found = any(not v.is_zero() for v in Ms)
        if found and len(Ms) >= n_want:
            return Ms, Ls, True
        if M.exact and M.is_zero():
            # every later term vanishes too
            zero = CycloNumber.zero(level)
            while len(Ms) < max(n_want, 1) and len(Ms) < n_cap:
                Ms.append(zero)
                Ls.append(zero)
            return Ms, Ls, True
    return Ms, Ls, True


def j_via_Mn(g: AnalyticGerm, min_terms: int = 1) -> RecursionTrace:
    """First n with M_n(0) != 0, checked against (2i)^n L_n(0)."""
    if not regular_test(g):
        raise AnalyticError("the origin is not a regular critical point")
    limit = g.trunc
    if limit < 2:
        raise AnalyticError("truncation too small for M_1")
    n_cap = limit - 1
    T = min(8, limit)
    two_i = _i(g.level) * 2
    while True:
        Ms, Ls, done = _run_recursion(g, T, min_terms, n_cap)
        for n, (mv, lv) in enumerate(zip(Ms, Ls), start=1):
            if mv != two_i**n * lv:
                raise AssertionError(f"M_{n}(0) != (2i)^{n} L_{n}(0)")
        nz = next((k for k, v in enumerate(Ms, start=1) if not v.is_zero()), None)
        if nz is not None and (len(Ms) >= min_terms or done or T >= limit):
            return RecursionTrace(Ms, OrderValue.exact(nz), Ls, len(Ms))
        if nz is None and (done or T >= limit):
            return RecursionTrace(Ms, OrderValue.at_least(n_cap), Ls, len(Ms))
        T = min(2 * T, limit)


def mu_regular(g: AnalyticGerm, trace: RecursionTrace | None = None) -> OrderValue:
    """mu = j + 1, cross-checked with the intersection oracle for polynomials."""
    if trace is None:
        trace = j_via_Mn(g)
    mu_rec = trace.j + 1
    if not g.exact:
        return mu_rec
    oracle = local_intersection(g.f1, g.f2)
    if oracle.is_exact and mu_rec.is_exact and oracle != mu_rec:
        raise AssertionError(f"recursion gives mu = {mu_rec}, intersection gives {oracle}")
    if oracle.is_exact and mu_rec.is_at_least and oracle.k < mu_rec.k:
        raise AssertionError(f"recursion bound {mu_rec} contradicts intersection value {oracle}")
    if mu_rec.is_exact and oracle.is_infinite:
        raise AssertionError("recursion finite but intersection infinite")
    return mu_rec if mu_rec.is_exact else oracle


class WhitneyClass(enum.Enum):
    FOLD = "fold"
    CUSP = "cusp"
    HIGHER_EVEN = "higher-even"
    HIGHER_ODD = "higher-odd"
    COLLAPSE = "collapse"
    INDETERMINATE = "indeterminate"


def whitney_classify(mu: OrderValue) -> WhitneyClass:
    if mu.is_infinite:
        return WhitneyClass.COLLAPSE
    if mu.is_at_least:
        return WhitneyClass.INDETERMINATE
    k = mu.k
    if k == 2:
        return WhitneyClass.FOLD
    if k == 3:
        return WhitneyClass.CUSP
    if k < 2:
        raise AnalyticError(f"mu = {k} is not a critical multiplicity")
    return WhitneyClass.HIGHER_EVEN if k % 2 == 0 else WhitneyClass.HIGHER_ODD


# ---------------------------------------------------------------------------
# float sampler
# ---------------------------------------------------------------------------


@dataclass
class FlowSample:
    t: float
    gamma: tuple[complex, complex]
    sigma: complex


@dataclass
class FlowResult:
    samples: list
    derivatives: list  # estimates of Sigma^(n)(0), n = 1..4
    richardson_gap: float


class _FPoly:
    """Float evaluation of a bivariate polynomial and its gradient."""

    def __init__(self, s: Series2):
        self.terms = [(a, b, c.to_complex()) for (a, b), c in s.terms.items()]

    def __call__(self, x, y):
        return sum(c * x**a * y**b for a, b, c in self.terms)

    def grad(self, x, y):
        gx = sum(c * a * x ** (a - 1) * y**b for a, b, c in self.terms if a)
        gy = sum(c * b * x**a * y ** (b - 1) for a, b, c in self.terms if b)
        return gx, gy


def _rk4(field_fn, x, y, t1: float, steps: int):
    h = t1 / steps
    for _ in range(steps):
        k1 = field_fn(x, y)
        k2 = field_fn(x + h / 2 * k1[0], y + h / 2 * k1[1])
        k3 = field_fn(x + h / 2 * k2[0], y + h / 2 * k2[1])
        k4 = field_fn(x + h * k3[0], y + h * k3[1])
        x = x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y = y + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return x, y


def _fd_weights(xs: list[float], order: int) -> list[list[float]]:
    """Fornberg weights at 0 for derivatives 0..order on nodes xs."""
    n = len(xs)
    c = [[0.0] * n for _ in range(order + 1)]
    c[0][0] = 1.0
    c1 = 1.0
    c4 = xs[0]
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i]
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2
            for k in range(mn, 0, -1):
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3
            c[0][j] = c4 * c[0][j] / c3
        c1 = c2
    return c


def sample_gradient_flow(g: AnalyticGerm, t_max: float, count: int, *, fd_step: float = 0.05,
                         fd_points: int = 6, substeps: int = 40) -> FlowResult:
    """Integrate Gamma' = (-J_y, J_x) from the origin and sample Sigma = f(Gamma)."""
    if count < 1:
        raise AnalyticError("count must be at least 1")
    if not regular_test(g):
        raise AnalyticError("the origin is not a regular critical point")
    fpoly = _FPoly(g.complex_form())
    Jpoly = _FPoly(jacobian(g))

    def vf(x, y):
        jx, jy = Jpoly.grad(x, y)
        return (-jy, jx)

    def flow_to(t: float, steps_per_unit: float):
        if t == 0:
            return 0j, 0j
        steps = max(1, math.ceil(abs(t) * steps_per_unit))
        return _rk4(vf, 0j, 0j, t, steps)

    if count == 1 or t_max == 0:
        ts = [0.0] if t_max == 0 else [float(t_max)]
    else:
        ts = [-t_max + 2 * t_max * k / (count - 1) for k in range(count)]
    spu = max(substeps / max(fd_step, 1e-12), 200.0)
    samples = []
    for t in ts:
        x, y = flow_to(t, spu)
        if not (math.isfinite(abs(x)) and math.isfinite(abs(y))):
            raise AnalyticError(f"integration blew up at t = {t}")
        samples.append(FlowSample(t, (x, y), fpoly(x, y)))

    def estimate(h: float):
        nodes = [k * h for k in range(-fd_points, fd_points + 1)]
        vals = []
        for t in nodes:
            x, y = flow_to(t, substeps / h)
            vals.append(fpoly(x, y))
        w = _fd_weights(nodes, 4)
        return [sum(wk * v for wk, v in zip(w[n], vals)) for n in range(1, 5)]

    d1 = estimate(fd_step)
    d2 = estimate(fd_step / 2)
    gap = max(abs(a - b) / max(abs(b), 1e-300) if abs(b) > 1e-9 else abs(a - b) for a, b in zip(d1[:3], d2[:3]))
    return FlowResult(samples, d2, gap)
