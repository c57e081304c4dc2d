"""Truncated formal power series in one and two variables over CycloNumber.

A series carries a truncation degree ``trunc`` and an ``exact`` flag.  For an
exact series (a finite polynomial) every coefficient is known; otherwise only
the coefficients of (total) degree <= trunc are known.  Valuations respect this
distinction through :class:`OrderValue`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .field import CycloNumber, common_level, lift_level, make_gaussian

__all__ = [
    "DEFAULT_TRUNC",
    "OrderKind",
    "OrderValue",
    "Series1",
    "Series2",
    "order",
    "compose",
    "conj_series",
    "reversion",
    "derivative",
    "partial",
    "series_pow",
]

DEFAULT_TRUNC = 64


class SeriesError(ValueError):
    pass


class OrderKind(enum.Enum):
    EXACT = "exact"
    AT_LEAST = "at_least"
    INFINITE = "infinite"


@dataclass(frozen=True)
class OrderValue:
    """An exact order, a certified lower bound, or infinity."""

    kind: OrderKind
    k: int | None = None

    @classmethod
    def exact(cls, k: int) -> "OrderValue":
        return cls(OrderKind.EXACT, int(k))

    @classmethod
    def at_least(cls, k: int) -> "OrderValue":
        return cls(OrderKind.AT_LEAST, int(k))

    @classmethod
    def infinite(cls) -> "OrderValue":
        return cls(OrderKind.INFINITE)

    @property
    def is_exact(self) -> bool:
        return self.kind is OrderKind.EXACT

    @property
    def is_infinite(self) -> bool:
        return self.kind is OrderKind.INFINITE

    @property
    def is_at_least(self) -> bool:
        return self.kind is OrderKind.AT_LEAST

    @property
    def is_finite(self) -> bool:
        return self.kind is OrderKind.EXACT

    @property
    def bound(self) -> float | int:
        """A certified lower bound (the value itself when exact)."""
        return float("inf") if self.is_infinite else self.k

    def __add__(self, other):
        if isinstance(other, int):
            other = OrderValue.exact(other)
        if not isinstance(other, OrderValue):
            return NotImplemented
        if self.is_infinite or other.is_infinite:
            return OrderValue.infinite()
        if self.is_exact and other.is_exact:
            return OrderValue.exact(self.k + other.k)
        return OrderValue.at_least(self.k + other.k)

    __radd__ = __add__

    def __sub__(self, other: int):
        if not isinstance(other, int):
            return NotImplemented
        if self.is_infinite:
            return self
        return OrderValue(self.kind, self.k - other)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_exact and self.k == other
        if isinstance(other, OrderValue):
            return self.kind is other.kind and self.k == other.k
        return NotImplemented

    def __hash__(self):
        return hash((self.kind, self.k))

    def __str__(self):
        if self.is_infinite:
            return "inf"
        if self.is_at_least:
            return f">={self.k}"
        return str(self.k)

    def __repr__(self):
        if self.is_infinite:
            return "Infinite"
        return f"{'Exact' if self.is_exact else 'AtLeast'}({self.k})"

    def to_json(self):
        if self.is_exact:
            return self.k
        return str(self)

    @classmethod
    def from_json(cls, value) -> "OrderValue":
        if isinstance(value, int):
            return cls.exact(value)
        if value == "inf":
            return cls.infinite()
        if isinstance(value, str) and value.startswith(">="):
            return cls.at_least(int(value[2:]))
        raise SeriesError(f"not an order value: {value!r}")


def _as_cyclo(c, level: int) -> CycloNumber:
    if isinstance(c, CycloNumber):
        return lift_level(c, level) if c.level != level else c
    if isinstance(c, complex):
        return make_gaussian(Fraction(c.real), Fraction(c.imag), level)
    return CycloNumber.from_rational(c, level)


def _levels(values: Iterable) -> int:
    return common_level(*(c.level for c in values if isinstance(c, CycloNumber)))


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


class Series1:
    """Truncated power series sum c_k z^k.

    Coefficients above ``trunc`` are unknown unless ``exact`` is set, in which
    case the series is a polynomial of degree <= trunc.
    """

    __slots__ = ("coeffs", "trunc", "exact", "level")

    def __init__(self, coeffs: Iterable = (), trunc: int = DEFAULT_TRUNC, exact: bool = True,
                 level: int | None = None):
        coeffs = list(coeffs)
        if level is None:
            level = _levels(coeffs)
        cs = [_as_cyclo(c, level) for c in coeffs]
        if len(cs) > trunc + 1:
            if exact and any(cs[trunc + 1:]):
                exact = False
            cs = cs[: trunc + 1]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.trunc = trunc
        self.exact = exact
        self.level = level

    @classmethod
    def _make(cls, cs: list, trunc: int, exact: bool, level: int) -> "Series1":
        obj = object.__new__(cls)
        while cs and cs[-1].is_zero():
            cs.pop()
        obj.coeffs = tuple(cs)
        obj.trunc = trunc
        obj.exact = exact
        obj.level = level
        return obj

    @classmethod
    def monomial(cls, k: int, c=1, trunc: int = DEFAULT_TRUNC) -> "Series1":
        level = c.level if isinstance(c, CycloNumber) else 4
        return cls([0] * k + [c], trunc=trunc, level=level)

    @classmethod
    def z(cls, trunc: int = DEFAULT_TRUNC) -> "Series1":
        return cls.monomial(1, 1, trunc)

    # -- inspection ----------------------------------------------------------

    def zero_coeff(self) -> CycloNumber:
        return CycloNumber.zero(self.level)

    def coeff(self, k: int) -> CycloNumber:
        if k > self.trunc and not self.exact:
            raise SeriesError(f"coefficient {k} is beyond truncation {self.trunc}")
        return self.coeffs[k] if k < len(self.coeffs) else self.zero_coeff()

    def __getitem__(self, k: int) -> CycloNumber:
        return self.coeff(k)

    @property
    def degree(self) -> int:
        """Degree of the stored part (-1 for zero)."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def ord(self) -> OrderValue:
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return OrderValue.exact(k)
        if self.exact:
            return OrderValue.infinite()
        return OrderValue.at_least(self.trunc + 1)

    def valuation_bound(self) -> int:
        """Index of the first coefficient not known to vanish."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return self.trunc + 1 if not self.exact else 1 << 30

    def at_level(self, level: int) -> "Series1":
        if level == self.level:
            return self
        return Series1._make([lift_level(c, level) for c in self.coeffs], self.trunc, self.exact, level)

    def with_trunc(self, trunc: int) -> "Series1":
        """Lower the truncation (never raises it for truncated series)."""
        if not self.exact and trunc > self.trunc:
            raise SeriesError("cannot raise the truncation of a truncated series")
        exact = self.exact and self.degree <= trunc
        return Series1._make(list(self.coeffs[: trunc + 1]), trunc, exact, self.level)

    def _align(self, other: "Series1"):
        if other.level == self.level:
            return self, other
        n = common_level(self.level, other.level)
        return self.at_level(n), other.at_level(n)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series1):
            other = Series1([other], trunc=self.trunc, level=self.level)
        a, b = self._align(other)
        t = min(a.trunc, b.trunc)
        n = min(max(len(a.coeffs), len(b.coeffs)), t + 1)
        z = a.zero_coeff()
        cs = []
        for k in range(n):
            x = a.coeffs[k] if k < len(a.coeffs) else z
            y = b.coeffs[k] if k < len(b.coeffs) else z
            cs.append(x + y)
        exact = a.exact and b.exact and max(a.degree, b.degree) <= t
        return Series1._make(cs, t, exact, a.level)

    __radd__ = __add__

    def __neg__(self):
        return Series1._make([-c for c in self.coeffs], self.trunc, self.exact, self.level)

    def __sub__(self, other):
        if not isinstance(other, Series1):
            other = Series1([other], trunc=self.trunc, level=self.level)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series1":
        if not isinstance(c, CycloNumber):
            c = _as_cyclo(c, self.level)
        n = common_level(self.level, c.level)
        s = self.at_level(n)
        c = _as_cyclo(c, n)
        return Series1._make([c * x for x in s.coeffs], s.trunc, s.exact, n)

    def __mul__(self, other):
        if not isinstance(other, Series1):
            return self.scale(other)
        a, b = self._align(other)
        t = min(a.trunc, b.trunc)
        cs = _mul_trunc(a.coeffs, b.coeffs, t, a.zero_coeff())
        exact = a.exact and b.exact and (a.degree + b.degree) <= t
        return Series1._make(cs, t, exact, a.level)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, m: int) -> "Series1":
        return series_pow(self, m)

    def __eq__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        return (self.trunc == other.trunc and self.exact == other.exact
                and len(self.coeffs) == len(other.coeffs)
                and all(x == y for x, y in zip(self.coeffs, other.coeffs)))

    def agrees_with(self, other: "Series1", through: int) -> bool:
        """Coefficient agreement up to degree ``through`` (inclusive)."""
        return all(self.coeff(k) == other.coeff(k) for k in range(through + 1))

    def __repr__(self):
        from .textfmt import format_series1

        return f"Series1({format_series1(self)})"

    # -- calculus / composition ----------------------------------------------

    def derivative(self) -> "Series1":
        """Formal derivative; truncation drops by one."""
        cs = [c * k for k, c in enumerate(self.coeffs)][1:]
        return Series1._make(cs, self.trunc - 1, self.exact, self.level)

    def conj(self) -> "Series1":
        return Series1._make([c.conj() for c in self.coeffs], self.trunc, self.exact, self.level)

    def shift_down(self, k: int) -> "Series1":
        """Divide by z^k; the first k coefficients must vanish."""
        if any(not c.is_zero() for c in self.coeffs[:k]):
            raise SeriesError(f"series is not divisible by z^{k}")
        return Series1._make(list(self.coeffs[k:]), self.trunc - k, self.exact, self.level)

    def inverse(self) -> "Series1":
        """Multiplicative inverse of a series with nonzero constant term."""
        b0 = self.coeff(0)
        if b0.is_zero():
            raise SeriesError("constant term vanishes; series is not invertible")
        t = self.trunc
        inv0 = 1 / b0
        out = [inv0]
        bs = self.coeffs
        for k in range(1, t + 1):
            acc = None
            for i in range(1, min(k, len(bs) - 1) + 1):
                if not bs[i].is_zero():
                    term = bs[i] * out[k - i]
                    acc = term if acc is None else acc + term
            out.append(-(acc * inv0) if acc is not None else self.zero_coeff())
        exact = self.exact and self.degree == 0
        return Series1._make(out, t, exact, self.level)

    def __call__(self, other: "Series1") -> "Series1":
        return compose(self, other)

    def evaluate(self, z: complex) -> complex:
        """Float Horner evaluation of the stored coefficients."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c.to_complex()
        return acc

    def complex_coeffs(self) -> list[complex]:
        return [c.to_complex() for c in self.coeffs]


def _mul_trunc(a, b, t: int, zero: CycloNumber) -> list:
    if not a or not b:
        return []
    n = min(len(a) + len(b) - 1, t + 1)
    out: list = [None] * n
    bnz = [(j, y) for j, y in enumerate(b) if not y.is_zero()]
    for i, x in enumerate(a):
        if i >= n:
            break
        if x.is_zero():
            continue
        for j, y in bnz:
            k = i + j
            if k >= n:
                break
            v = x * y
            out[k] = v if out[k] is None else out[k] + v
    return [zero if v is None else v for v in out]


def order(s) -> OrderValue:
    """Valuation of a univariate or bivariate series."""
    return s.ord()


def series_pow(s: Series1, m: int) -> Series1:
    if m < 0:
        raise SeriesError("negative powers are not supported")
    result = Series1([1], trunc=s.trunc, level=s.level)
    base = s
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


def compose(outer: Series1, inner: Series1) -> Series1:
    """outer(inner(z)) truncated to the smaller truncation."""
    if not inner.coeff(0).is_zero():
        raise SeriesError("inner series must have zero constant term")
    outer, inner = outer._align(inner)
    t = min(outer.trunc, inner.trunc)
    zero = outer.zero_coeff()
    cs = list(outer.coeffs[: t + 1])
    acc: list = []
    for c in reversed(cs):
        acc = _mul_trunc(acc, inner.coeffs, t, zero)
        if acc:
            acc[0] = acc[0] + c
        else:
            acc = [c]
    exact = outer.exact and inner.exact and max(outer.degree, 0) * max(inner.degree, 0) <= t
    return Series1._make(acc, t, exact, outer.level)


def conj_series(s: Series1) -> Series1:
    return s.conj()


def derivative(s: Series1) -> Series1:
    return s.derivative()


def reversion(s: Series1) -> Series1:
    """Compositional inverse r with s(r(z)) = z through the truncation."""
    if not s.coeff(0).is_zero():
        raise SeriesError("reversion needs s(0) = 0")
    a1 = s.coeff(1)
    if a1.is_zero():
        raise SeriesError("reversion needs s'(0) != 0")
    t = s.trunc
    level = s.level
    zero = s.zero_coeff()
    ds = s.derivative()
    # Newton iteration r <- r - (s(r) - z) / s'(r), doubling precision
    r = Series1._make([zero, 1 / a1], t, False, level)
    prec = 1
    while prec < t:
        prec = min(2 * prec, t)
        rp = Series1._make(list(r.coeffs[: prec + 1]), prec, False, level)
        sp = s.with_trunc(prec) if (s.exact or s.trunc >= prec) else s
        resid = compose(sp, rp) - Series1([0, 1], trunc=prec, level=level)
        dp = min(prec, ds.trunc)
        dsr = compose(ds.with_trunc(dp) if ds.exact or ds.trunc >= dp else ds, rp.with_trunc(dp))
        # resid vanishes below degree prec/2 + 1, so the unknown top of s'(r) is never used
        dsr = Series1._make(list(dsr.coeffs), prec, False, level)
        step = resid * dsr.inverse()
        r = rp - step
    return Series1._make(list(r.coeffs[: t + 1]), t, False, level)


# ---------------------------------------------------------------------------
# bivariate
# ---------------------------------------------------------------------------


class Series2:
    """Truncated series sum c_{a,b} x^a y^b with total-degree truncation."""

    __slots__ = ("terms", "trunc", "exact", "level")

    def __init__(self, terms: Mapping | Iterable = (), trunc: int = DEFAULT_TRUNC,
                 exact: bool = True, level: int | None = None):
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        if level is None:
            level = _levels(c for _, c in items)
        out: dict = {}
        for (a, b), c in items:
            c = _as_cyclo(c, level)
            if c.is_zero():
                continue
            if a + b > trunc:
                if exact:
                    exact = False
                continue
            key = (a, b)
            out[key] = out[key] + c if key in out else c
        self.terms = {k: v for k, v in out.items() if not v.is_zero()}
        self.trunc = trunc
        self.exact = exact
        self.level = level

    @classmethod
    def _make(cls, terms: dict, trunc: int, exact: bool, level: int) -> "Series2":
        obj = object.__new__(cls)
        obj.terms = terms
        obj.trunc = trunc
        obj.exact = exact
        obj.level = level
        return obj

    @classmethod
    def x(cls, trunc: int = DEFAULT_TRUNC) -> "Series2":
        return cls({(1, 0): 1}, trunc=trunc)

    @classmethod
    def y(cls, trunc: int = DEFAULT_TRUNC) -> "Series2":
        return cls({(0, 1): 1}, trunc=trunc)

    @classmethod
    def constant(cls, c, trunc: int = DEFAULT_TRUNC) -> "Series2":
        return cls({(0, 0): c}, trunc=trunc)

    def zero_coeff(self) -> CycloNumber:
        return CycloNumber.zero(self.level)

    def coeff(self, a: int, b: int) -> CycloNumber:
        if a + b > self.trunc and not self.exact:
            raise SeriesError(f"coefficient ({a},{b}) is beyond truncation {self.trunc}")
        return self.terms.get((a, b), self.zero_coeff())

    def const(self) -> CycloNumber:
        return self.terms.get((0, 0), self.zero_coeff())

    @property
    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def ord(self) -> OrderValue:
        if self.terms:
            return OrderValue.exact(min(a + b for a, b in self.terms))
        if self.exact:
            return OrderValue.infinite()
        return OrderValue.at_least(self.trunc + 1)

    def at_level(self, level: int) -> "Series2":
        if level == self.level:
            return self
        return Series2._make({k: lift_level(v, level) for k, v in self.terms.items()},
                             self.trunc, self.exact, level)

    def with_trunc(self, trunc: int) -> "Series2":
        if not self.exact and trunc > self.trunc:
            raise SeriesError("cannot raise the truncation of a truncated series")
        terms = {k: v for k, v in self.terms.items() if k[0] + k[1] <= trunc}
        exact = self.exact and self.total_degree <= trunc
        return Series2._make(terms, trunc, exact, self.level)

    def _align(self, other: "Series2"):
        if other.level == self.level:
            return self, other
        n = common_level(self.level, other.level)
        return self.at_level(n), other.at_level(n)

    def __add__(self, other):
        if not isinstance(other, Series2):
            other = Series2.constant(other, trunc=self.trunc)
        a, b = self._align(other)
        t = min(a.trunc, b.trunc)
        out = {k: v for k, v in a.terms.items() if k[0] + k[1] <= t}
        for k, v in b.terms.items():
            if k[0] + k[1] > t:
                continue
            if k in out:
                s = out[k] + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        exact = a.exact and b.exact and max(a.total_degree, b.total_degree) <= t
        return Series2._make(out, t, exact, a.level)

    __radd__ = __add__

    def __neg__(self):
        return Series2._make({k: -v for k, v in self.terms.items()}, self.trunc, self.exact, self.level)

    def __sub__(self, other):
        if not isinstance(other, Series2):
            other = Series2.constant(other, trunc=self.trunc)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series2":
        if not isinstance(c, CycloNumber):
            c = _as_cyclo(c, self.level)
        n = common_level(self.level, c.level)
        s = self.at_level(n)
        c = _as_cyclo(c, n)
        if c.is_zero():
            return Series2._make({}, s.trunc, s.exact, n)
        return Series2._make({k: c * v for k, v in s.terms.items()}, s.trunc, s.exact, n)

    def __mul__(self, other):
        if not isinstance(other, Series2):
            return self.scale(other)
        a, b = self._align(other)
        t = min(a.trunc, b.trunc)
        out = _mul2(a.terms, b.terms, t)
        exact = a.exact and b.exact and (a.total_degree + b.total_degree) <= t
        return Series2._make(out, t, exact, a.level)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, m: int) -> "Series2":
        result = Series2.constant(1, trunc=self.trunc).at_level(self.level)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        if self.trunc != other.trunc or self.exact != other.exact:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(v == other.terms[k] for k, v in self.terms.items())

    def agrees_with(self, other: "Series2", through: int) -> bool:
        keys = set(self.terms) | set(other.terms)
        for a, b in keys:
            if a + b <= through and self.coeff(a, b) != other.coeff(a, b):
                return False
        return True

    def __repr__(self):
        from .textfmt import format_series2

        return f"Series2({format_series2(self)})"

    def partial(self, axis: str) -> "Series2":
        """Formal partial derivative in ``x`` or ``y``; truncation drops by one."""
        out = {}
        if axis == "x":
            for (a, b), v in self.terms.items():
                if a:
                    out[(a - 1, b)] = v * a
        elif axis == "y":
            for (a, b), v in self.terms.items():
                if b:
                    out[(a, b - 1)] = v * b
        else:
            raise SeriesError(f"axis must be 'x' or 'y', got {axis!r}")
        return Series2._make(out, self.trunc - 1, self.exact, self.level)

    def conj(self) -> "Series2":
        return Series2._make({k: v.conj() for k, v in self.terms.items()}, self.trunc, self.exact, self.level)

    def substitute(self, x_image: "Series2", y_image: "Series2") -> "Series2":
        """f(X(x,y), Y(x,y)) for X, Y without constant term."""
        if not x_image.const().is_zero() or not y_image.const().is_zero():
            raise SeriesError("substituted series must vanish at the origin")
        t = min(self.trunc, x_image.trunc, y_image.trunc)
        n = common_level(self.level, x_image.level, y_image.level)
        X, Y = x_image.at_level(n).with_trunc(t), y_image.at_level(n).with_trunc(t)
        xs = [Series2.constant(1, trunc=t).at_level(n)]
        ys = [xs[0]]
        maxa = max((a for a, _ in self.terms), default=0)
        maxb = max((b for _, b in self.terms), default=0)
        for _ in range(maxa):
            xs.append(xs[-1] * X)
        for _ in range(maxb):
            ys.append(ys[-1] * Y)
        acc = Series2._make({}, t, True, n)
        for (a, b), v in self.terms.items():
            if a + b <= t:
                acc = acc + (xs[a] * ys[b]).scale(v)
        exact = self.exact and X.exact and Y.exact and acc.exact
        return Series2._make(acc.terms, t, exact, n)

    def evaluate(self, x: complex, y: complex) -> complex:
        acc = 0j
        for (a, b), v in self.terms.items():
            acc += v.to_complex() * x**a * y**b
        return acc

    def degree_in(self, var: str) -> int:
        idx = 0 if var == "x" else 1
        return max((k[idx] for k in self.terms), default=-1)


def _mul2(a: dict, b: dict, t: int) -> dict:
    out: dict = {}
    bl = sorted(b.items(), key=lambda kv: kv[0][0] + kv[0][1])
    for (a1, b1), x in a.items():
        d1 = a1 + b1
        if d1 > t:
            continue
        for (a2, b2), y in bl:
            if d1 + a2 + b2 > t:
                break
            key = (a1 + a2, b1 + b2)
            v = x * y
            if key in out:
                out[key] = out[key] + v
            else:
                out[key] = v
    return {k: v for k, v in out.items() if not v.is_zero()}


def partial(s: Series2, which: str) -> Series2:
    return s.partial(which)


def from_univariate(s: Series1, lin: Series2) -> Series2:
    """Substitute a linear form (e.g. x + i*y) for z in a univariate series."""
    t = s.trunc
    n = common_level(s.level, lin.level)
    lin = lin.at_level(n).with_trunc(min(t, lin.trunc)) if lin.exact else lin.at_level(n)
    acc = Series2._make({}, t, True, n)
    power = Series2.constant(1, trunc=t).at_level(n)
    for k, c in enumerate(s.coeffs):
        if k:
            power = power * lin
        if not c.is_zero():
            acc = acc + power.scale(c)
    exact = s.exact and acc.exact
    return Series2._make(acc.terms, t, exact, n)
