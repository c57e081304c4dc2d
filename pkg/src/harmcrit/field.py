"""Exact arithmetic in cyclotomic fields Q(zeta_N) with 4 | N.

An element is stored as an integer coordinate vector over a common positive
denominator, in the power basis 1, zeta, ..., zeta^(phi(N)-1).  The vector is
the reduced residue modulo the N-th cyclotomic polynomial, so equality and the
zero test are coordinate-wise.

Elements of different levels may be combined; both operands are first lifted
to the lcm of their levels.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "MAX_LEVEL",
    "as_root_of_unity",
    "descend",
    "CycloNumber",
    "FieldError",
    "make_gaussian",
    "make_rational",
    "root_of_unity",
    "field_inv",
    "unit_modulus_test",
    "lift_level",
    "common_level",
    "field_root",
]

MAX_LEVEL = 1024


class FieldError(ValueError):
    """Invalid level, division by zero or a non-representable request."""


# ---------------------------------------------------------------------------
# level data
# ---------------------------------------------------------------------------


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # den is monic with integer coefficients
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            out[k - dn] = c
            for t in range(dn + 1):
                num[k - dn + t] -= c * den[t]
    assert not any(num[:dn]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


class _Level:
    __slots__ = ("n", "d", "red", "conj_rows", "trace_row", "_powers")

    def __init__(self, n: int):
        phi = cyclotomic_poly(n)
        d = len(phi) - 1
        self.n = n
        self.d = d
        # red[k] = zeta^k reduced, for 0 <= k < max(2d - 1, n)
        rows = []
        cur = [1] + [0] * (d - 1)
        for _ in range(max(2 * d - 1, n)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for t in range(d):
                    cur[t] -= top * phi[t]
        self.red = rows
        self._powers = rows
        self.conj_rows = [rows[(-k) % n] for k in range(d)]
        # Tr(zeta^k)/phi(n) = mobius(n/g)/phi(n/g), g = gcd(k, n)
        self.trace_row = []
        for k in range(d):
            c = n // math.gcd(k, n)
            self.trace_row.append(Fraction(_mobius(c), _euler_phi(c)) if c > 1 else Fraction(1))

    def power_row(self, e: int) -> tuple[int, ...]:
        return self._powers[e % self.n]


@lru_cache(maxsize=None)
def _level(n: int) -> _Level:
    _check_level(n)
    return _Level(n)


def _check_level(n: int) -> None:
    if not isinstance(n, int) or n <= 0 or n % 4:
        raise FieldError(f"level must be a positive multiple of 4, got {n!r}")
    if n > MAX_LEVEL:
        raise FieldError(f"level {n} exceeds the height guard {MAX_LEVEL}")


def _euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def _mobius(n: int) -> int:
    sign, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1
    return -sign if n > 1 else sign


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-a for a in nums]
        den = -den
    g = math.gcd(den, *nums)
    if g != 1:
        nums = [a // g for a in nums]
        den //= g
    return tuple(nums), den


class CycloNumber:
    """Immutable element of Q(zeta_level)."""

    __slots__ = ("level", "nums", "den", "_hash")

    def __init__(self, level: int, coords, den: int = 1):
        lv = _level(level)
        if len(coords) != lv.d:
            raise FieldError(f"level {level} needs {lv.d} coordinates, got {len(coords)}")
        if den == 1 and all(type(c) is int for c in coords):
            nums, den = tuple(coords), 1
        else:
            fr = [Fraction(c) / den for c in coords]
            den = math.lcm(*(f.denominator for f in fr))
            nums = [f.numerator * (den // f.denominator) for f in fr]
            nums, den = _normalize(nums, den)
        self.level = level
        self.nums = nums
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, level: int, nums, den: int) -> "CycloNumber":
        obj = object.__new__(cls)
        obj.level = level
        obj.nums, obj.den = _normalize(nums, den)
        obj._hash = None
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, level: int = 4) -> "CycloNumber":
        return cls._raw(level, [0] * _level(level).d, 1)

    @classmethod
    def one(cls, level: int = 4) -> "CycloNumber":
        return cls.from_rational(1, level)

    @classmethod
    def from_rational(cls, r, level: int = 4) -> "CycloNumber":
        r = Fraction(r)
        nums = [0] * _level(level).d
        nums[0] = r.numerator
        return cls._raw(level, nums, r.denominator)

    # -- inspection ----------------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise FieldError(f"{self!r} is not rational")
        return Fraction(self.nums[0], self.den)

    def to_complex(self) -> complex:
        n = self.level
        z = 0j
        for k, a in enumerate(self.nums):
            if a:
                z += a * cmath.exp(2j * math.pi * k / n)
        return z / self.den

    __complex__ = to_complex

    # -- coercion ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloNumber):
            if other.level == self.level:
                return self, other
            n = math.lcm(self.level, other.level)
            return lift_level(self, n), lift_level(other, n)
        if isinstance(other, (int, Rational)):
            return self, CycloNumber.from_rational(other, self.level)
        return NotImplemented

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if type(other) is CycloNumber and other.level == self.level:
            a, b = self, other
        else:
            pair = self._coerce(other)
            if pair is NotImplemented:
                return NotImplemented
            a, b = pair
        if a.den == b.den:
            nums = [x + y for x, y in zip(a.nums, b.nums)]
            return CycloNumber._raw(a.level, nums, a.den)
        da, db = a.den, b.den
        nums = [x * db + y * da for x, y in zip(a.nums, b.nums)]
        return CycloNumber._raw(a.level, nums, da * db)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(CycloNumber)
        obj.level = self.level
        obj.nums = tuple(-a for a in self.nums)
        obj.den = self.den
        obj._hash = None
        return obj

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is CycloNumber and other.level == self.level:
            a, b = self, other
        else:
            pair = self._coerce(other)
            if pair is NotImplemented:
                return NotImplemented
            a, b = pair
        an, bn = a.nums, b.nums
        d = len(an)
        if d == 2 and a.level == 4:
            a0, a1 = an
            b0, b1 = bn
            return CycloNumber._raw(4, (a0 * b0 - a1 * b1, a0 * b1 + a1 * b0), a.den * b.den)
        if not any(an[1:]):
            c = an[0]
            return CycloNumber._raw(a.level, [c * y for y in bn], a.den * b.den)
        if not any(bn[1:]):
            c = bn[0]
            return CycloNumber._raw(a.level, [c * x for x in an], a.den * b.den)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        prod[i + j] += x * y
        res = prod[:d]
        red = _level(a.level).red
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = red[k]
                for t in range(d):
                    if row[t]:
                        res[t] += c * row[t]
        return CycloNumber._raw(a.level, res, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return self * (1 / other)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * field_inv(other)

    def __rtruediv__(self, other):
        return field_inv(self) * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return field_inv(self) ** (-e)
        result = CycloNumber.one(self.level)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conj(self) -> "CycloNumber":
        """Complex conjugation, zeta -> zeta^(N-1)."""
        lv = _level(self.level)
        d = lv.d
        res = [0] * d
        for k, a in enumerate(self.nums):
            if a:
                row = lv.conj_rows[k]
                for t in range(d):
                    if row[t]:
                        res[t] += a * row[t]
        return CycloNumber._raw(self.level, res, self.den)

    def norm_sq(self) -> "CycloNumber":
        return self * self.conj()

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycloNumber):
            if other.level != self.level:
                a, b = self._coerce(other)
                return a.nums == b.nums and a.den == b.den
            return self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            # normalized trace Tr(x)/phi(N) does not depend on the level
            tr = _level(self.level).trace_row
            self._hash = hash(sum(a * t for a, t in zip(self.nums, tr)) / self.den)
        return self._hash

    def __repr__(self):
        from .textfmt import format_cyclo

        return f"CycloNumber({format_cyclo(self)} @ {self.level})"


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def make_rational(r, level: int = 4) -> CycloNumber:
    return CycloNumber.from_rational(r, level)


def make_gaussian(re, im, level: int = 4) -> CycloNumber:
    """re + im*i embedded at ``level`` (i = zeta_level^(level/4))."""
    _check_level(level)
    lv = _level(level)
    row = lv.power_row(level // 4)
    re, im = Fraction(re), Fraction(im)
    den = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
    nums = [im.numerator * (den // im.denominator) * c for c in row]
    nums[0] += re.numerator * (den // re.denominator)
    return CycloNumber._raw(level, nums, den)


def root_of_unity(k: int, order: int, level: int) -> CycloNumber:
    """zeta_level^(k*level/order), an order-th root of unity."""
    _check_level(level)
    if order <= 0 or level % order:
        raise FieldError(f"order {order} does not divide level {level}")
    row = _level(level).power_row(k * (level // order))
    return CycloNumber._raw(level, list(row), 1)


def lift_level(x: CycloNumber, new_level: int) -> CycloNumber:
    """Canonical embedding Q(zeta_N) -> Q(zeta_M) for N | M."""
    if new_level == x.level:
        return x
    _check_level(new_level)
    if new_level % x.level:
        raise FieldError(f"level {x.level} does not divide {new_level}")
    lv = _level(new_level)
    step = new_level // x.level
    res = [0] * lv.d
    for k, a in enumerate(x.nums):
        if a:
            row = lv.power_row(k * step)
            for t in range(lv.d):
                if row[t]:
                    res[t] += a * row[t]
    return CycloNumber._raw(new_level, res, x.den)


def common_level(*levels: int) -> int:
    n = 4
    for lv in levels:
        n = math.lcm(n, lv)
    _check_level(n)
    return n


def _qpoly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead
        shift = len(a) - len(b)
        q[shift] = c
        for t, bt in enumerate(b):
            a[shift + t] -= c * bt
        _qpoly_trim(a)
    return q, a


def _qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qpoly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    return _qpoly_trim([Fraction(c) for c in out])


def field_inv(x: CycloNumber) -> CycloNumber:
    """Multiplicative inverse via extended gcd with the cyclotomic polynomial."""
    if x.is_zero():
        raise ZeroDivisionError("division by zero in cyclotomic field")
    if x.is_rational():
        return CycloNumber.from_rational(Fraction(x.den, x.nums[0]), x.level)
    if x.level == 4:
        a, b = x.nums
        n2 = a * a + b * b
        return CycloNumber._raw(4, [a * x.den, -b * x.den], n2)
    phi = [Fraction(c) for c in cyclotomic_poly(x.level)]
    a = _qpoly_trim([Fraction(c, x.den) for c in x.nums])
    # invariant: s * a = r  (mod phi)
    r0, r1 = phi, a
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, rem = _qpoly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(q, s1))
    c = r1[0]
    s = [v / c for v in s1]
    _, s = _qpoly_divmod(s, phi) if len(s) >= len(phi) else (None, s)
    d = _euler_phi(x.level)
    coords = [s[k] if k < len(s) else Fraction(0) for k in range(d)]
    return CycloNumber(x.level, coords)


def unit_modulus_test(x: CycloNumber) -> bool:
    """Whether x * conj(x) == 1 exactly."""
    return x.norm_sq() == 1


def _rational_root(r: Fraction, k: int) -> Fraction | None:
    if r < 0:
        return None
    num = _int_root(r.numerator, k)
    den = _int_root(r.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(n: int, k: int) -> int | None:
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def field_root(x: CycloNumber, k: int, max_level: int = MAX_LEVEL) -> CycloNumber | None:
    """A k-th root of x of the form r * omega (r rational, omega a root of unity).

    Returns None when no such root exists in any cyclotomic field of level at
    most ``max_level``.  Other k-th roots are not searched for.
    """
    if k == 1:
        return x
    if x.is_zero():
        return x
    n2 = x.norm_sq()
    if not n2.is_rational():
        return None
    r = _rational_root(n2.to_fraction(), 2 * k)
    if r is None or r == 0:
        return None
    u = x / (r**k)  # unit modulus
    # find the order of u in its field
    order = None
    for e in range(1, x.level + 1):
        if x.level % e:
            continue
        if u**e == 1:
            order = e
            break
    if order is None:
        return None
    level = math.lcm(x.level, 4, order * k)
    if level > max_level:
        return None
    u = lift_level(u, level)
    for j in range(level):
        w = root_of_unity(j, level, level)
        if w**k == u:
            return w * r
    return None


def _solve_in_span(rows: list[tuple[int, ...]], target: list[Fraction]) -> list[Fraction] | None:
    """Coefficients c with sum c_k rows[k] = target, or None."""
    d = len(target)
    k = len(rows)
    # augmented system: columns are the rows, one equation per coordinate
    mat = [[Fraction(rows[c][t]) for c in range(k)] + [target[t]] for t in range(d)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, d) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(d):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    if any(mat[i][k] for i in range(r, d)):
        return None
    sol = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        sol[c] = mat[i][k]
    return sol


def descend(x: CycloNumber) -> CycloNumber:
    """The same value at the smallest level (multiple of 4) that contains it."""
    n = x.level
    if x.is_rational():
        return CycloNumber.from_rational(Fraction(x.nums[0], x.den), 4)
    target = [Fraction(a, x.den) for a in x.nums]
    lv = _level(n)
    for m in sorted(d for d in range(4, n, 4) if n % d == 0):
        dm = _euler_phi(m)
        step = n // m
        sol = _solve_in_span([lv.power_row(k * step) for k in range(dm)], target)
        if sol is not None:
            return CycloNumber(m, sol)
    return x


def as_root_of_unity(x: CycloNumber) -> int | None:
    """k with x = zeta_level^k, if x is such a root of unity."""
    lv = _level(x.level)
    if x.den != 1:
        return None
    for k in range(x.level):
        if lv.power_row(k) == x.nums:
            return k
    return None
