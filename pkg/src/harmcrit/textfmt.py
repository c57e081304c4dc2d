"""Text formats for coefficients, series and germ descriptions.

Coefficients:  ``3``, ``-2/5``, ``(1/2, -3)`` (= 1/2 - 3i), ``zeta(8)^3`` and
parenthesized sums/products of those such as ``(1/2 + 3*zeta(12)^1)``.
Series:        ``z + (0, 1)*z^2 - 3/2*z^5 + O(z^9)`` or ``x^2 + y^2`` (bivariate).
Germs:         ``p = ...; q = ...``, ``pm: p = ...; m = 3``,
               ``f1 = ...; f2 = ...; at = x0,y0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .field import CycloNumber, as_root_of_unity, descend, lift_level, root_of_unity
from .series import DEFAULT_TRUNC, Series1, Series2

__all__ = [
    "ParseError",
    "GermSpec",
    "format_cyclo",
    "parse_coeff",
    "format_series1",
    "format_series2",
    "parse_series1",
    "parse_series2",
    "parse_germ_spec",
    "format_germ_spec",
]


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line = line
        self.column = col
        self.reason = message
        super().__init__(f"line {line}, column {col}: {message}")


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _fmt_rat(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _zeta(n: int, k: int) -> str:
    return f"zeta({n})" if k == 1 else f"zeta({n})^{k}"


def format_cyclo(x: CycloNumber) -> str:
    """Canonical text of a field element (independent of its storage level)."""
    x = descend(x)
    if x.is_rational():
        return _fmt_rat(x.to_fraction())
    if x.level == 4:
        re, im = x.coords
        return f"({_fmt_rat(re)}, {_fmt_rat(im)})"
    k = as_root_of_unity(x)
    if k is not None:
        return _zeta(x.level, k)
    parts = []
    for k, c in enumerate(x.coords):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = _fmt_rat(mag)
        elif mag == 1:
            body = _zeta(x.level, k)
        else:
            body = f"{_fmt_rat(mag)}*{_zeta(x.level, k)}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return "(" + " ".join(parts) + ")"


def _term(c: CycloNumber, mono: str, first: bool) -> str:
    """One signed term ``coef*mono``; ``mono`` empty for the constant."""
    neg = False
    if c.is_rational():
        r = c.to_fraction()
        neg = r < 0
        body = _fmt_rat(abs(r))
        if mono and abs(r) == 1:
            body = mono
        elif mono:
            body = f"{body}*{mono}"
    else:
        body = format_cyclo(c)
        if mono:
            body = f"{body}*{mono}"
    if first:
        return f"-{body}" if neg else body
    return (" - " if neg else " + ") + body


def _pow(var: str, k: int) -> str:
    return var if k == 1 else f"{var}^{k}"


def format_series1(s: Series1, var: str = "z") -> str:
    out = ""
    for k, c in enumerate(s.coeffs):
        if c.is_zero():
            continue
        out += _term(c, _pow(var, k) if k else "", not out)
    if not out:
        out = "0"
    if not s.exact:
        out += f" + O({var}^{s.trunc + 1})"
    return out


def _mono2(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append(_pow("x", a))
    if b:
        parts.append(_pow("y", b))
    return "*".join(parts)


def format_series2(s: Series2) -> str:
    out = ""
    for (a, b) in sorted(s.terms, key=lambda k: (k[0] + k[1], -k[0])):
        out += _term(s.terms[(a, b)], _mono2(a, b), not out)
    if not out:
        out = "0"
    if not s.exact:
        out += f" + O({s.trunc + 1})"
    return out


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, base: int = 0, full: str | None = None):
        self.text = text
        self.pos = 0
        self.base = base
        self.full = full if full is not None else text

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.full, self.base + (self.pos if pos is None else pos))

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def peek_word(self) -> str:
        self.ws()
        j = self.pos
        while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
            j += 1
        return self.text[self.pos:j]

    def take(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}, found {self.peek() or 'end of input'!r}")
        self.pos += 1

    def integer(self) -> int:
        self.ws()
        j = self.pos
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.pos:
            self.error(f"expected an integer, found {self.peek() or 'end of input'!r}")
        val = int(self.text[self.pos:j])
        self.pos = j
        return val

    def at_end(self) -> bool:
        return self.peek() == ""

    # coefficient expressions -----------------------------------------------

    def c_factor(self) -> CycloNumber:
        ch = self.peek()
        if ch.isdigit():
            n = self.integer()
            if self.peek() == "/":
                start = self.pos
                self.pos += 1
                d = self.integer()
                if d == 0:
                    self.error("zero denominator", start)
                return CycloNumber.from_rational(Fraction(n, d))
            return CycloNumber.from_rational(n)
        if ch == "(":
            self.pos += 1
            first = self.c_expr()
            if self.peek() == ",":
                self.pos += 1
                second = self.c_expr()
                self.take(")")
                n = math.lcm(first.level, second.level)
                i = root_of_unity(1, 4, n)
                return lift_level(first, n) + lift_level(second, n) * i
            self.take(")")
            return first
        if self.peek_word() == "zeta":
            self.pos += 4
            self.take("(")
            start = self.pos
            order = self.integer()
            if order <= 0:
                self.error("root of unity order must be positive", start)
            self.take(")")
            k = 1
            if self.peek() == "^":
                self.pos += 1
                k = self.integer()
            level = math.lcm(4, order)
            return root_of_unity(k, order, level)
        self.error(f"expected a coefficient, found {ch or 'end of input'!r}")

    def c_term(self) -> CycloNumber:
        val = self.c_factor()
        while self.peek() == "*":
            self.pos += 1
            val = val * self.c_factor()
        return val

    def c_expr(self) -> CycloNumber:
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        val = self.c_term() * sign
        while self.peek() and self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            val = val + self.c_term() * sign
        return val

    # series ----------------------------------------------------------------

    def _is_var(self, variables: str) -> bool:
        w = self.peek_word()
        return len(w) == 1 and w in variables

    def monomial(self, variables: str) -> tuple[int, ...]:
        exps = [0] * len(variables)
        start = self.pos
        while True:
            self.ws()
            vpos = self.pos
            v = self.peek_word()
            idx = variables.index(v)
            self.pos += 1
            k = 1
            if self.peek() == "^":
                self.pos += 1
                k = self.integer()
            if exps[idx]:
                self.error(f"variable {v!r} repeated in a monomial", vpos)
            if k == 0:
                self.error("zero exponent", vpos)
            exps[idx] = k
            save = self.pos
            if self.peek() == "*":
                self.pos += 1
                if self._is_var(variables):
                    continue
                self.pos = save
            break
        del start
        return tuple(exps)

    def series_terms(self, variables: str):
        """Yield (position, exponent tuple, coefficient) and an optional O-term."""
        terms = []
        big_o = None
        sign = 1
        if self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            self.ws()
            tpos = self.pos
            if self.peek_word() == "O":
                self.pos += 1
                self.take("(")
                if self._is_var(variables):
                    big_o = sum(self.monomial(variables))
                else:
                    big_o = self.integer()
                self.take(")")
                if sign < 0:
                    self.error("O-term cannot be negated", tpos)
            elif self._is_var(variables):
                terms.append((tpos, self.monomial(variables), CycloNumber.from_rational(sign)))
            else:
                c = self.c_term_before_monomial(variables)
                exps = (0,) * len(variables)
                if self.peek() == "*":
                    self.pos += 1
                    if not self._is_var(variables):
                        self.error("expected a monomial after '*'")
                    exps = self.monomial(variables)
                terms.append((tpos, exps, c * sign))
            nxt = self.peek()
            if nxt in ("+", "-") and nxt:
                if big_o is not None:
                    self.error("O-term must be the last term")
                sign = -1 if nxt == "-" else 1
                self.pos += 1
                continue
            break
        return terms, big_o

    def c_term_before_monomial(self, variables: str) -> CycloNumber:
        val = self.c_factor()
        while self.peek() == "*":
            save = self.pos
            self.pos += 1
            if self._is_var(variables):
                self.pos = save
                break
            val = val * self.c_factor()
        return val


def parse_coeff(text: str) -> CycloNumber:
    ps = _Parser(text)
    val = ps.c_expr()
    if not ps.at_end():
        ps.error(f"unexpected {ps.peek()!r}")
    return val


def _collect(ps: _Parser, terms) -> dict:
    out: dict = {}
    for pos, exps, c in terms:
        if exps in out:
            ps.error("duplicate monomial", pos)
        out[exps] = c
    return out


def _parse_series(text: str, variables: str, trunc: int | None, base: int, full: str | None):
    ps = _Parser(text, base, full)
    if ps.at_end():
        ps.error("empty series")
    terms, big_o = ps.series_terms(variables)
    if not ps.at_end():
        ps.error(f"unexpected {ps.peek()!r}")
    coeffs = _collect(ps, terms)
    coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
    if big_o is not None:
        if big_o < 1:
            ps.error("O-term degree must be positive")
        if trunc is not None and trunc < big_o - 1:
            t, exact = trunc, False
        else:
            t, exact = big_o - 1, False
        if any(sum(k) > t for k in coeffs) and trunc is None:
            ps.error("term above the O-term degree")
    else:
        deg = max((sum(k) for k in coeffs), default=0)
        t = trunc if trunc is not None else max(DEFAULT_TRUNC, deg)
        exact = True
    return coeffs, t, exact


def parse_series1(text: str, trunc: int | None = None, *, _base: int = 0, _full: str | None = None) -> Series1:
    coeffs, t, exact = _parse_series(text, "z", trunc, _base, _full)
    deg = max((k[0] for k in coeffs), default=-1)
    vals = [coeffs.get((k,), 0) for k in range(deg + 1)]
    return Series1(vals, trunc=t, exact=exact)


def parse_series2(text: str, trunc: int | None = None, *, _base: int = 0, _full: str | None = None) -> Series2:
    coeffs, t, exact = _parse_series(text, "xy", trunc, _base, _full)
    return Series2(coeffs, trunc=t, exact=exact)


# ---------------------------------------------------------------------------
# germ descriptions
# ---------------------------------------------------------------------------


@dataclass
class GermSpec:
    """Parsed germ text.  ``kind`` is "harmonic", "pm" or "analytic"."""

    kind: str
    p: Series1 | None = None
    q: Series1 | None = None
    m: int | None = None
    f1: Series2 | None = None
    f2: Series2 | None = None
    at: tuple = ()


def _fields(text: str):
    """Split ``name = value`` items separated by ';' with their offsets."""
    items = []
    pos = 0
    for chunk in text.split(";"):
        seg_start = pos
        pos += len(chunk) + 1
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise ParseError("expected 'name = value'", text, seg_start + len(chunk) - len(chunk.lstrip()))
        name, _, value = chunk.partition("=")
        value_off = seg_start + len(name) + 1
        items.append((name.strip(), value, value_off, seg_start + len(name) - len(name.lstrip())))
    return items


def parse_germ_spec(text: str, trunc: int | None = None) -> GermSpec:
    body = text
    offset = 0
    kind = None
    stripped = text.lstrip()
    if stripped.startswith("pm:"):
        kind = "pm"
        offset = len(text) - len(stripped) + 3
        body = text[offset:]
    items = _fields(body)
    seen = set()
    for name, _, _, npos in items:
        if name in seen:
            raise ParseError(f"field {name!r} given twice", text, offset + npos)
        seen.add(name)
    if kind is None:
        if "f1" in seen or "f2" in seen:
            kind = "analytic"
        elif "p" in seen or "q" in seen:
            kind = "harmonic"
        else:
            raise ParseError("expected fields p/q or f1/f2", text, 0)
    allowed = {"harmonic": {"p", "q", "at"}, "pm": {"p", "m"}, "analytic": {"f1", "f2", "at"}}[kind]
    required = {"harmonic": {"p", "q"}, "pm": {"p", "m"}, "analytic": {"f1", "f2"}}[kind]
    for name, _, _, npos in items:
        if name not in allowed:
            raise ParseError(f"unknown field {name!r}", text, offset + npos)
    missing = required - seen
    if missing:
        raise ParseError(f"missing field(s) {', '.join(sorted(missing))}", text, len(text))
    spec = GermSpec(kind)
    for name, value, voff, _ in items:
        base = offset + voff
        if name in ("p", "q"):
            setattr(spec, name, parse_series1(value, trunc, _base=base, _full=text))
        elif name in ("f1", "f2"):
            setattr(spec, name, parse_series2(value, trunc, _base=base, _full=text))
        elif name == "m":
            ps = _Parser(value, base, text)
            m = ps.integer()
            if not ps.at_end():
                ps.error(f"unexpected {ps.peek()!r}")
            if m < 1:
                ps.error("m must be positive")
            spec.m = m
        elif name == "at":
            parts = value.split(",")
            want = 2 if kind == "analytic" else 1
            if kind == "harmonic" and len(parts) == 2:
                want = 2
            if len(parts) != want:
                raise ParseError(f"'at' needs {want} value(s)", text, base)
            vals = []
            sub = 0
            for part in parts:
                ps = _Parser(part, base + sub, text)
                v = ps.c_expr()
                if not ps.at_end():
                    ps.error(f"unexpected {ps.peek()!r}")
                vals.append(v)
                sub += len(part) + 1
            if kind == "analytic" and not all(v.is_rational() for v in vals):
                raise ParseError("analytic base point must be rational", text, base)
            spec.at = tuple(vals)
    return spec


def format_germ_spec(spec: GermSpec) -> str:
    def at_text():
        if not spec.at or all(v.is_zero() for v in spec.at):
            return ""
        return "; at = " + ",".join(format_cyclo(v) for v in spec.at)

    if spec.kind == "pm":
        return f"pm: p = {format_series1(spec.p)}; m = {spec.m}"
    if spec.kind == "harmonic":
        return f"p = {format_series1(spec.p)}; q = {format_series1(spec.q)}" + at_text()
    return f"f1 = {format_series2(spec.f1)}; f2 = {format_series2(spec.f2)}" + at_text()
