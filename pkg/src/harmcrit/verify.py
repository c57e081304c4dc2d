"""Seeded random germs and the property harness behind ``harmcrit verify``."""

from __future__ import annotations

import random
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction

from .analytic import AnalyticGerm, j_via_Mn, mu_regular, regular_test
from .field import CycloNumber, common_level, field_inv, make_gaussian, root_of_unity
from .harmonic import (HarmonicGerm, SmoothCriticalRejection, classify_model, j_invariant,
                       mu_order_sum, mu_relation_fastpath, smooth_critical_test, to_analytic)
from .harmonic.germ import complexify
from .intersection import local_intersection, mu_complexified
from .series import OrderValue, Series1, Series2, compose

__all__ = [
    "GermDraw",
    "random_coefficient",
    "random_pm_germ",
    "random_regular_analytic",
    "random_chain_base",
    "run_verify",
    "VerifySummary",
]

_LEVELS = (4, 8, 12)


def _rat(rng: random.Random, allow_zero: bool = True) -> Fraction:
    while True:
        num = rng.randint(-9, 9)
        if num or allow_zero:
            return Fraction(num, rng.randint(1, 9))


def random_coefficient(rng: random.Random, level: int = 4) -> CycloNumber:
    """A bounded-height Gaussian rational, sometimes rotated by a root of unity of the level."""
    c = make_gaussian(_rat(rng), _rat(rng), level)
    if level > 4 and rng.random() < 0.5:
        c = c * root_of_unity(rng.randrange(level), level, level)
    return c


def _degenerate_b(rng: random.Random, m: int) -> CycloNumber:
    """A unit b with (-b^2)^m = 1, so the relation shortcut does not apply."""
    # -b^2 = w with w^m = 1  <=>  b = i * sqrt(w)
    level = common_level(4, 2 * m)
    k = rng.randrange(2 * m)
    s = root_of_unity(k, 2 * m, level)  # s^2 is an m-th root of unity
    return root_of_unity(1, 4, level) * s


@dataclass(frozen=True)
class GermDraw:
    p: Series1
    m: int
    degenerate_b: bool


def random_pm_germ(rng: random.Random, max_degree: int = 5, max_m: int = 3,
                   trunc: int = 64) -> GermDraw:
    """p tangent to the identity with deg p <= max_degree; the germ is p^m - conj(z)^m."""
    m = rng.randint(1, max_m)
    level = rng.choice(_LEVELS)
    deg = rng.randint(2, max(2, max_degree))
    cs = [CycloNumber.zero(level), CycloNumber.one(level)]
    cs += [random_coefficient(rng, level) for _ in range(2, deg + 1)]
    degenerate = rng.random() < 0.35
    if degenerate:
        b = _degenerate_b(rng, m)
        n = common_level(level, b.level)
        cs = [c.__class__.zero(n) if c.is_zero() else c for c in cs]
        cs[2] = b
    p = Series1(cs, trunc=trunc)
    return GermDraw(p, m, degenerate)


def random_regular_analytic(rng: random.Random, max_degree: int = 4, trunc: int = 24) -> AnalyticGerm:
    """A real-analytic germ (f1, f2) with a regular critical point at 0.

    f1 = x + (rational terms), f2 = y^2 + (terms of total degree >= 2) with a
    random extra y term suppressed so that the Jacobian vanishes at 0.
    """
    while True:
        t1: dict = {(1, 0): 1}
        t2: dict = {}
        for a in range(max_degree + 1):
            for b in range(max_degree + 1 - a):
                if a + b < 2:
                    continue
                if rng.random() < 0.4:
                    t1[(a, b)] = _rat(rng)
                if rng.random() < 0.5:
                    t2[(a, b)] = _rat(rng)
        t2[(1, 0)] = 0
        f1 = Series2({k: v for k, v in t1.items() if v}, trunc=trunc)
        f2 = Series2({k: v for k, v in t2.items() if v}, trunc=trunc)
        if f2.is_zero():
            continue
        g = AnalyticGerm(f1, f2)
        if regular_test(g):
            return g


def random_chain_base(rng: random.Random, max_degree: int = 5, trunc: int = 64) -> Series1:
    """p = z + i z^2 + O(z^3) with random higher terms."""
    i = root_of_unity(1, 4, 4)
    deg = rng.randint(3, max(3, max_degree))
    cs = [CycloNumber.zero(4), CycloNumber.one(4), i] + [random_coefficient(rng) for _ in range(3, deg + 1)]
    return Series1(cs, trunc=trunc)


# ---------------------------------------------------------------------------
# property harness
# ---------------------------------------------------------------------------


@dataclass
class VerifySummary:
    counts: OrderedDict = field(default_factory=OrderedDict)  # name -> [passed, failed]
    rejected: int = 0
    infinite: int = 0
    failures: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        c = self.counts.setdefault(name, [0, 0])
        c[0 if ok else 1] += 1
        if not ok:
            self.failures.append(f"{name}: {detail}")

    @property
    def all_passed(self) -> bool:
        return all(f == 0 for _, f in self.counts.values())

    def lines(self) -> list[str]:
        out = []
        for name, (ok, bad) in self.counts.items():
            out.append(f"{'PASS' if bad == 0 else 'FAIL'} {name}: {ok} passed, {bad} failed")
        out.append(f"rejected draws: {self.rejected}")
        out.append(f"infinite-mu draws: {self.infinite}")
        out.append("result: " + ("all properties pass" if self.all_passed else "FAILURES"))
        return out


def _check(summary: VerifySummary, name: str, fn) -> None:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash counts as a failure of that property
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    summary.record(name, ok, detail)


def _draw_smooth(rng: random.Random, summary: VerifySummary, max_degree: int, max_m: int):
    while True:
        d = random_pm_germ(rng, max_degree, max_m)
        g = HarmonicGerm.pm(d.p, d.m)
        try:
            smooth_critical_test(g)
        except SmoothCriticalRejection:
            summary.rejected += 1
            continue
        mu = mu_order_sum(d.p, d.m)
        if not mu.is_exact:
            summary.infinite += 1
            continue
        return d, g, mu


def run_verify(seed: int, cases: int, max_degree: int = 5, max_m: int = 3) -> VerifySummary:
    """Randomized checks of the exact identities; deterministic given the seed."""
    rng = random.Random(seed)
    s = VerifySummary()
    for _ in range(cases):
        d, g, mu = _draw_smooth(rng, s, max_degree, max_m)
        m = d.m

        def central():
            other = mu_complexified(*complexify(g))
            j = mu.k - m * m
            return other == mu and j >= m, f"p = {d.p}, m = {m}: order sum {mu}, intersection {other}"

        def fastpath():
            fp = mu_relation_fastpath(d.p, m)
            return fp == mu, f"p = {d.p}, m = {m}: fast path {fp}, order sum {mu}"

        def invariance():
            c = root_of_unity(rng.randrange(2 * m), 2 * m, common_level(d.p.level, 2 * m))
            # p -> c^-1 p(c z); c^(2m) = 1 keeps the anti-holomorphic part fixed
            lin = Series1([0, c], trunc=d.p.trunc)
            p2 = compose(d.p, lin).scale(field_inv(c))
            r1, r2 = j_invariant(g), j_invariant(HarmonicGerm.pm(p2, m))
            same = (r1.m, r1.mu, r1.j) == (r2.m, r2.mu, r2.j)
            return same, f"c = {c}: {r1.mu} vs {r2.mu}"

        def model():
            j = mu.k - m * m
            t = classify_model(m, j)
            ok = ((t.degree_abs == 0) == ((m + j) % 2 == 0)
                  and (len(t.candidates) == 1) == ((m - j) % 2 == 0)
                  and t.fiber_counts[0] - t.fiber_counts[1] == 2)
            return ok, f"m = {m}, j = {j}: {t}"

        _check(s, "central identity mu_order_sum = mu_complexified, j >= m", central)
        _check(s, "relation fast path = order sum", fastpath)
        _check(s, "root-of-unity rescaling keeps (m, mu, j)", invariance)
        _check(s, "model parity laws", model)

        if m == 1:
            def dual_j():
                rep = j_invariant(g)
                jr = j_via_Mn(_analytic_of(g, rep.j)).j
                return jr == rep.j, f"p = {d.p}: mu - 1 = {rep.j}, recursion {jr}"

            _check(s, "m = 1: j from mu equals j from the recursion", dual_j)

        a = random_regular_analytic(rng)

        def reals():
            tr = j_via_Mn(a, min_terms=5)
            two_i = root_of_unity(1, 4, a.level) * 2
            pairs = list(zip(tr.values, tr.l_values))[:5]
            ok = len(pairs) == 5 and all(mv == two_i**n * lv for n, (mv, lv) in enumerate(pairs, start=1))
            return ok, f"M = {tr.values[:5]}, L = {tr.l_values[:5]}"

        def regular_mu():
            tr = j_via_Mn(a)
            mu_a = mu_regular(a, tr)
            direct = local_intersection(a.f1, a.f2) if a.exact else None
            ok = direct is None or direct == mu_a or (direct.is_infinite and not mu_a.is_exact)
            return ok, f"recursion {mu_a}, intersection {direct}"

        _check(s, "M_n(0) = (2i)^n L_n(0)", reals)
        _check(s, "analytic mu = j + 1 against the intersection oracle", regular_mu)

        def chain():
            base = random_chain_base(rng, max_degree)
            mm = rng.choice([2, 3]) if max_m >= 2 else 2
            f = HarmonicGerm.pm(base, 1)
            gg = HarmonicGerm.pm(base, mm)
            rf, rg = j_invariant(f), j_invariant(gg)
            if not (rf.mu.is_exact and rg.mu.is_exact):
                return rf.mu.is_exact == rg.mu.is_exact, "finiteness differs"
            ok = rg.mu.k == rf.mu.k + mm * mm + mm - 2 and rg.j.k == rf.j.k + mm - 1
            return ok, f"p = {base}, m = {mm}: mu {rf.mu} -> {rg.mu}, j {rf.j} -> {rg.j}"

        _check(s, "chain mu(g) = mu(f) + m^2 + m - 2, j(g) = j(f) + m - 1", chain)

        def symmetry():
            F, G = complexify(g)
            return local_intersection(F, G) == local_intersection(G, F), "I(F, G) != I(G, F)"

        _check(s, "intersection symmetry", symmetry)
    return s


def _analytic_of(g: HarmonicGerm, j: OrderValue) -> AnalyticGerm:
    a = to_analytic(g)
    return a.with_trunc(min(a.trunc, j.k + 2)) if j.is_exact else a
