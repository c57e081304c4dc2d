"""Multiplicity and critical value order of harmonic germs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..field import CycloNumber, common_level, root_of_unity, unit_modulus_test
from ..intersection import mu_complexified, truncated_intersection
from ..series import OrderValue, Series1, compose
from .germ import GermError, HarmonicGerm, complexify, smooth_critical_test, to_analytic

__all__ = [
    "mu_order_sum",
    "mu_relation_fastpath",
    "mu_general",
    "InvariantReport",
    "j_invariant",
    "compute_mu",
]


def _first_mismatch(C: Series1, eta: CycloNumber, upto: int) -> int | None:
    """Smallest k <= upto with [z^k](eta*C - z) != 0."""
    one = CycloNumber.one(C.level)
    for k in range(upto + 1):
        c = C.coeffs[k] * eta if k < len(C.coeffs) else None
        target = one if k == 1 else None
        if c is None or c.is_zero():
            if target is not None:
                return k
            continue
        if target is None or c != target:
            return k
    return None


def _summand_orders(p: Series1, xi: CycloNumber, etas: list[CycloNumber]) -> list[OrderValue]:
    """Ord(eta * conj(p)(xi * p(z)) - z) for each eta, refining the truncation as needed."""
    pb = p.conj()
    inner_full = p.scale(xi)
    exact_deg = max(p.degree, 1) ** 2 if p.exact else None
    limit = exact_deg if p.exact else p.trunc
    T = min(8, limit)
    pending = list(range(len(etas)))
    out: list[OrderValue | None] = [None] * len(etas)
    while pending:
        C = compose(pb.with_trunc(T), inner_full.with_trunc(T))
        still = []
        for idx in pending:
            k = _first_mismatch(C, etas[idx], T)
            if k is not None:
                out[idx] = OrderValue.exact(k)
            elif T >= limit:
                out[idx] = OrderValue.infinite() if p.exact else OrderValue.at_least(limit + 1)
            else:
                still.append(idx)
        pending = still
        T = min(2 * T, limit)
    return out  # type: ignore[return-value]


def _sum_orders(values) -> OrderValue:
    total = 0
    bounded = False
    for v in values:
        if v.is_infinite:
            return OrderValue.infinite()
        total += v.k
        bounded = bounded or v.is_at_least
    return OrderValue.at_least(total) if bounded else OrderValue.exact(total)


def _check_base(p: Series1, m: int) -> None:
    if m < 1:
        raise GermError("m must be positive")
    if not p.coeff(0).is_zero():
        raise GermError("p(0) must vanish")
    if p.exact and p.is_zero():
        raise GermError("p must not vanish identically")


def mu_order_sum(p: Series1, m: int) -> OrderValue:
    """Multiplicity of p^m - conj(z)^m as a sum over pairs of m-th roots of unity."""
    _check_base(p, m)
    n = common_level(p.level, m)
    p = p.at_level(n)
    roots = [root_of_unity(k, m, n) for k in range(m)]
    vals: list[OrderValue] = []
    for xi in roots:
        vals.extend(_summand_orders(p, xi, roots))
    if any(v.is_infinite for v in vals):
        # an identically vanishing summand; confirm with the complexified pair
        if p.exact:
            mu = mu_general(HarmonicGerm.pm(p, m))
            if not mu.is_infinite:
                raise AssertionError("order sum and intersection disagree on finiteness")
            return mu
        return OrderValue.at_least(p.trunc + 1)
    return _sum_orders(vals)


def mu_relation_fastpath(p: Series1, m: int) -> OrderValue:
    """Shortcut for p = z + b z^2 + ... with |b| = 1; otherwise the full order sum."""
    _check_base(p, m)
    b = p.coeff(2) if (p.exact or p.trunc >= 2) else None
    if b is None or p.coeff(1) != 1 or b.is_zero() or not unit_modulus_test(b):
        return mu_order_sum(p, m)
    w = -(b * b)
    if w**m != 1:
        return OrderValue.exact(m * m + m)
    (single,) = _summand_orders(p, w, [w.conj()])
    if single.is_infinite:
        return mu_order_sum(p, m)
    return single + (m - 1) * (m + 2)


def mu_general(g: HarmonicGerm) -> OrderValue:
    """Multiplicity of the complexified pair by local intersection."""
    if not g.exact:
        raise GermError("mu_general needs exact polynomials; use mu_order_sum for truncated input")
    F, G = complexify(g)
    return mu_complexified(F, G)


def compute_mu(g: HarmonicGerm) -> tuple[OrderValue, str]:
    """Best available multiplicity and the route used."""
    if g.base is not None:
        return mu_order_sum(g.base, g.power), "order-sum"
    if g.exact:
        return mu_general(g), "intersection"
    F, G = complexify(g)
    return truncated_intersection(F, G), "truncated-intersection"


@dataclass(frozen=True)
class InvariantReport:
    m: int
    mu: OrderValue
    j: OrderValue
    order_pair: tuple[OrderValue, OrderValue] | None  # None marks the degenerate case
    diagnostics: dict = field(default_factory=dict)


def _order_pair(j: OrderValue):
    if not j.is_exact:
        return None
    if j.k == 1:
        return (OrderValue.exact(1), OrderValue.infinite())
    return (j, j + 1)


def _j_from_mu(mu: OrderValue, m: int) -> OrderValue:
    if mu.is_infinite:
        return mu
    if mu.is_exact:
        return OrderValue.exact(mu.k - m * m)
    return OrderValue.at_least(max(mu.k - m * m, m))


def j_invariant(g: HarmonicGerm) -> InvariantReport:
    """Invariants (m, mu, j) and the order pair at a smooth critical point."""
    data = smooth_critical_test(g)
    m = data.m
    mu, route = compute_mu(g)
    j = _j_from_mu(mu, m)
    if j.is_exact and j.k < m:
        raise AssertionError(f"j = {j.k} < m = {m}")
    diag: dict = {"lambda": data.lam, "mu_route": route}
    if m == 1:
        from ..analytic import j_via_Mn

        # a jet of order j + 2 decides the recursion; bounded otherwise
        cap = j.k + 2 if j.is_exact else 16
        a = to_analytic(g)
        trace = j_via_Mn(a.with_trunc(min(a.trunc, cap)))
        jr = trace.j
        diag["j_recursion"] = jr
        if j.is_exact and jr.is_exact and j.k != jr.k:
            raise AssertionError(f"j from mu ({j.k}) != j from the recursion ({jr.k})")
        if j.is_exact and jr.is_at_least and j.k < jr.k:
            raise AssertionError("recursion bound exceeds j from mu")
        if jr.is_exact and not j.is_exact:
            if j.is_infinite or jr.k < j.k:
                raise AssertionError("recursion value contradicts the multiplicity bound")
            # the recursion pins j where the multiplicity was truncation-limited
            j = jr
            mu = OrderValue.exact(jr.k + 1)
            diag["mu_route"] = route + "+recursion"
    return InvariantReport(m, mu, j, _order_pair(j), diag)
