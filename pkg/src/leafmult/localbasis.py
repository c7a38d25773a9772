"""Local standard bases in two variables via Mora's tangent-cone normal form.

Leading terms are taken under the local order (1 largest, then lower total
degree first), so the staircase of leading monomials counts the dimension
of the local quotient ring.  The engine is specialized to two variables:
the leaf is two-dimensional everywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Optional, Sequence

from .errors import DomainError
from .ideals import Budget, MonomialOrder, leading_term, monic, staircase_count
from .poly import (
    Monomial,
    Polynomial,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
)

LOCAL_ORDER = MonomialOrder("local")


def _ecart(p: Polynomial, order: MonomialOrder) -> int:
    lm, _ = leading_term(p, order)
    return p.total_degree() - monomial_degree(lm)


def _struct_key(p: Polynomial):
    """Deterministic tie-break without stringifying coefficients (whose
    integers can be enormous on deep jets)."""
    return tuple(sorted(p.terms.items()))


def mora_normal_form(f: Polynomial, gens: Sequence[Polynomial],
                     budget: Optional[Budget] = None,
                     order: MonomialOrder = LOCAL_ORDER) -> Polynomial:
    """Mora's weak normal form: for some unit u, u*f - result lies in the
    ideal generated by gens (in the local ring).  Zero iff f is a member."""
    if budget is None:
        budget = Budget(cap=500_000, stage="mora")
    h = f
    pool = [g for g in gens if not g.is_zero()]
    while not h.is_zero():
        lm_h, lc_h = leading_term(h, order)
        divisors = [g for g in pool if monomial_divides(leading_term(g, order)[0], lm_h)]
        if not divisors:
            return h
        g = min(divisors, key=lambda q: (_ecart(q, order), q.total_degree(), _struct_key(q)))
        if _ecart(g, order) > _ecart(h, order):
            pool.append(h)
        lm_g, lc_g = leading_term(g, order)
        h = h - Polynomial.monomial(h.ring, monomial_div(lm_h, lm_g), lc_h / lc_g) * g
        budget.spend(1, "mora")
    return h


def mora_divide(f: Polynomial, divisors: Sequence[Polynomial],
                budget: Optional[Budget] = None,
                order: MonomialOrder = LOCAL_ORDER):
    """Mora reduction with cofactor tracking.

    Returns (remainder, u, quotients) with u*f = sum(quotients[i]*divisors[i])
    + remainder exactly, and u a unit of the local ring (nonzero constant
    term).  With a single divisor this realizes division of germs."""
    if budget is None:
        budget = Budget(cap=500_000, stage="mora divide")
    ring = f.ring
    one = Polynomial.constant(ring, 1)
    zero = Polynomial.zero(ring)
    divisors = list(divisors)
    # pool entries: (poly, u, quotient list)
    pool = [(g, zero, [one if i == j else zero for j in range(len(divisors))])
            for i, g in enumerate(divisors) if not g.is_zero()]
    h, u_h, q_h = f, one, [zero] * len(divisors)
    while not h.is_zero():
        lm_h, lc_h = leading_term(h, order)
        cands = [entry for entry in pool
                 if monomial_divides(leading_term(entry[0], order)[0], lm_h)]
        if not cands:
            break
        g, u_g, q_g = min(cands, key=lambda ent: (_ecart(ent[0], order),
                                                  ent[0].total_degree(),
                                                  _struct_key(ent[0])))
        if _ecart(g, order) > _ecart(h, order):
            pool.append((h, u_h, list(q_h)))
        lm_g, lc_g = leading_term(g, order)
        mfac = Polynomial.monomial(ring, monomial_div(lm_h, lm_g), lc_h / lc_g)
        h = h - mfac * g
        u_h = u_h - mfac * u_g
        q_h = [a - mfac * b for a, b in zip(q_h, q_g)]
        budget.spend(1, "mora divide")
    # u_h * f - sum(q_h * divisors) = remainder, with sign conventions below
    u = u_h
    quots = [-q for q in q_h]
    return h, u, quots


def standard_basis(gens: Sequence[Polynomial], budget: Optional[Budget] = None,
                   order: MonomialOrder = LOCAL_ORDER) -> list:
    """Buchberger loop with Mora normal form; no pair criteria beyond
    deduplication (the product criterion is unsafe for local orders)."""
    if budget is None:
        budget = Budget(cap=500_000, stage="standard basis")
    ring = None
    G: list[Polynomial] = []
    for g in gens:
        if g.is_zero():
            continue
        if ring is None:
            ring = g.ring
            if len(ring) != 2:
                raise DomainError("the local engine is specialized to two variables")
        G.append(monic(g, order))
    if not G:
        return []
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    while pairs:
        budget.spend(1, "standard basis", partial=list(G))
        def lcm_of(p):
            return monomial_lcm(leading_term(G[p[0]], order)[0],
                                leading_term(G[p[1]], order)[0])
        i, j = min(pairs, key=lambda p: (monomial_degree(lcm_of(p)), p))
        pairs.remove((i, j))
        lm_i, lc_i = leading_term(G[i], order)
        lm_j, lc_j = leading_term(G[j], order)
        l = monomial_lcm(lm_i, lm_j)
        s = (Polynomial.monomial(ring, monomial_div(l, lm_i), Fraction(1) / lc_i) * G[i]
             - Polynomial.monomial(ring, monomial_div(l, lm_j), Fraction(1) / lc_j) * G[j])
        h = mora_normal_form(s, G, budget, order)
        if not h.is_zero():
            G.append(monic(h, order))
            t = len(G) - 1
            pairs |= {(k, t) for k in range(t)}
    return _minimalize(G, order)


def _minimalize(G: list, order: MonomialOrder) -> list:
    out: list[Polynomial] = []
    for g in sorted(G, key=lambda q: order.key(leading_term(q, order)[0]), reverse=True):
        lg = leading_term(g, order)[0]
        if all(not monomial_divides(leading_term(h, order)[0], lg) for h in out):
            out.append(g)
    return out


def leading_staircase(basis: Sequence[Polynomial],
                      order: MonomialOrder = LOCAL_ORDER) -> tuple:
    """Minimal generators of the leading-term ideal of a standard basis."""
    monos = sorted({leading_term(g, order)[0] for g in basis},
                   key=lambda m: (monomial_degree(m), m))
    minimal = []
    for m in monos:
        if all(not monomial_divides(m2, m) for m2 in minimal):
            minimal.append(m)
    return tuple(minimal)


def local_quotient_dimension(gens: Sequence[Polynomial],
                             budget: Optional[Budget] = None):
    """dim of the local ring modulo the ideal of the (polynomial) germs;
    inf when the staircase is unbounded."""
    basis = standard_basis(gens, budget)
    if not basis:
        return inf
    lts = leading_staircase(basis)
    if any(monomial_degree(m) == 0 for m in lts):
        return 0
    return staircase_count(lts, 2)


@dataclass(frozen=True)
class StabilizationCertificate:
    """Evidence that a truncated local computation saw the whole staircase:
    the staircase agreed at two consecutive truncation orders and fits
    strictly inside the truncation box."""

    orders: tuple
    staircase: tuple
    multiplicity: object
    fits_strictly: bool

    def holds(self) -> bool:
        return self.fits_strictly and self.multiplicity is not inf


def staircase_at_order(polys: Sequence[Polynomial], budget: Optional[Budget] = None):
    """(staircase minimal generators, multiplicity) of the truncations."""
    basis = standard_basis(polys, budget)
    if not basis:
        return (), inf
    lts = leading_staircase(basis)
    if any(monomial_degree(m) == 0 for m in lts):
        return lts, 0
    return lts, staircase_count(lts, 2)
