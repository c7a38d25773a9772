"""Groebner-basis machinery for global polynomial ideals.

Buchberger with the product and chain criteria (Gebauer-Moeller pair
update) and normal selection; exact arithmetic throughout.  Budgets guard
against blowup: on cap overrun a BudgetExceededError carries the partial
basis so callers can report where an example exceeded desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf
from typing import Optional, Sequence

from .errors import BudgetExceededError, DomainError
from .poly import (
    Monomial,
    Polynomial,
    gcd as poly_gcd,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
    normalize_leading,
    squarefree_part,
)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on a ring of fixed size.

    kinds: "degrevlex" and "lex" (global), "elim" (block order, the first
    `block` variables in comparison order are eliminated), "local"
    (negative degrevlex; 1 is the largest monomial).

    `permutation`, when given, lists ring indices in comparison order
    (first entry compares first / is the biggest variable).
    """

    kind: str = "degrevlex"
    permutation: Optional[tuple] = None
    block: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "elim", "local"):
            raise DomainError(f"unknown order kind {self.kind!r}")
        if self.kind == "elim" and self.block is None:
            raise DomainError("elimination order needs a block split index")

    def is_global(self) -> bool:
        return self.kind in ("degrevlex", "lex", "elim")

    def _arranged(self, mono: Monomial) -> tuple:
        if self.permutation is None:
            return tuple(mono)
        return tuple(mono[i] for i in self.permutation)

    def key(self, mono: Monomial):
        """Sort key: bigger key = bigger monomial."""
        e = self._arranged(mono)
        if self.kind == "degrevlex":
            return (sum(e), tuple(-x for x in reversed(e)))
        if self.kind == "lex":
            return e
        if self.kind == "elim":
            b = self.block
            hi, lo = e[:b], e[b:]
            return ((sum(hi), tuple(-x for x in reversed(hi))),
                    (sum(lo), tuple(-x for x in reversed(lo))))
        # local: lower total degree is larger
        return (-sum(e), tuple(-x for x in reversed(e)))

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")
LOCAL = MonomialOrder("local")


def elimination_order(ring_size: int, eliminate: Sequence[int]) -> MonomialOrder:
    """Block order eliminating the given variable indices."""
    eliminate = tuple(eliminate)
    rest = tuple(i for i in range(ring_size) if i not in eliminate)
    return MonomialOrder("elim", permutation=eliminate + rest, block=len(eliminate))


def leading_term(p: Polynomial, order: MonomialOrder):
    """(monomial, coefficient) of the largest term."""
    if p.is_zero():
        raise DomainError("leading term of zero")
    m = max(p.terms, key=order.key)
    return m, p.terms[m]


def leading_monomial(p: Polynomial, order: MonomialOrder) -> Monomial:
    return leading_term(p, order)[0]


def monic(p: Polynomial, order: MonomialOrder) -> Polynomial:
    if p.is_zero():
        return p
    _, c = leading_term(p, order)
    return p * (Fraction(1) / c)


class Budget:
    """Mutable step counter shared along one computation."""

    def __init__(self, cap: int = 200_000, stage: str = ""):
        self.cap = cap
        self.used = 0
        self.stage = stage

    def spend(self, n: int = 1, stage: str = "", partial=None):
        self.used += n
        if self.used > self.cap:
            raise BudgetExceededError(
                f"budget of {self.cap} steps exceeded" + (f" in {stage}" if stage else ""),
                stage=stage or self.stage,
                partial=partial,
            )


@dataclass(frozen=True)
class IdealPresentation:
    """A finite generator list.  Generators are nonzero, deduplicated and
    canonically sorted so equal presentations hash equal."""

    ring: tuple
    generators: tuple = ()

    def __post_init__(self):
        gens = []
        seen = set()
        for g in self.generators:
            if g.ring != self.ring:
                raise DomainError("generator ring does not match ideal ring")
            if g.is_zero():
                continue
            g = normalize_leading(g)
            if g not in seen:
                seen.add(g)
                gens.append(g)
        gens.sort(key=lambda p: (p.total_degree(), len(p.terms), str(p)))
        object.__setattr__(self, "generators", tuple(gens))

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def max_degree(self) -> int:
        return max((g.total_degree() for g in self.generators), default=-1)

    def extended(self, extra) -> "IdealPresentation":
        return IdealPresentation(self.ring, self.generators + tuple(extra))

    def vanishes_at(self, point) -> bool:
        return all(g.evaluate(point) == 0 for g in self.generators)

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


@dataclass(frozen=True)
class GroebnerStats:
    pairs_considered: int = 0
    reductions: int = 0
    max_degree: int = 0


@dataclass(frozen=True)
class GroebnerBasis:
    order: MonomialOrder
    basis: tuple
    reduced: bool = True
    stats: GroebnerStats = field(default_factory=GroebnerStats, compare=False)

    def leading_monomials(self):
        return [leading_monomial(g, self.order) for g in self.basis]

    def is_unit_ideal(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant() and not self.basis[0].is_zero()


def reduce_poly(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder,
                budget: Optional[Budget] = None, with_quotients: bool = False):
    """Full multivariate division: returns remainder (and quotients when
    asked).  Deterministic: the first reducer in basis order wins."""
    lead = [leading_term(g, order) for g in basis]
    quots = [Polynomial.zero(f.ring) for _ in basis] if with_quotients else None
    r_terms = {}
    work = f
    while not work.is_zero():
        m, c = leading_term(work, order)
        hit = None
        for i, (lm, lc) in enumerate(lead):
            if monomial_divides(lm, m):
                hit = (i, lm, lc)
                break
        if hit is None:
            r_terms[m] = c
            work = work - Polynomial.monomial(f.ring, m, c)
        else:
            i, lm, lc = hit
            factor = Polynomial.monomial(f.ring, monomial_div(m, lm), c / lc)
            work = work - factor * basis[i]
            if with_quotients:
                quots[i] = quots[i] + factor
            if budget is not None:
                budget.spend(1, "reduction")
    rem = Polynomial(f.ring, r_terms)
    if with_quotients:
        return quots, rem
    return rem


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    mf, cf = leading_term(f, order)
    mg, cg = leading_term(g, order)
    l = monomial_lcm(mf, mg)
    tf = Polynomial.monomial(f.ring, monomial_div(l, mf), Fraction(1) / cf)
    tg = Polynomial.monomial(g.ring, monomial_div(l, mg), Fraction(1) / cg)
    return tf * f - tg * g


def _gm_update(G, P, lm, f, order):
    """Gebauer-Moeller pair update; realizes the product and chain criteria."""
    m_new = leading_monomial(f, order)
    t = len(G)
    # drop old pairs strictly dominated by the new element
    P = {(i, j) for (i, j) in P
         if not (monomial_divides(m_new, monomial_lcm(lm[i], lm[j]))
                 and monomial_lcm(lm[i], m_new) != monomial_lcm(lm[i], lm[j])
                 and monomial_lcm(lm[j], m_new) != monomial_lcm(lm[i], lm[j]))}
    # group candidate pairs by lcm, keep minimal ones
    lcms = {}
    for i in range(t):
        lcms.setdefault(monomial_lcm(lm[i], m_new), []).append(i)
    minimal = []
    for L in sorted(lcms, key=lambda m: (monomial_degree(m), order.key(m))):
        if all(not monomial_divides(L2, L) for L2 in minimal):
            minimal.append(L)
    new_pairs = set()
    for L in minimal:
        # product criterion: coprime leading monomials reduce to zero
        if any(monomial_lcm(lm[i], m_new) == monomial_mul(lm[i], m_new) for i in lcms[L]):
            continue
        new_pairs.add((min(lcms[L]), t))
    G = G + [f]
    lm = lm + [m_new]
    return G, P | new_pairs, lm


_GB_CACHE: dict = {}


def groebner(ideal: IdealPresentation, order: MonomialOrder = DEGREVLEX,
             budget: Optional[Budget] = None) -> GroebnerBasis:
    """Reduced Groebner basis; deterministic for fixed input and order."""
    if not order.is_global():
        raise DomainError("groebner requires a global order; use the local engine for local orders")
    cache_key = (ideal, order)
    if budget is None:
        hit = _GB_CACHE.get(cache_key)
        if hit is not None:
            return hit
        budget = Budget()
    G: list[Polynomial] = []
    lm: list[Monomial] = []
    P: set = set()
    pairs_considered = 0
    max_degree = 0
    for g in ideal.generators:
        r = reduce_poly(g, G, order, budget) if G else g
        if not r.is_zero():
            G, P, lm = _gm_update(G, P, lm, monic(r, order), order)
    while P:
        pairs_considered += 1
        budget.spend(1, "groebner", partial=tuple(G))
        # normal selection: smallest lcm degree, ties by order then index
        i, j = min(P, key=lambda p: (monomial_degree(monomial_lcm(lm[p[0]], lm[p[1]])),
                                     order.key(monomial_lcm(lm[p[0]], lm[p[1]])), p))
        P.remove((i, j))
        s = s_polynomial(G[i], G[j], order)
        r = reduce_poly(s, G, order, budget)
        if not r.is_zero():
            max_degree = max(max_degree, r.total_degree())
            G, P, lm = _gm_update(G, P, lm, monic(r, order), order)
    # minimalize
    order_key = lambda g: order.key(leading_monomial(g, order))
    Gmin = []
    for g in sorted(G, key=order_key):
        lg = leading_monomial(g, order)
        if all(not monomial_divides(leading_monomial(h, order), lg) for h in Gmin):
            Gmin.append(g)
    # interreduce tails
    Gred = []
    for i, g in enumerate(Gmin):
        others = Gmin[:i] + Gmin[i + 1:]
        r = reduce_poly(g, others, order, budget) if others else g
        Gred.append(monic(r, order))
    Gred.sort(key=order_key, reverse=True)
    stats = GroebnerStats(pairs_considered=pairs_considered,
                          reductions=budget.used,
                          max_degree=max(max_degree, ideal.max_degree()))
    gb = GroebnerBasis(order=order, basis=tuple(Gred), reduced=True, stats=stats)
    _GB_CACHE[cache_key] = gb
    return gb


def normal_form(f: Polynomial, gb: GroebnerBasis,
                budget: Optional[Budget] = None) -> Polynomial:
    """Remainder of multivariate division; zero iff f is in the ideal."""
    return reduce_poly(f, gb.basis, gb.order, budget)


def member(f: Polynomial, ideal: IdealPresentation,
           order: MonomialOrder = DEGREVLEX, budget: Optional[Budget] = None) -> bool:
    if f.is_zero():
        return True
    if ideal.is_zero_ideal():
        return False
    return normal_form(f, groebner(ideal, order, budget), budget).is_zero()


def extend_ring(ideal: IdealPresentation, fresh: str = "_t"):
    """A fresh variable appended to the ring; returns (new_ring, lifted gens, index)."""
    name = fresh
    k = 0
    while name in ideal.ring:
        k += 1
        name = f"{fresh}{k}"
    new_ring = ideal.ring + (name,)
    var_map = list(range(len(ideal.ring)))
    lifted = [g.map_ring(new_ring, var_map) for g in ideal.generators]
    return new_ring, lifted, len(new_ring) - 1


def radical_membership(f: Polynomial, ideal: IdealPresentation,
                       budget: Optional[Budget] = None) -> bool:
    """f in rad(I) iff 1 in <I, 1 - t*f> in the ring extended by t."""
    if f.is_zero():
        return True
    if ideal.is_zero_ideal():
        return False
    new_ring, lifted, t_index = extend_ring(ideal)
    var_map = list(range(len(ideal.ring)))
    f_lift = f.map_ring(new_ring, var_map)
    t = Polynomial.variable(new_ring, t_index)
    trick = IdealPresentation(new_ring, tuple(lifted) + (Polynomial.constant(new_ring, 1) - t * f_lift,))
    gb = groebner(trick, DEGREVLEX, budget)
    return gb.is_unit_ideal()


def leading_term_ideal(ideal: IdealPresentation, order: MonomialOrder = DEGREVLEX,
                       budget: Optional[Budget] = None) -> IdealPresentation:
    """Minimal monomial generators of LT(I)."""
    if ideal.is_zero_ideal():
        return IdealPresentation(ideal.ring)
    gb = groebner(ideal, order, budget)
    monos = sorted({leading_monomial(g, order) for g in gb.basis},
                   key=lambda m: (monomial_degree(m), order.key(m)))
    minimal = []
    for m in monos:
        if all(not monomial_divides(m2, m) for m2 in minimal):
            minimal.append(m)
    return IdealPresentation(ideal.ring, tuple(Polynomial.monomial(ideal.ring, m) for m in minimal))


def staircase_count(lt_monomials: Sequence[Monomial], ring_size: int):
    """Number of monomials outside the monomial ideal; inf when unbounded."""
    if any(monomial_degree(m) == 0 for m in lt_monomials):
        return 0
    bounds = []
    for i in range(ring_size):
        pure = [m[i] for m in lt_monomials if all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            return inf
        bounds.append(min(pure))
    count = 0
    for mono in itertools.product(*(range(b) for b in bounds)):
        if all(not monomial_divides(g, mono) for g in lt_monomials):
            count += 1
    return count


def multiplicity_zero_dim(ideal: IdealPresentation, order: MonomialOrder = DEGREVLEX,
                          budget: Optional[Budget] = None):
    """dim of R/I as a vector space, counted by standard monomials; inf if
    the staircase is unbounded."""
    if ideal.is_zero_ideal():
        return inf
    gb = groebner(ideal, order, budget)
    if gb.is_unit_ideal():
        return 0
    return staircase_count(gb.leading_monomials(), len(ideal.ring))


def ideal_power(ideal: IdealPresentation, n: int) -> IdealPresentation:
    """Generators: all n-fold products of the input generators."""
    if n < 1:
        raise DomainError("ideal power needs n >= 1")
    if n == 1 or ideal.is_zero_ideal():
        return ideal
    prods = []
    for combo in itertools.combinations_with_replacement(ideal.generators, n):
        p = combo[0]
        for q in combo[1:]:
            p = p * q
        prods.append(p)
    return IdealPresentation(ideal.ring, tuple(prods))


def dimension(ideal: IdealPresentation, budget: Optional[Budget] = None) -> int:
    """Krull dimension via maximal independent variable sets of LT(I);
    -1 for the unit ideal."""
    n = len(ideal.ring)
    if ideal.is_zero_ideal():
        return n
    gb = groebner(ideal, DEGREVLEX, budget)
    if gb.is_unit_ideal():
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gb.leading_monomials()]
    best = 0
    for size in range(n, 0, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return best


def eliminant(ideal: IdealPresentation, var: int,
              budget: Optional[Budget] = None) -> Optional[Polynomial]:
    """Generator of I ∩ Q[x_var] when one exists (zero-dimensional case):
    the univariate element of a lex basis with x_var smallest."""
    perm = tuple(i for i in range(len(ideal.ring)) if i != var) + (var,)
    order = MonomialOrder("lex", permutation=perm)
    gb = groebner(ideal, order, budget)
    candidates = [g for g in gb.basis if g.variables_used() <= {var}]
    if not candidates:
        return None
    return min(candidates, key=lambda g: g.degree_in(var))


def nullstellensatz_exponent(g: Polynomial, ideal: IdealPresentation, cap: int = 64,
                             order: MonomialOrder = DEGREVLEX,
                             budget: Optional[Budget] = None) -> Optional[int]:
    """Least e <= cap with g^e in I, found by doubling then binary refine;
    None if no power up to cap is a member."""
    if g.is_zero():
        return 1
    if ideal.is_zero_ideal():
        return None
    gb = groebner(ideal, order, budget)

    reduced = {1: normal_form(g, gb, budget)}

    def power_nf(e: int) -> Polynomial:
        if e in reduced:
            return reduced[e]
        half = e // 2
        r = normal_form(power_nf(half) * power_nf(e - half), gb, budget)
        reduced[e] = r
        return r

    e = 1
    while e <= cap:
        if power_nf(e).is_zero():
            break
        e *= 2
    else:
        return None
    lo = e // 2  # known failure (or 0)
    hi = e       # known success
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if power_nf(mid).is_zero():
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class RadicalCertificate:
    """Per-generator Nullstellensatz exponents for the output ideal J:
    exponents[i] is the least verified e with J.generators[i]^e in I."""

    exponents: tuple = ()
    capped: bool = False

    def max_weight(self) -> int:
        """Sum of (e_i - 1) + 1: the membership-transfer exponent."""
        return sum(e - 1 for e in self.exponents) + 1


def _is_certified_radical(J: IdealPresentation, budget) -> bool:
    """Conservative syntactic radicality tests for the implemented classes:
    unit, principal squarefree, linear, squarefree monomial generators,
    or zero-dimensional with all eliminants squarefree."""
    gb = groebner(J, DEGREVLEX, budget)
    basis = gb.basis
    if gb.is_unit_ideal():
        return True
    if len(basis) == 1:
        g = basis[0]
        return squarefree_part(g) == normalize_leading(g)
    if all(g.total_degree() <= 1 for g in basis):
        return True
    if all(len(g.terms) == 1 and all(e <= 1 for m in g.terms for e in m) for g in basis):
        return True
    if multiplicity_zero_dim(J, DEGREVLEX, budget) is not inf:
        for var in range(len(J.ring)):
            el = eliminant(J, var, budget)
            if el is None:
                return False
            if squarefree_part(el) != normalize_leading(el):
                return False
        return True
    return False


def attempt_radical(ideal: IdealPresentation, budget: Optional[Budget] = None,
                    exponent_cap: int = 64):
    """Best-effort radical: returns (J, certificate, status).

    Always I ⊆ J ⊆ rad(I), both inclusions certified (membership for the
    first, per-generator exponents for the second).  Status "exact" when J
    is additionally certified radical (principal / zero-dimensional /
    linear / monomial cases), else "partial".
    """
    if ideal.is_zero_ideal():
        return ideal, RadicalCertificate(), "exact"
    budget = budget or Budget()
    J = ideal
    exponents: dict[Polynomial, int] = {g: 1 for g in ideal.generators}

    for _round in range(20):
        gbJ = groebner(J, DEGREVLEX, budget)
        if gbJ.is_unit_ideal():
            break
        candidates = []
        for g in gbJ.basis:
            candidates.append(squarefree_part(g))
        for g1, g2 in itertools.combinations(gbJ.basis, 2):
            d = poly_gcd(g1, g2)
            if not d.is_constant():
                candidates.append(d)
                candidates.append(squarefree_part(d))
        if len(gbJ.basis) > 2:
            d = gbJ.basis[0]
            for g in gbJ.basis[1:]:
                d = poly_gcd(d, g)
            if not d.is_constant():
                candidates.append(squarefree_part(d))
        if multiplicity_zero_dim(J, DEGREVLEX, budget) is not inf:
            for var in range(len(J.ring)):
                el = eliminant(J, var, budget)
                if el is not None:
                    candidates.append(squarefree_part(el))
        grew = False
        for c in candidates:
            c = normalize_leading(c)
            if c.is_constant():
                continue
            if normal_form(c, gbJ, budget).is_zero():
                continue
            e = nullstellensatz_exponent(c, ideal, exponent_cap, budget=budget)
            if e is None:
                continue
            exponents[c] = e
            J = J.extended([c])
            grew = True
        if not grew:
            break

    # canonical presentation: the reduced basis of the closure
    J = IdealPresentation(ideal.ring, groebner(J, DEGREVLEX, budget).basis)
    # certificate for the final presentation's generators
    cert_exps = []
    capped = False
    for g in J.generators:
        e = exponents.get(g)
        if e is None:
            e = nullstellensatz_exponent(g, ideal, exponent_cap, budget=budget)
        if e is None:
            capped = True
            e = exponent_cap
        cert_exps.append(e)
    # sanity: I ⊆ J
    gbJ = groebner(J, DEGREVLEX, budget)
    for g in ideal.generators:
        if not normal_form(g, gbJ, budget).is_zero():
            raise DomainError("radical closure lost a generator")  # pragma: no cover
    status = "exact" if not capped and _is_certified_radical(J, budget) else "partial"
    return J, RadicalCertificate(tuple(cert_exps), capped), status
