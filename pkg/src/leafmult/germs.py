"""Local analytic geometry on the leaf: branch decomposition of germs,
common-factor splitting, germ division, and local intersection
multiplicity with stabilization certificates.

Germs arrive as jets.  Exact-polynomial jets take exact paths (polynomial
factorization over Q, exact division); genuinely transcendental jets go
through truncated-series machinery, with every certificate comparing two
consecutive regeneration orders and requiring staircases to sit strictly
inside the truncation box.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import inf
from typing import Optional, Sequence

import sympy

from .errors import (
    BudgetExceededError,
    CertificateError,
    DomainError,
    InconclusiveError,
    RegenerationRequest,
)
from .ideals import Budget
from .jets import LEAF_RING, Jet2, cached_producer
from .localbasis import (
    StabilizationCertificate,
    mora_divide,
    mora_normal_form,
    staircase_at_order,
    standard_basis,
)
from .poly import Polynomial, normalize_leading
from .puiseux import BranchParam, expand, factor_from_param
from .series import QQ, XSeries, YPoly


@dataclass(frozen=True)
class NPConfig:
    """Direction and budget knobs for branch decomposition."""

    fiber: str = "auto"          # "t2" | "t1" | "auto"
    max_order: int = 160
    shear_candidates: tuple = (0, 1, -1, 2, -2, 3, -3, 4, -4)


DEFAULT_NP = NPConfig()


# ---------------------------------------------------------------------------
# frames: linear coordinate changes making germs regular in t2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """t1 -> t1 + shear*t2 (optionally after swapping t1,t2)."""

    swap: bool = False
    shear: Fraction = Fraction(0)

    def is_identity(self) -> bool:
        return not self.swap and self.shear == 0

    def push(self, jet: Jet2) -> Jet2:
        out = jet.swap_variables() if self.swap else jet
        if self.shear:
            out = out.substitute_linear(((1, self.shear), (0, 1)))
        return out

    def pull_polynomial(self, p: Polynomial) -> Polynomial:
        """Express a frame-coordinate polynomial in original coordinates."""
        if self.shear:
            t1 = Polynomial(LEAF_RING, {(1, 0): Fraction(1), (0, 1): -self.shear})
            t2 = Polynomial.variable(LEAF_RING, 1)
            p = p.compose([t1, t2])
        if self.swap:
            p = p.compose([Polynomial.variable(LEAF_RING, 1),
                           Polynomial.variable(LEAF_RING, 0)])
        return p


def choose_frame(jet: Jet2, config: NPConfig = DEFAULT_NP) -> Frame:
    """A frame in which the germ is regular in t2 (its lowest form does not
    vanish in the (0,1) direction)."""
    ord_ = jet.vanishing_order()
    if ord_ is None:
        raise DomainError("cannot frame the zero germ")
    low = {k: c for k, c in jet.coeffs.items() if k[0] + k[1] == ord_}
    swap_first = config.fiber == "t1"

    def regular_with(swap: bool, shear: Fraction) -> bool:
        # lowest form evaluated at (shear, 1) in the (possibly swapped) frame
        total = Fraction(0)
        for (a, b), c in low.items():
            if swap:
                a, b = b, a
            total += c * (shear ** a)
        return total != 0

    orders = [True, False] if swap_first else [False, True]
    if config.fiber == "t2":
        orders = [False]
    for swap in orders:
        for mu in config.shear_candidates:
            if regular_with(swap, Fraction(mu)):
                return Frame(swap=swap, shear=Fraction(mu))
    raise InconclusiveError("no shear candidate makes the germ regular in t2")


def jet_to_ypoly(jet: Jet2) -> YPoly:
    """Frame-coordinate jet as a y-polynomial with per-coefficient x-precision."""
    order = jet.order
    by_j: dict[int, dict] = {}
    max_j = 0
    for (a, b), c in jet.coeffs.items():
        by_j.setdefault(b, {})[a] = c
        max_j = max(max_j, b)
    exact = jet.as_exact_polynomial()
    cols = []
    for j in range(max_j + 1):
        prec = 10**9 if exact is not None else order - j + 1
        cols.append(XSeries.make(QQ, by_j.get(j, {}), prec))
    return YPoly.make(QQ, cols)


def ypoly_to_polynomial(w: YPoly, x_cap: Optional[int] = None) -> Polynomial:
    terms = {}
    for j, c in enumerate(w.coeffs):
        for e, v in c.coeffs:
            if x_cap is not None and e >= x_cap:
                continue
            terms[(e, j)] = v
    return Polynomial(LEAF_RING, terms)


# ---------------------------------------------------------------------------
# jet inversion and germ division
# ---------------------------------------------------------------------------


def jet_inverse(j: Jet2, order: Optional[int] = None) -> Jet2:
    """Multiplicative inverse of a unit jet, by Newton iteration."""
    if not j.is_unit():
        raise DomainError("jet inverse requires a unit (nonzero value at the origin)")
    order = j.order if order is None else order
    work = j.regenerate(order) if j.can_regenerate() else j.truncate(order)
    inv0 = Jet2.constant(Fraction(1) / work.value_at_origin(), order)
    two = Jet2.constant(2, order)
    r = inv0
    known = 1
    while known <= order:
        r = (r * (two - work * r)).truncate(order)
        known *= 2
    prod = None
    if j.producer is not None:
        prod = cached_producer(lambda n: jet_inverse(j, n))
    return Jet2(order, r.coeffs, prod)


def germ_divide(a: Jet2, b: Jet2, order: Optional[int] = None) -> Optional[Jet2]:
    """Quotient a/b as germs, certified up to the working order; None when b
    does not divide a at that order."""
    if b.is_zero():
        raise DomainError("division by the zero germ")
    order = min(a.order, b.order) if order is None else order
    if b.is_unit():
        return (a.truncate(order) * jet_inverse(b, order)).truncate(order)
    pa, pb = a.as_exact_polynomial(), b.as_exact_polynomial()
    aw = a.regenerate(order) if a.can_regenerate() else a.truncate(order)
    bw = b.regenerate(order) if b.can_regenerate() else b.truncate(order)
    rem, u, quots = mora_divide(aw.to_polynomial(), [bw.to_polynomial()])
    if not rem.is_zero() and rem.total_degree() >= 0:
        low = min(sum(m) for m in rem.terms)
        if low <= order:
            return None
    if u.constant_value() == 0:
        raise CertificateError("Mora division produced a non-unit multiplier")
    q = quots[0]
    if pa is not None and pb is not None and u.is_constant():
        # exact polynomial division result
        if rem.is_zero():
            qjet = Jet2.from_polynomial(q * (Fraction(1) / u.constant_value()), order)
            return qjet
    u_jet = Jet2.from_polynomial(u, order)
    q_jet = Jet2.from_polynomial(q, order)
    result = (q_jet * jet_inverse(u_jet, order)).truncate(order)
    prod = None
    if a.producer is not None and b.producer is not None:
        def produce(n):
            out = germ_divide(a, b, n)
            if out is None:
                raise InconclusiveError("divisibility lost at higher order")
            return out
        prod = cached_producer(produce)
    return Jet2(order, result.coeffs, prod)


def germ_divides(a: Jet2, b: Jet2, order: Optional[int] = None) -> bool:
    """True iff b divides a as germs, certified up to the working order."""
    return germ_divide(a, b, order) is not None


# ---------------------------------------------------------------------------
# cycles and branch sets
# ---------------------------------------------------------------------------


@dataclass
class BranchCycle:
    """A conjugacy class of branches: its defining germ factor over Q (in
    original leaf coordinates), the ramification index, the degree of the
    coefficient field, and its multiplicity as a repeated factor."""

    factor: Jet2
    multiplicity: int
    ram_index: int
    field_degree: int
    edge: Optional[tuple]
    field_chain: tuple = ()
    param: Optional[BranchParam] = None
    frame: Frame = dfield(default_factory=Frame)

    def order_at_origin(self) -> int:
        v = self.factor.vanishing_order()
        return 0 if v is None else v

    def branch_count(self) -> int:
        return self.field_degree

    def key(self, order: int) -> Polynomial:
        """Canonical truncation for matching cycles across germs."""
        return normalize_leading(self.factor.truncate(order).to_polynomial())

    def describe(self) -> dict:
        data = {
            "factor": str(self.factor.to_polynomial()),
            "factor_order": self.factor.order,
            "multiplicity": self.multiplicity,
            "ramification_index": self.ram_index,
            "field_degree": self.field_degree,
            "edge": list(self.edge) if self.edge else None,
            "field": list(self.field_chain),
        }
        if self.param is not None:
            data["series"] = [[e, c] for e, c in self.param.series_table()]
        return data


@dataclass
class PuiseuxBranchSet:
    """Full branch decomposition of a germ at the origin."""

    cycles: list
    mu: int
    certified_order: int
    frame: Frame
    source: Jet2

    def total_branches_with_multiplicity(self) -> int:
        return sum(c.multiplicity * c.branch_count() for c in self.cycles)

    def min_multiplicity(self) -> int:
        return min((c.multiplicity for c in self.cycles), default=0)

    def max_multiplicity(self) -> int:
        return max((c.multiplicity for c in self.cycles), default=0)

    def reduced_product(self, order: int) -> Jet2:
        """Product of the distinct cycle factors, one each."""
        out = Jet2.constant(1, order)
        for c in self.cycles:
            out = out * c.factor.regenerate(order) if c.factor.can_regenerate() \
                else out * c.factor.truncate(order)
        return out

    def describe(self) -> dict:
        return {
            "mu": self.mu,
            "certified_order": self.certified_order,
            "cycles": [c.describe() for c in self.cycles],
        }


def _sympy_local_factors(p: Polynomial):
    """(unit_part, [(irreducible local factor, mult)]); local factors vanish
    at the origin, the unit part does not."""
    t1, t2 = sympy.symbols("t1 t2")
    expr = sympy.Integer(0)
    for (a, b), c in p.terms.items():
        expr += sympy.Rational(c.numerator, c.denominator) * t1**a * t2**b
    const, factors = sympy.factor_list(sympy.Poly(expr, t1, t2, domain="QQ"))
    unit = Polynomial.constant(LEAF_RING, Fraction(const.p, const.q))
    local = []
    for f, mult in factors:
        terms = {}
        pd = sympy.Poly(f, t1, t2, domain="QQ")
        for mono, c in zip(pd.monoms(), pd.coeffs()):
            terms[tuple(mono)] = Fraction(c.p, c.q)
        fp = Polynomial(LEAF_RING, terms)
        if fp.constant_value() == 0:
            local.append((fp, int(mult)))
        else:
            unit = unit * fp ** int(mult)
    return unit, local


def _cycles_of_squarefree_ypoly(w: YPoly, frame: Frame, x_prec: int,
                                source: Jet2, config: NPConfig) -> list:
    """Expand a y-squarefree, y-regular piece into cycles (multiplicity 1)."""
    # cap the working precision: ramification cannot exceed the y-degree,
    # so this suffices to recover factors at x_prec and keeps exact
    # (infinite-precision) inputs from driving the solver unboundedly
    cap = (w.degree() + 1) * max(x_prec, 4) + 8
    params = expand(w.truncate(cap))
    cycles = []
    for bp in params:
        want = max(2, min(x_prec, bp.series.prec // max(bp.ram, 1)))
        W = factor_from_param(bp, want)
        if W is None:
            raise RegenerationRequest(2 * x_prec + 8)
        factor_frame = Polynomial(LEAF_RING, dict(W.terms))
        factor_orig = frame.pull_polynomial(factor_frame)
        jet = _cycle_factor_jet(source, frame, factor_orig, want, config)
        cycles.append(BranchCycle(
            factor=jet,
            multiplicity=1,
            ram_index=bp.ram,
            field_degree=bp.field_degree(),
            edge=bp.edge,
            field_chain=tuple(bp.describe_field()),
            param=bp,
            frame=frame,
        ))
    return cycles


def _cycle_factor_jet(source: Jet2, frame: Frame, factor_orig: Polynomial,
                      x_prec: int, config: NPConfig) -> Jet2:
    """Jet of a cycle factor with a producer that recomputes the whole
    decomposition at higher order and matches this cycle by truncation."""
    base_order = factor_orig.total_degree() + x_prec
    stored = Jet2.from_polynomial(factor_orig, base_order)
    if source.producer is None:
        return Jet2(base_order, dict(factor_orig.terms), None)

    key_now = normalize_leading(factor_orig)

    def produce(n: int) -> Jet2:
        bs = germ_cycles(source.regenerate(max(2 * n + 4, source.order)),
                         config=config, min_factor_prec=n + 1)
        matches = [c for c in bs.cycles
                   if normalize_leading(c.factor.truncate(stored.order).to_polynomial())
                   == normalize_leading(stored.to_polynomial())]
        if len(matches) != 1:
            raise InconclusiveError("cycle could not be re-identified at higher order")
        return matches[0].factor.truncate(n)

    return Jet2(base_order, dict(factor_orig.terms), cached_producer(produce))


def weierstrass_jet(f: Jet2) -> tuple:
    """Weierstrass preparation of a jet regular in t2: f = W * U with W
    monic in t2 of degree equal to the vanishing order and U a unit.

    Computed slice by slice in the t1-grading (linear Hensel lifting of the
    coprime splitting f(0, y) = y^mu * unit); everything stays over Q.
    Since U is a unit, the truncation of W at the jet order is exactly
    determined by the truncation of f."""
    from .series import _poly_divmod, _poly_mul, _poly_sub, _trim, up_ext_gcd
    order = f.order
    mu = f.vanishing_order()
    if mu is None:
        raise DomainError("cannot prepare the zero germ")
    # x-slices: slice k = list of y-coefficients of the x^k part
    slices: list[list] = [[] for _ in range(order + 1)]
    for (a, b), c in f.coeffs.items():
        col = slices[a]
        while len(col) <= b:
            col.append(Fraction(0))
        col[b] = c
    f0 = _trim(QQ, slices[0])
    if len(f0) < mu + 1 or any(f0[:mu]) or not f0[mu]:
        raise DomainError("germ is not regular in t2 at its vanishing order")
    y_mu = [Fraction(0)] * mu + [Fraction(1)]
    u0 = f0[mu:]
    _, s, t = up_ext_gcd(QQ, y_mu, u0)
    W = {0: y_mu}
    U = {0: u0}
    for k in range(1, order + 1):
        rhs = _trim(QQ, slices[k])
        for a in range(1, k):
            wa = W.get(a)
            ub = U.get(k - a)
            if wa and ub:
                rhs = _poly_sub(QQ, rhs, _poly_mul(QQ, wa, ub))
        if not rhs:
            continue
        # solve W_k*u0 + U_k*y^mu = rhs with deg W_k < mu
        wk = _poly_divmod(QQ, _poly_mul(QQ, t, rhs), y_mu)[1]
        num = _poly_sub(QQ, rhs, _poly_mul(QQ, wk, u0))
        uk, rem = _poly_divmod(QQ, num, y_mu)
        if rem:
            raise CertificateError("Weierstrass slice failed to divide")  # pragma: no cover
        if wk:
            W[k] = wk
        if uk:
            U[k] = uk

    def to_jet(slice_map, jet_order):
        coeffs = {}
        for a, col in slice_map.items():
            for b, c in enumerate(col):
                if c and a + b <= jet_order:
                    coeffs[(a, b)] = c
        return Jet2(jet_order, coeffs)

    # the top-mu y-band of each U slice lies beyond what the truncation of
    # f determines, so U is only certified to order - mu
    return to_jet(W, order), to_jet(U, max(order - mu, 0))


def simplify_local_generator(j: Jet2) -> Jet2:
    """Strip the unit cofactor off a germ when a coordinate direction is
    regular: the local ideal is unchanged and the distinguished polynomial
    is far sparser than the raw jet (important for dense transcendental
    restrictions)."""
    if j.is_zero() or j.is_unit() or j.as_exact_polynomial() is not None:
        return j
    mu = j.vanishing_order()
    if mu is None:
        return j

    def rebuild(transform, restore):
        W, _ = weierstrass_jet(transform(j))
        W = restore(W)
        if j.producer is not None:
            prod = cached_producer(
                lambda n: simplify_local_generator(j.regenerate(n + mu)).truncate(n))
            return Jet2(W.order, W.coeffs, prod)
        return W

    if j.coefficient(0, mu):
        return rebuild(lambda x: x, lambda x: x)
    if j.coefficient(mu, 0):
        return rebuild(lambda x: x.swap_variables(), lambda x: x.swap_variables())
    return j


def _ypoly_yun(w: YPoly) -> list:
    """Yun squarefree decomposition over the Laurent-series coefficient
    field: [(piece, multiplicity)], pieces monic in y."""
    from .series import ypoly_gcd_monic
    if w.degree() <= 0:
        return []
    d = w.derive_y()
    a = ypoly_gcd_monic(w, d)
    if a.degree() == 0:
        lead = w.coeffs[-1]
        return [(w.scale_series(lead.inverse()), 1)]
    out = []
    b, _ = w.divmod_monic(a)
    c, _ = d.divmod_monic(a)
    i = 1
    while b.degree() > 0:
        c = c - b.derive_y()
        if c.is_zero_known():
            out.append((b, i))
            break
        g = ypoly_gcd_monic(b, c)
        if g.degree() > 0:
            out.append((g, i))
            b, _ = b.divmod_monic(g)
            c, _ = c.divmod_monic(g)
        i += 1
        if i > w.degree() + 2:
            raise InconclusiveError("squarefree decomposition did not terminate")
    return [(p, m) for p, m in out if p.degree() > 0]


def germ_cycles(f: Jet2, config: NPConfig = DEFAULT_NP,
                min_factor_prec: int = 4) -> PuiseuxBranchSet:
    """Branch decomposition of a nonzero germ vanishing at the origin."""
    if f.is_zero():
        raise DomainError("cannot decompose the zero germ")
    order = f.order
    last_error = None
    while order <= config.max_order:
        try:
            work = f.regenerate(order) if f.can_regenerate() else f.truncate(order)
            return _germ_cycles_once(f, work, config, min_factor_prec)
        except RegenerationRequest as e:
            if not f.can_regenerate():
                raise InconclusiveError(
                    "decomposition needs a higher order and the jet has no producer")
            last_error = e
            order = max(2 * order, e.needed_order, order + 4)
    raise BudgetExceededError("branch decomposition exceeded the order cap",
                              stage="puiseux", partial=last_error)


def _germ_cycles_once(source: Jet2, work: Jet2, config: NPConfig,
                      min_factor_prec: int) -> PuiseuxBranchSet:
    mu = work.vanishing_order()
    if mu is None:
        raise RegenerationRequest(2 * work.order + 4)
    exact = work.as_exact_polynomial()
    if mu == 0:
        return PuiseuxBranchSet([], 0, work.order, Frame(), source)
    if exact is not None:
        unit, local = _sympy_local_factors(exact)
        cycles = []
        for fp, mult in local:
            sub = Jet2.from_polynomial(fp, work.order)
            frame = choose_frame(sub, config)
            w = jet_to_ypoly(frame.push(sub).truncate(
                max(work.order, fp.total_degree() + min_factor_prec)))
            # factor precision is decoupled from the jet order: cycle jets
            # carry producers, so deeper truncations are regenerated on
            # demand instead of being paid for up front
            x_prec = max(min_factor_prec, fp.total_degree() + 4, 8)
            sub_cycles = _cycles_of_squarefree_ypoly(w, frame, x_prec, sub, config)
            if len(sub_cycles) == 1:
                # a single cycle of an irreducible polynomial is the
                # polynomial itself: keep it exact
                sub_cycles[0].factor = Jet2.from_polynomial(
                    normalize_leading(fp), work.order)
            for c in sub_cycles:
                c.multiplicity = mult
            cycles.extend(sub_cycles)
        cycles.sort(key=lambda c: (c.order_at_origin(), str(c.factor.to_polynomial())))
        return PuiseuxBranchSet(cycles, mu, work.order, Frame(), source)
    # transcendental path: prepare first so the y-degree is the vanishing
    # order rather than the jet order
    frame = choose_frame(work, config)
    framed = frame.push(work)
    wjet, _unit = weierstrass_jet(framed)
    w = jet_to_ypoly(wjet)
    pieces = _ypoly_yun(w)
    cycles = []
    for piece, mult in pieces:
        piece_cycles = _cycles_of_squarefree_ypoly(
            piece, frame, max(min_factor_prec, work.order // 2), source, config)
        for c in piece_cycles:
            c.multiplicity = mult
        cycles.extend(piece_cycles)
    # certification: multiplicities account for the vanishing order
    total = sum(c.multiplicity * c.order_at_origin() for c in cycles)
    if total != mu:
        raise RegenerationRequest(2 * work.order + 8)
    cycles.sort(key=lambda c: (c.order_at_origin(), str(c.factor.to_polynomial())))
    return PuiseuxBranchSet(cycles, mu, work.order, frame, source)


def newton_puiseux(f: Jet2, config: NPConfig = DEFAULT_NP) -> PuiseuxBranchSet:
    """Public entry: full branch decomposition with verification that the
    cycles reproduce the germ."""
    bs = germ_cycles(f, config)
    verify_reconstruction(bs)
    return bs


def verify_reconstruction(bs: PuiseuxBranchSet, order: Optional[int] = None):
    """Multiplying out all cycles (with multiplicity) must reproduce the
    germ up to a local unit, checked by exact germ division."""
    order = order or max(4, bs.certified_order // 2)
    prod = Jet2.constant(1, order)
    for c in bs.cycles:
        fac = c.factor.regenerate(order) if c.factor.can_regenerate() \
            else c.factor.truncate(order)
        prod = prod * fac ** c.multiplicity
    src = bs.source.regenerate(order) if bs.source.can_regenerate() \
        else bs.source.truncate(order)
    if prod.is_unit():
        if not src.is_unit() and bs.cycles:
            raise CertificateError("unit reconstruction for a vanishing germ")
        return
    q = germ_divide(src, prod, order)
    if q is None or not q.is_unit():
        raise CertificateError("cycle product does not reproduce the germ")


# ---------------------------------------------------------------------------
# local multiplicity with stabilization
# ---------------------------------------------------------------------------


def _truncations(jets: Sequence[Jet2], order: int) -> list:
    """Truncations at exactly the requested order; a jet stored below it
    with no producer cannot honestly provide one."""
    out = []
    for j in jets:
        if j.order >= order:
            jj = j.truncate(order)
        elif j.can_regenerate():
            jj = j.regenerate(order)
        else:
            raise InconclusiveError(
                f"jet stored at order {j.order} cannot reach order {order}")
        out.append(jj.to_polynomial())
    return out


def local_multiplicity(f: Jet2, g: Jet2, max_order: int = 96,
                       budget: Optional[Budget] = None):
    """(value, certificate) for dim of the local ring modulo <f, g>.

    Infinite only with a branch-matching certificate (a common branch
    through the origin), never on budget exhaustion alone."""
    if f.is_unit() or g.is_unit():
        return 0, StabilizationCertificate((f.order, g.order), (), 0, True)
    if f.is_zero() and g.is_zero():
        return inf, "both germs are zero"
    pf, pg = f.as_exact_polynomial(), g.as_exact_polynomial()
    if pf is not None and pg is not None:
        if pf.is_zero() or pg.is_zero():
            nz = pg if pf.is_zero() else pf
            if nz.constant_value() != 0:
                return 0, StabilizationCertificate((f.order,), (), 0, True)
            return inf, "principal local ideal has infinite colength"
        from .poly import gcd as poly_gcd
        d = poly_gcd(pf, pg)
        if not d.is_constant() and d.constant_value() == 0:
            return inf, f"common factor {d}"
    order = max(f.order, g.order, 6)
    while order <= max_order:
        try:
            p1, p2 = _truncations([f, g], order - 1)
            q1, q2 = _truncations([f, g], order)
        except InconclusiveError:
            raise InconclusiveError(
                "jets lack producers and stabilization was not reached at the stored order")
        lts1, m1 = staircase_at_order([p1, p2], budget)
        lts2, m2 = staircase_at_order([q1, q2], budget)
        if m1 is not inf and m1 == m2 and lts1 == lts2 and m1 < order - 1:
            cert = StabilizationCertificate((order - 1, order), lts1, m1, True)
            return m1, cert
        # not stabilized: check for a genuinely common branch
        common = _common_cycles(f, g, order)
        if common:
            return inf, f"matched common branch: {common[0][0].factor.to_polynomial()}"
        order = 2 * order
    raise InconclusiveError("local multiplicity did not stabilize below the order cap")


def _common_cycles(f: Jet2, g: Jet2, order: int) -> list:
    """Cycles shared by two germs, as (cycle_f, cycle_g) pairs."""
    try:
        bf = germ_cycles(f.regenerate(order) if f.can_regenerate() else f.truncate(order))
        bg = germ_cycles(g.regenerate(order) if g.can_regenerate() else g.truncate(order))
    except (InconclusiveError, BudgetExceededError):
        return []
    out = []
    for cf in bf.cycles:
        for cg in bg.cycles:
            k = min(cf.factor.order, cg.factor.order)
            if cf.key(k) == cg.key(k):
                out.append((cf, cg))
    return out


def local_membership(f: Jet2, gens: Sequence[Jet2], order: Optional[int] = None,
                     budget: Optional[Budget] = None) -> bool:
    """f in the local ideal generated by gens, certified up to the order."""
    if f.is_zero():
        return True
    live = [g for g in gens if not g.is_zero()]
    if not live:
        return False
    order = order or max([f.order] + [g.order for g in live])
    # producer-less jets cap the certifiable order
    for j in [f] + live:
        if not j.can_regenerate():
            order = min(order, j.order)
    polys = _truncations(live, order)
    basis = standard_basis(polys, budget)
    target = _truncations([f], order)[0]
    if target.is_zero():
        return True
    rem = mora_normal_form(target, basis, budget)
    return rem.is_zero() or min(sum(m) for m in rem.terms) > order


# ---------------------------------------------------------------------------
# common-factor splitting
# ---------------------------------------------------------------------------


@dataclass
class GermSplit:
    """fL = h_f * f and gL = h_g * g with h_f, h_g supported exactly on the
    common branches (with each germ's own multiplicities) and f, g sharing
    no branch through the origin."""

    h_f: Jet2
    h_g: Jet2
    f: Jet2
    g: Jet2
    certified_order: int
    common_cycles: list = dfield(default_factory=list)

    def describe(self) -> dict:
        return {
            "h_f": str(self.h_f.to_polynomial()),
            "h_g": str(self.h_g.to_polynomial()),
            "f": str(self.f.to_polynomial()),
            "g": str(self.g.to_polynomial()),
            "certified_order": self.certified_order,
        }


def split_common(fL: Jet2, gL: Jet2, config: NPConfig = DEFAULT_NP) -> GermSplit:
    """Split two germs against their common local branches."""
    if fL.is_zero() or gL.is_zero():
        raise DomainError("split requires nonzero germs")
    order = min(fL.order, gL.order)
    pf, pg = fL.as_exact_polynomial(), gL.as_exact_polynomial()
    if pf is not None and pg is not None:
        return _split_exact(fL, gL, pf, pg, order)
    bf = germ_cycles(fL, config)
    bg = germ_cycles(gL, config)
    matched = []
    for cf in bf.cycles:
        for cg in bg.cycles:
            k = min(cf.factor.order, cg.factor.order)
            if cf.key(k) == cg.key(k):
                matched.append((cf, cg))
    h_f = Jet2.constant(1, order)
    h_g = Jet2.constant(1, order)
    for cf, cg in matched:
        ff = cf.factor.regenerate(order) if cf.factor.can_regenerate() \
            else cf.factor.truncate(order)
        gg = cg.factor.regenerate(order) if cg.factor.can_regenerate() \
            else cg.factor.truncate(order)
        h_f = h_f * ff ** cf.multiplicity
        h_g = h_g * gg ** cg.multiplicity
    f = germ_divide(fL, h_f, order)
    g = germ_divide(gL, h_g, order)
    if f is None or g is None:
        raise RegenerationRequest(2 * order + 8)
    return GermSplit(h_f, h_g, f, g, order, matched)


def _split_exact(fL: Jet2, gL: Jet2, pf: Polynomial, pg: Polynomial,
                 order: int) -> GermSplit:
    _, lf = _sympy_local_factors(pf)
    _, lg = _sympy_local_factors(pg)
    gdict = {normalize_leading(p): m for p, m in lg}
    h_f_poly = Polynomial.constant(LEAF_RING, 1)
    h_g_poly = Polynomial.constant(LEAF_RING, 1)
    matched = []
    for p, mf in lf:
        key = normalize_leading(p)
        if key in gdict:
            h_f_poly = h_f_poly * p ** mf
            h_g_poly = h_g_poly * p ** gdict[key]
            matched.append((key, mf, gdict[key]))
    h_f = Jet2.from_polynomial(h_f_poly, order)
    h_g = Jet2.from_polynomial(h_g_poly, order)
    f = germ_divide(fL, h_f, order)
    g = germ_divide(gL, h_g, order)
    if f is None or g is None:
        raise CertificateError("exact split division failed")  # pragma: no cover
    return GermSplit(h_f, h_g, f, g, order, matched)


# ---------------------------------------------------------------------------
# factor multiplicities of a common-branch germ
# ---------------------------------------------------------------------------


@dataclass
class FactorMultiplicities:
    k: int                   # minimal multiplicity of a factor
    K: int                   # maximal multiplicity of a factor
    reduced: Jet2            # product of the distinct factors, once each
    branch_count: int        # branches counted with multiplicity
    mu: int                  # vanishing order at the origin
    branches: PuiseuxBranchSet

    def describe(self) -> dict:
        return {
            "k": self.k,
            "K": self.K,
            "reduced": str(self.reduced.to_polynomial()),
            "branch_count": self.branch_count,
            "mu": self.mu,
        }


def factor_multiplicities(h: Jet2, config: NPConfig = DEFAULT_NP) -> FactorMultiplicities:
    """Minimal/maximal factor multiplicities, the reduced form, and branch
    counts of a germ vanishing at the origin."""
    if h.is_zero():
        raise DomainError("factor data of the zero germ")
    if h.vanishing_order() == 0:
        raise DomainError("factor data requires a germ vanishing at the origin")
    bs = newton_puiseux(h, config)
    if not bs.cycles:
        raise CertificateError("vanishing germ produced no cycles")  # pragma: no cover
    k = bs.min_multiplicity()
    K = bs.max_multiplicity()
    order = bs.certified_order
    reduced = Jet2.constant(1, order)
    for c in bs.cycles:
        fac = c.factor.regenerate(order) if c.factor.can_regenerate() \
            else c.factor.truncate(order)
        reduced = reduced * fac
    count = bs.total_branches_with_multiplicity()
    return FactorMultiplicities(k, K, reduced, count, bs.mu, bs)
