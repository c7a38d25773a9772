"""Noetherian pairs and the multiplicity-bound pipeline.

A pair couples a global polynomial ideal I with a local ideal of leaf
germs containing I's restriction.  Three extensions (radical, Poisson
bracket, Jacobian) each enlarge the pair while transferring a multiplicity
bound backwards through an affine map m -> a*m + b; once some global
generator is nonzero at the base point the local multiplicity at the end
of the chain is zero and the composed maps bound the original one.

Every step re-verifies the pair containment and records the evidence
behind its transfer factors, so a trace can be re-checked offline.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import inf
from typing import Optional, Sequence

from .errors import (
    BudgetExceededError,
    CertificateError,
    DomainError,
    HypothesisError,
    InconclusiveError,
    RegenerationRequest,
)
from .foliation import FoliationContext
from .germs import (
    germ_cycles,
    germ_divide,
    germ_divides,
    local_multiplicity,
    split_common,
)
from .ideals import (
    Budget,
    IdealPresentation,
    attempt_radical,
    member,
    radical_membership,
)
from .jets import Jet2
from .poly import Polynomial


@dataclass(frozen=True)
class PipelineOptions:
    seed: int = 0
    jet_order: Optional[int] = None
    transverse_retries: int = 12
    exponent_cap: int = 64
    regeneration_retries: int = 4

    def rng_for(self, stage: str, salt: int) -> random.Random:
        # string seeding hashes stably across processes, unlike tuple hash
        return random.Random(f"{self.seed}|{stage}|{salt}")


@dataclass
class NoetherianPair:
    """(I, local ideal) with the containment I|_L in the local ideal
    certified up to cert_order."""

    ideal: IdealPresentation
    local_gens: tuple
    ctx: FoliationContext
    cert_order: int
    radical_exact: bool = False
    nonisolated_certified: bool = False
    _local_basis: Optional[list] = dfield(default=None, repr=False, compare=False)

    def leaf_jets(self, polys: Sequence[Polynomial]) -> list:
        return [self.ctx.leaf_jet(p, self.cert_order) for p in polys]

    def point_excluded(self) -> bool:
        return any(g.evaluate(self.ctx.point) != 0 for g in self.ideal.generators)

    def local_basis(self) -> list:
        """Standard basis of the local generators' truncations, cached; the
        generators are first stripped of unit cofactors (same ideal)."""
        if self._local_basis is None:
            from .germs import simplify_local_generator
            from .localbasis import standard_basis
            polys = []
            for j in self.local_gens:
                s = simplify_local_generator(j)
                s = s.regenerate(self.cert_order) if s.can_regenerate() \
                    else s.truncate(self.cert_order)
                if not s.is_zero():
                    polys.append(s.to_polynomial())
            self._local_basis = standard_basis(polys) if polys else []
        return self._local_basis

    def local_member(self, jet: Jet2) -> bool:
        """Membership in the local ideal, certified up to cert_order (or the
        probe's own stored order when it cannot regenerate)."""
        if jet.is_zero():
            return True
        basis = self.local_basis()
        if not basis:
            return False
        from .localbasis import mora_normal_form
        effective = self.cert_order if jet.can_regenerate() \
            else min(self.cert_order, jet.order)
        work = jet.regenerate(effective)
        target = work.to_polynomial()
        if target.is_zero():
            return True
        rem = mora_normal_form(target, basis)
        return rem.is_zero() or min(sum(m) for m in rem.terms) > effective

    def describe(self) -> dict:
        return {
            "global_generators": [str(g) for g in self.ideal.generators],
            "local_generators": [str(j.to_polynomial()) for j in self.local_gens],
            "certificate_order": self.cert_order,
            "radical_exact": self.radical_exact,
            "nonisolated_certified": self.nonisolated_certified,
        }


def make_pair(ideal: IdealPresentation, local_gens: Sequence[Jet2],
              ctx: FoliationContext, cert_order: Optional[int] = None) -> NoetherianPair:
    """Validate the defining containment: every global generator's leaf jet
    reduces to zero modulo the local generators, up to the certificate
    order."""
    local_gens = tuple(local_gens)
    if cert_order is None:
        cert_order = max((j.order for j in local_gens), default=8)
    # a producer-less generator caps what the pair can honestly certify
    for j in local_gens:
        if not j.can_regenerate():
            cert_order = min(cert_order, j.order)
    pair = NoetherianPair(ideal, local_gens, ctx, cert_order)
    verify_pair(pair)
    return pair


def verify_pair(pair: NoetherianPair):
    for g in pair.ideal.generators:
        jet = pair.ctx.leaf_jet(g, pair.cert_order)
        if not pair.local_member(jet):
            raise HypothesisError(
                f"pair containment fails: restriction of {g} is not in the local ideal",
                witness=g)


@dataclass
class LedgerStep:
    """One controllable inclusion: mult(before) <= a*mult(after) + b."""

    kind: str
    transfer: tuple
    evidence: dict
    degrees: tuple
    sound: bool = True

    def apply(self, m):
        a, b = self.transfer
        return a * m + b

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "transfer": {"scale": self.transfer[0], "offset": self.transfer[1]},
            "evidence": self.evidence,
            "degrees": {"before": self.degrees[0], "after": self.degrees[1]},
            "sound": self.sound,
        }


@dataclass
class BoundLedger:
    steps: list = dfield(default_factory=list)
    status: str = "in-progress"   # point-excluded | exhausted-budget | radical-partial

    def composed_bound(self, final_mult: int = 0):
        m = final_mult
        for step in reversed(self.steps):
            m = step.apply(m)
        return m

    def all_sound(self) -> bool:
        return all(s.sound for s in self.steps)

    def describe(self) -> dict:
        return {"status": self.status,
                "steps": [s.describe() for s in self.steps]}


@dataclass
class BoundReport:
    bound: Optional[int]
    ledger: BoundLedger
    direct_value: Optional[object]
    trace: dict

    def describe(self) -> dict:
        out = dict(self.trace)
        out["bound"] = self.bound
        out["direct_value"] = None if self.direct_value in (None, inf) \
            else int(self.direct_value)
        out["ledger"] = self.ledger.describe()
        return out


# ---------------------------------------------------------------------------
# the three controllable inclusions
# ---------------------------------------------------------------------------


def radical_extension(pair: NoetherianPair, options: PipelineOptions = PipelineOptions(),
                      budget: Optional[Budget] = None):
    """Radical of the global side; the local side gains the new generators'
    restrictions.  Transfer: m -> M^2 m with M = sum(e_i - 1) + 1 over the
    certified exponents (two leaf variables).

    Returns (new_pair, step) with step None when nothing changed and the
    transfer is the identity."""
    J, cert, status = attempt_radical(pair.ideal, budget, options.exponent_cap)
    M = cert.max_weight()
    changed = set(J.generators) != set(pair.ideal.generators)
    if not changed and M == 1:
        out = NoetherianPair(pair.ideal, pair.local_gens, pair.ctx, pair.cert_order,
                             radical_exact=(status == "exact"),
                             nonisolated_certified=pair.nonisolated_certified)
        return out, None
    new_jets = [pair.ctx.leaf_jet(g, pair.cert_order) for g in J.generators
                if not member(g, pair.ideal)] if changed else []
    new_local = pair.local_gens + tuple(j for j in new_jets if not j.is_zero())
    out = NoetherianPair(J, new_local, pair.ctx, pair.cert_order,
                         radical_exact=(status == "exact"))
    verify_pair(out)
    step = LedgerStep(
        kind="radical",
        transfer=(M * M, 0),
        evidence={
            "generators": [str(g) for g in J.generators],
            "exponents": list(cert.exponents),
            "status": status,
            "weight": M,
        },
        degrees=(pair.ideal.max_degree(), J.max_degree()),
        sound=not cert.capped,
    )
    return out, step


def poisson_extension(pair: NoetherianPair, F: Polynomial, G: Polynomial,
                      budget: Optional[Budget] = None):
    """Adjoin the leafwise Poisson bracket of two ideal members to both
    sides.  Transfer: m -> m + 1."""
    for h in (F, G):
        if not member(h, pair.ideal, budget=budget):
            raise HypothesisError(f"poisson extension requires membership: {h} not in I",
                                  witness=h)
    bracket = pair.ctx.poisson(F, G)
    J = pair.ideal.extended([bracket]) if not bracket.is_zero() else pair.ideal
    jet = pair.ctx.leaf_jet(bracket, pair.cert_order)
    new_local = pair.local_gens + ((jet,) if not jet.is_zero() else ())
    out = NoetherianPair(J, new_local, pair.ctx, pair.cert_order)
    verify_pair(out)
    step = LedgerStep(
        kind="poisson",
        transfer=(1, 1),
        evidence={"F": str(F), "G": str(G), "bracket": str(bracket)},
        degrees=(pair.ideal.max_degree(), J.max_degree()),
    )
    return out, step


def _split_against_variety(pair: NoetherianPair, F: Polynomial):
    """Factor F's restriction into h (branches on the variety trace of I)
    and the cofactor f; returns (h_jet, f_jet, vanishing cycles)."""
    fL = pair.ctx.leaf_jet(F, pair.cert_order)
    if fL.is_zero():
        raise HypothesisError("restriction of F to the leaf is zero at this order")
    bs = germ_cycles(fL)
    restrictions = [pair.ctx.leaf_jet(g, pair.cert_order) for g in pair.ideal.generators]
    on_variety = []
    for cyc in bs.cycles:
        if all(germ_divides(r, cyc.factor) for r in restrictions):
            on_variety.append(cyc)
    if not on_variety:
        raise HypothesisError(
            "no factor of the restriction vanishes on the variety trace")
    order = pair.cert_order
    h = Jet2.constant(1, order)
    for cyc in on_variety:
        fac = cyc.factor.regenerate(order) if cyc.factor.can_regenerate() \
            else cyc.factor.truncate(order)
        h = h * fac ** cyc.multiplicity
    f = germ_divide(fL, h, order)
    if f is None:
        raise RegenerationRequest(2 * order + 8)
    return h, f, on_variety


def jacobian_extension(pair: NoetherianPair, F: Polynomial,
                       options: PipelineOptions = PipelineOptions(),
                       budget: Optional[Budget] = None):
    """Adjoin all order-k iterated flow derivatives of F globally and the
    reduced common factor locally; k is the minimal multiplicity of a
    factor of F's restriction supported on the variety trace.

    Transfer: the smaller of the certified direct exponent (least n with
    reduced^n in the local ideal) and the worst-case formula K*2^K."""
    if not member(F, pair.ideal, budget=budget):
        raise HypothesisError(f"jacobian extension requires membership: {F} not in I")
    if not pair.radical_exact:
        raise HypothesisError("jacobian extension requires a radical-certified ideal")
    if not pair.nonisolated_certified:
        raise HypothesisError(
            "jacobian extension requires certified non-isolated intersections")
    h, f, cycles = _split_against_variety(pair, F)
    if not pair.local_member(f):
        raise HypothesisError("cofactor of the variety branches is not in the local ideal")
    k = min(c.multiplicity for c in cycles)
    K = max(c.multiplicity for c in cycles)
    mu = h.vanishing_order()
    order = pair.cert_order
    reduced = Jet2.constant(1, order)
    for c in cycles:
        fac = c.factor.regenerate(order) if c.factor.can_regenerate() \
            else c.factor.truncate(order)
        reduced = reduced * fac
    # global side: all order-k iterated derivatives
    new_gens = []
    for a in range(k + 1):
        d = pair.ctx.iterated_derivative(F, a, k - a)
        if not d.is_zero() and not member(d, pair.ideal, budget=budget):
            new_gens.append(d)
    J = pair.ideal.extended(new_gens)
    new_local = pair.local_gens + (reduced,)
    # transfer: certified search first, formula as fallback
    worst_case_factor = K * 2 ** K
    certified_n = None
    power = Jet2.constant(1, order)
    for n in range(1, max(worst_case_factor, K * 2 ** mu) + 1):
        power = power * reduced
        if pair.local_member(power):
            certified_n = n
            break
    if certified_n is not None:
        factor_used = min(certified_n, worst_case_factor)
        evidence_kind = "certified-exponent-search"
    else:
        factor_used = K * 2 ** max(K, mu)
        evidence_kind = "worst-case-formula"
    out = NoetherianPair(J, new_local, pair.ctx, pair.cert_order,
                         nonisolated_certified=False)
    verify_pair(out)
    _assert_strict_progress(pair, cycles, k, new_gens)
    step = LedgerStep(
        kind="jacobian",
        transfer=(factor_used, 0),
        evidence={
            "F": str(F),
            "k": k,
            "K": K,
            "mu": mu,
            "worst_case_factor": worst_case_factor,
            "certified_exponent": certified_n,
            "basis": evidence_kind,
            "derivatives": [str(g) for g in new_gens],
            "reduced_factor": str(reduced.to_polynomial()),
            "removed_branches": [str(c.factor.to_polynomial()) for c in cycles
                                 if c.multiplicity == k],
            "local_generators": [str(j.to_polynomial()) for j in pair.local_gens],
            "local_order": pair.cert_order,
        },
        degrees=(pair.ideal.max_degree(), J.max_degree()),
    )
    return out, step


def _assert_strict_progress(pair: NoetherianPair, cycles, k: int, new_gens):
    """The order-k derivatives must not all vanish on each minimal-
    multiplicity cycle; this is what shrinks the variety trace."""
    if not new_gens:
        raise CertificateError("jacobian step produced no new generators")
    order = pair.cert_order
    for cyc in cycles:
        if cyc.multiplicity != k:
            continue
        jets = [pair.ctx.leaf_jet(g, order) for g in new_gens]
        if all(germ_divides(j, cyc.factor) for j in jets if not j.is_zero()):
            raise CertificateError(
                "jacobian step failed to remove a minimal-multiplicity branch")


# ---------------------------------------------------------------------------
# transverse pairs and the isolated-locus reduction
# ---------------------------------------------------------------------------


def find_transverse_pair(pair: NoetherianPair,
                         options: PipelineOptions = PipelineOptions(),
                         salt: int = 0, budget: Optional[Budget] = None):
    """Random rational combinations F, G of the generators whose bracket
    escapes the radical; None when all retries fail (evidence that every
    intersection is non-isolated)."""
    gens = pair.ideal.generators
    if not gens:
        raise DomainError("transverse search needs a nonzero ideal")
    rng = options.rng_for("transverse", salt)
    for _ in range(options.transverse_retries):
        a = [Fraction(rng.randint(-3, 3)) for _ in gens]
        b = [Fraction(rng.randint(-3, 3)) for _ in gens]
        F = sum((c * g for c, g in zip(a, gens)), Polynomial.zero(pair.ideal.ring))
        G = sum((c * g for c, g in zip(b, gens)), Polynomial.zero(pair.ideal.ring))
        if F.is_zero() or G.is_zero():
            continue
        bracket = pair.ctx.poisson(F, G)
        if bracket.is_zero():
            continue
        if not radical_membership(bracket, pair.ideal, budget):
            return F, G
    return None


def isolated_locus_reduction(pair: NoetherianPair,
                             options: PipelineOptions = PipelineOptions(),
                             budget: Optional[Budget] = None):
    """Alternate radical and Poisson extensions until no transverse pair
    exists; the final ideal is radical-certified and its variety is the
    non-isolated locus (up to the search evidence).

    Returns (pair, steps, completed)."""
    steps = []
    cap = 2 * len(pair.ideal.ring)
    state = pair
    for it in range(cap):
        state, rstep = radical_extension(state, options, budget)
        if rstep is not None:
            steps.append(rstep)
        if state.ideal.is_zero_ideal():
            state.nonisolated_certified = True
            return state, steps, True
        found = find_transverse_pair(state, options, salt=it, budget=budget)
        if found is None:
            state.nonisolated_certified = True
            return state, steps, True
        state, pstep = poisson_extension(state, found[0], found[1], budget)
        steps.append(pstep)
    return state, steps, False


# ---------------------------------------------------------------------------
# the full pipeline
# ---------------------------------------------------------------------------


def nonisolated_bound(F: Polynomial, G: Polynomial, ctx: FoliationContext,
                      options: PipelineOptions = PipelineOptions(),
                      budget: Optional[Budget] = None) -> BoundReport:
    """Bound the multiplicity at p of the pair of restrictions with their
    common branches removed.  Falls back to the isolated path automatically
    when the restrictions share no branch through p."""
    t0 = time.monotonic()
    order = options.jet_order or ctx.default_jet_order(F, G)
    last_exc = None
    for attempt in range(options.regeneration_retries):
        try:
            return _nonisolated_bound_once(F, G, ctx, order, options, budget, t0)
        except RegenerationRequest as e:
            last_exc = e
            order = max(2 * order, e.needed_order)
    raise InconclusiveError(f"pipeline did not stabilize: {last_exc}")


def _nonisolated_bound_once(F, G, ctx, order, options, budget, t0) -> BoundReport:
    fL = ctx.leaf_jet(F, order)
    gL = ctx.leaf_jet(G, order)
    if fL.is_zero() or gL.is_zero():
        raise HypothesisError("a restriction to the leaf vanishes at this order")
    split = split_common(fL, gL)
    if split.f.is_unit() and split.g.is_unit():
        raise HypothesisError("common branch set equals germ: nothing remains to bound")
    trace: dict = {
        "inputs": {"F": str(F), "G": str(G), "point": [str(c) for c in ctx.point]},
        "jet_order": order,
        "split": split.describe(),
        "rounds": [],
    }
    try:
        direct, _cert = local_multiplicity(split.f, split.g)
    except (InconclusiveError, BudgetExceededError):
        direct = None
    if direct is inf:
        raise HypothesisError(
            "remaining branches still meet: the multiplicity to bound is not finite")
    isolated_path = split.h_f.is_unit()
    if isolated_path:
        local0 = [fL, gL]
    else:
        local0 = [split.f, split.g]
    ideal0 = IdealPresentation(ctx.ring, (F, G))
    state = make_pair(ideal0, local0, ctx, cert_order=order)
    ledger = BoundLedger()
    branch_budget = 1 if isolated_path else max(split.h_f.vanishing_order() or 1, 1)
    status = None
    for jround in range(branch_budget + 1):
        round_info = {"round": jround, "stage": "isolated-locus-reduction"}
        state, steps, completed = isolated_locus_reduction(state, options, budget)
        ledger.steps.extend(steps)
        round_info["ideal"] = state.describe()
        trace["rounds"].append(round_info)
        if not completed:
            status = "exhausted-budget"
            break
        if state.point_excluded():
            status = "point-excluded"
            break
        if isolated_path:
            status = "exhausted-budget"
            break
        if not state.radical_exact:
            status = "radical-partial"
            break
        if jround == branch_budget:
            status = "exhausted-budget"
            break
        state, jstep = jacobian_extension(state, F, options, budget)
        ledger.steps.append(jstep)
        trace["rounds"].append({"round": jround, "stage": "jacobian",
                                "step": jstep.describe(),
                                "ideal": state.describe()})
        if state.point_excluded():
            status = "point-excluded"
            break
    ledger.status = status or "exhausted-budget"
    if not ledger.all_sound() and ledger.status == "point-excluded":
        ledger.status = "radical-partial"
    bound = ledger.composed_bound(0) if ledger.status == "point-excluded" else None
    # Local membership certificates are truncation-limited: they become
    # exact once the working order exceeds the multiplicity of the local
    # ideal they certify against.  The i-th local ideal's multiplicity is
    # bounded backward-composed from the chain end, and the first one by
    # the direct value, so bootstrap the order past all of those.
    if bound is not None:
        tail = 0
        intermediate = 0
        for step in reversed(ledger.steps[1:] if ledger.steps else []):
            tail = step.apply(tail)
            intermediate = max(intermediate, tail)
        first = direct if direct not in (None, inf) else bound
        needed = max(intermediate, first)
        if order <= needed:
            raise RegenerationRequest(needed + 4)
    trace["timings"] = {"seconds": time.monotonic() - t0}
    trace["final_status"] = ledger.status
    report = BoundReport(bound=bound, ledger=ledger,
                         direct_value=direct, trace=trace)
    if bound is not None and direct not in (None, inf) and direct > bound:
        raise CertificateError(
            f"soundness violation: direct value {direct} exceeds bound {bound}")
    return report
