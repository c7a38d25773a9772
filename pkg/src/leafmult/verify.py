"""Randomized verification suites for the multiplicity-transfer lemmas,
plus offline re-verification of emitted traces.

Each suite draws seeded random instances, computes both sides of its
inequality with exact arithmetic, and records any violation verbatim; a
violation is a release blocker, not a tolerance question.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import inf

from .errors import ParseError
from .foliation import FoliationContext, VectorField
from .ideals import (
    DEGREVLEX,
    LEX,
    IdealPresentation,
    groebner,
    ideal_power,
    leading_monomial,
    leading_term_ideal,
    member,
    multiplicity_zero_dim,
    normal_form,
)
from .jets import Jet2
from .localbasis import local_quotient_dimension
from .poly import Polynomial, monomial_divides, parse_polynomial

T = ("t1", "t2")


@dataclass
class SuiteReport:
    suite: str
    cases: int
    violations: list = dfield(default_factory=list)

    def passed(self) -> bool:
        return not self.violations

    def describe(self) -> dict:
        return {"suite": self.suite, "cases": self.cases,
                "violations": self.violations}


def _rng(seed, name: str) -> random.Random:
    return random.Random(f"{seed}|{name}")


def _random_vanishing_poly(rng, ring=T, max_deg=2, terms=2) -> Polynomial:
    acc = {}
    n = len(ring)
    for _ in range(rng.randint(1, terms)):
        mono = tuple(rng.randint(0, max_deg) for _ in range(n))
        if sum(mono) == 0:
            mono = tuple(1 if i == 0 else 0 for i in range(n))
        acc[mono] = Fraction(rng.randint(-3, 3) or 1)
    return Polynomial(ring, acc)


def _finite_local_ideal(rng):
    """Generators with pure-power anchors so the colength is finite."""
    a = rng.randint(1, 3)
    b = rng.randint(1, 3)
    g1 = Polynomial.monomial(T, (a, 0)) + _random_vanishing_poly(rng) * rng.randint(0, 1)
    g2 = Polynomial.monomial(T, (0, b)) + _random_vanishing_poly(rng) * rng.randint(0, 1)
    return [g1, g2]


def suite_power_lemma(seed, count: int) -> SuiteReport:
    """f^n in K implies mult K <= n * mult <K, f> (local germs)."""
    rng = _rng(seed, "power-lemma")
    report = SuiteReport("power-lemma", count)
    for case in range(count):
        g = _random_vanishing_poly(rng)
        n = rng.randint(1, 3)
        anchors = _finite_local_ideal(rng)
        gens = [g ** n] + anchors
        f = g + sum((Fraction(rng.randint(-2, 2)) * h for h in anchors),
                    Polynomial.zero(T))
        m_k = local_quotient_dimension(gens)
        if m_k is inf:
            continue
        m_ext = local_quotient_dimension(gens + [f])
        if not m_k <= n * m_ext:
            report.violations.append({
                "case": case, "K": [str(p) for p in gens], "f": str(f),
                "n": n, "mult_K": m_k, "mult_ext": m_ext})
    return report


def suite_ideal_power(seed, count: int) -> SuiteReport:
    """K' containing K^n has mult K' <= n^m * mult K (zero-dimensional)."""
    rng = _rng(seed, "ideal-power")
    report = SuiteReport("ideal-power", count)
    for case in range(count):
        m_vars = rng.choice([2, 2, 3])
        ring = ("x", "y", "z")[:m_vars]
        gens = []
        for i in range(m_vars):
            d = rng.randint(1, 2)
            p = Polynomial.monomial(ring, tuple(d if j == i else 0 for j in range(m_vars)))
            if rng.random() < 0.5:
                extra = tuple(rng.randint(0, d - 1) for _ in range(m_vars))
                p = p + Polynomial.monomial(ring, extra, Fraction(rng.randint(-2, 2) or 1))
            gens.append(p)
        K = IdealPresentation(ring, tuple(gens))
        mult_K = multiplicity_zero_dim(K)
        if mult_K is inf:
            continue
        n = rng.randint(1, 3)
        Kn = ideal_power(K, n)
        extras = tuple(g for g in Kn.generators if rng.random() < 0.3)
        K_prime = Kn.extended(extras)
        mult_Kp = multiplicity_zero_dim(K_prime)
        if not mult_Kp <= n ** m_vars * mult_K:
            report.violations.append({
                "case": case, "K": [str(g) for g in K.generators], "n": n,
                "mult_K": mult_K, "mult_Kprime": mult_Kp})
    return report


def suite_lt_facts(seed, count: int) -> SuiteReport:
    """mult K = mult LT(K) for every order tested, and each generator of
    LT(K)^n lies in LT(K^n)."""
    rng = _rng(seed, "lt-facts")
    report = SuiteReport("lt-facts", count)
    for case in range(count):
        gens = []
        for i in range(2):
            d = rng.randint(1, 3)
            p = Polynomial.monomial(T, tuple(d if j == i else 0 for j in range(2)))
            for _ in range(rng.randint(0, 2)):
                extra = (rng.randint(0, d), rng.randint(0, d))
                if sum(extra) < d + (extra[i] == d):
                    p = p + Polynomial.monomial(T, extra, Fraction(rng.randint(-2, 2) or 1))
            gens.append(p)
        K = IdealPresentation(T, tuple(gens))
        mults = set()
        for order in (DEGREVLEX, LEX):
            m = multiplicity_zero_dim(K, order)
            mults.add(m)
            lt = leading_term_ideal(K, order)
            if multiplicity_zero_dim(lt, order) != m:
                report.violations.append({"case": case, "K": [str(g) for g in gens],
                                          "reason": "mult(LT) mismatch"})
        if len(mults) > 1:
            report.violations.append({"case": case, "K": [str(g) for g in gens],
                                      "reason": "order-dependent multiplicity",
                                      "values": sorted(str(m) for m in mults)})
        n = rng.randint(2, 3)
        lt_pow = ideal_power(leading_term_ideal(K, DEGREVLEX), n)
        lt_of_pow = leading_term_ideal(ideal_power(K, n), DEGREVLEX)
        lms = [leading_monomial(h, DEGREVLEX) for h in lt_of_pow.generators]
        for g in lt_pow.generators:
            mg = leading_monomial(g, DEGREVLEX)
            if not any(monomial_divides(lm, mg) for lm in lms):
                report.violations.append({"case": case, "reason": "LT power escape",
                                          "monomial": str(g)})
    return report


def suite_poisson_lemma(seed, count: int) -> SuiteReport:
    """mult K <= mult <K, {f,g}> + 1 for f, g in K, with the leafwise
    bracket realized as the coordinate Jacobian determinant."""
    rng = _rng(seed, "poisson-lemma")
    report = SuiteReport("poisson-lemma", count)
    for case in range(count):
        gens = _finite_local_ideal(rng)
        K = gens
        m_k = local_quotient_dimension(K)
        if m_k is inf:
            continue
        combos = []
        for _ in range(2):
            c = Polynomial.zero(T)
            for g in gens:
                factor = _random_vanishing_poly(rng, max_deg=1, terms=1) \
                    if rng.random() < 0.4 else \
                    Polynomial.constant(T, Fraction(rng.randint(-2, 2)))
                c = c + factor * g
            combos.append(c)
        f, g = combos
        bracket = f.derive(0) * g.derive(1) - f.derive(1) * g.derive(0)
        m_ext = local_quotient_dimension(K + [bracket])
        if not m_k <= m_ext + 1:
            report.violations.append({
                "case": case, "K": [str(p) for p in K],
                "f": str(f), "g": str(g), "bracket": str(bracket),
                "mult_K": m_k, "mult_ext": m_ext})
    return report


SUITES = {
    "power-lemma": suite_power_lemma,
    "ideal-power": suite_ideal_power,
    "lt-facts": suite_lt_facts,
    "poisson-lemma": suite_poisson_lemma,
}


def run_suite(name: str, seed=0, count: int = 100) -> SuiteReport:
    if name not in SUITES:
        raise ParseError(f"unknown suite {name!r}; available: {sorted(SUITES)}")
    return SUITES[name](seed, count)


def run_all_suites(seed=0, count: int = 100) -> list:
    return [run_suite(name, seed, count) for name in sorted(SUITES)]


# ---------------------------------------------------------------------------
# trace re-verification
# ---------------------------------------------------------------------------


@dataclass
class TraceCheck:
    step: int
    kind: str
    ok: bool
    detail: str = ""


def verify_trace(trace: dict) -> list:
    """Re-check every certificate recorded in a bound trace: membership of
    radical exponents, recomputed brackets, derivative sets, local
    exponent memberships, and the final exclusion of the base point."""
    checks: list[TraceCheck] = []
    report = trace.get("report", trace)
    manifest = trace.get("manifest") or {}
    ring = tuple(manifest["variables"])
    v1 = VectorField(ring, tuple(parse_polynomial(t, ring) for t in manifest["v1"]))
    v2 = VectorField(ring, tuple(parse_polynomial(t, ring) for t in manifest["v2"]))
    ctx = FoliationContext(v1, v2, [Fraction(x) for x in manifest["point"]])
    inputs = report["inputs"]
    F = parse_polynomial(inputs["F"], ring)
    G = parse_polynomial(inputs["G"], ring)
    current = IdealPresentation(ring, (F, G))
    for idx, step in enumerate(report["ledger"]["steps"]):
        kind = step["kind"]
        ev = step["evidence"]
        if kind == "radical":
            new = IdealPresentation(ring, tuple(parse_polynomial(t, ring)
                                                for t in ev["generators"]))
            gb = groebner(current)
            ok = True
            detail = ""
            for gtext, e in zip(ev["generators"], ev["exponents"]):
                g = parse_polynomial(gtext, ring)
                if not normal_form(g ** e, gb).is_zero():
                    ok, detail = False, f"{gtext}^{e} is not a member"
                    break
            if ok:
                for g in current.generators:
                    if not member(g, new):
                        ok, detail = False, f"lost generator {g}"
                        break
            M = ev["weight"]
            if ok and step["transfer"] != {"scale": M * M, "offset": 0}:
                ok, detail = False, "transfer does not match the exponent weight"
            checks.append(TraceCheck(idx, kind, ok, detail))
            current = new
        elif kind == "poisson":
            Fp = parse_polynomial(ev["F"], ring)
            Gp = parse_polynomial(ev["G"], ring)
            ok = member(Fp, current) and member(Gp, current)
            detail = "" if ok else "combination is not an ideal member"
            bracket = ctx.poisson(Fp, Gp)
            if ok and str(bracket) != ev["bracket"]:
                ok, detail = False, "bracket mismatch"
            checks.append(TraceCheck(idx, kind, ok, detail))
            if not bracket.is_zero():
                current = current.extended([bracket])
        elif kind == "jacobian":
            Fp = parse_polynomial(ev["F"], ring)
            ok = member(Fp, current)
            detail = "" if ok else "F is not an ideal member"
            k = ev["k"]
            expected = set()
            for a in range(k + 1):
                d = ctx.iterated_derivative(Fp, a, k - a)
                if not d.is_zero() and not member(d, current):
                    expected.add(str(d))
            if ok and expected != set(ev["derivatives"]):
                ok, detail = False, "derivative set mismatch"
            n = ev.get("certified_exponent")
            if ok and n is not None:
                from .germs import local_membership
                order = ev["local_order"]
                local = [Jet2.from_polynomial(parse_polynomial(t, T), order)
                         for t in ev["local_generators"]]
                reduced = Jet2.from_polynomial(
                    parse_polynomial(ev["reduced_factor"], T), order)
                if not local_membership(reduced ** n, local, order):
                    ok, detail = False, "certified exponent fails re-verification"
            checks.append(TraceCheck(idx, kind, ok, detail))
            current = current.extended([parse_polynomial(t, ring)
                                        for t in ev["derivatives"]])
        else:
            checks.append(TraceCheck(idx, kind, False, f"unknown step kind {kind}"))
    if report.get("final_status") == "point-excluded":
        excluded = any(g.evaluate(ctx.point) != 0 for g in current.generators)
        checks.append(TraceCheck(len(checks), "final",
                                 excluded,
                                 "" if excluded else "point not excluded by final ideal"))
        bound = report.get("bound")
        m = 0
        for step in reversed(report["ledger"]["steps"]):
            m = step["transfer"]["scale"] * m + step["transfer"]["offset"]
        checks.append(TraceCheck(len(checks), "bound", m == bound,
                                 "" if m == bound else f"recomputed {m} != {bound}"))
    return checks
