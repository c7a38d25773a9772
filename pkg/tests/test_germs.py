import random
from fractions import Fraction
from math import inf

import pytest

from leafmult.errors import DomainError
from leafmult.germs import (
    factor_multiplicities,
    germ_divide,
    germ_divides,
    jet_inverse,
    local_membership,
    local_multiplicity,
    newton_puiseux,
    split_common,
)
from leafmult.jets import Jet2
from leafmult.poly import Polynomial, parse_polynomial

T = ("t1", "t2")


def J(text, order=12):
    return Jet2.from_polynomial(parse_polynomial(text, T), order)


def transcendental_exp(order=12):
    """e^t1 - 1 as a jet with a producer (a genuinely non-polynomial germ)."""
    def produce(n):
        coeffs = {}
        fact = 1
        for a in range(1, n + 1):
            fact *= a
            coeffs[(a, 0)] = Fraction(1, fact)
        return Jet2(n, coeffs, produce)
    return produce(order)


class TestJetInverse:
    def test_geometric(self):
        inv = jet_inverse(J("1-t1", 6))
        assert all(inv.coefficient(a, 0) == 1 for a in range(7))

    def test_nonunit_rejected(self):
        with pytest.raises(DomainError):
            jet_inverse(J("t1"))

    def test_product_is_one(self):
        j = J("1+2*t1-t2+t1*t2", 8)
        assert (j * jet_inverse(j)).to_polynomial() == Polynomial.constant(T, 1)


class TestGermDivide:
    def test_exact_polynomial(self):
        q = germ_divide(J("t1^2-t1*t2^2"), J("t1"))
        assert q.to_polynomial() == parse_polynomial("t1-t2^2", T)

    def test_unit_divisor(self):
        q = germ_divide(J("t1"), J("1+t1"))
        # t1/(1+t1) = t1 - t1^2 + t1^3 - ...
        assert q.coefficient(1, 0) == 1 and q.coefficient(2, 0) == -1

    def test_germ_but_not_poly_division(self):
        # t1 + t1^2 = t1 * (1 + t1): divides t1^2 as a germ
        q = germ_divide(J("t1^2"), J("t1+t1^2"))
        assert q is not None
        check = q * J("t1+t1^2")
        assert (check - J("t1^2")).is_zero_up_to(q.order)

    def test_nondivisible(self):
        assert germ_divide(J("t2"), J("t1")) is None
        assert not germ_divides(J("t1+t2^2"), J("t1"))

    def test_cusp_power(self):
        h = J("(t2^2-t1^3)^2", 16)
        hp = J("t2^2-t1^3", 16)
        q = germ_divide(h, hp)
        assert q is not None
        assert (q - hp).is_zero_up_to(10)


class TestLocalMultiplicity:
    def test_catalog(self):
        assert local_multiplicity(J("t1"), J("t2"))[0] == 1
        assert local_multiplicity(J("t1^2"), J("t2^3"))[0] == 6
        assert local_multiplicity(J("t2^2-t1^3"), J("t2"))[0] == 3
        assert local_multiplicity(J("t1-t2^2"), J("t1-2*t2^2"))[0] == 2

    def test_certificates_present(self):
        value, cert = local_multiplicity(J("t1-t2^2"), J("t1-2*t2^2"))
        assert value == 2
        assert cert.holds()
        assert cert.orders[1] == cert.orders[0] + 1

    def test_unit_gives_zero(self):
        assert local_multiplicity(J("1+t1"), J("t2"))[0] == 0

    def test_common_factor_infinite(self):
        value, why = local_multiplicity(J("t1*(t1-t2^2)"), J("t1*(t1-2*t2^2)"))
        assert value == inf

    def test_symmetric_and_matches_staircase(self):
        rng = random.Random(6)
        pool = ["t1^2-t2^3", "t1*t2-t1^3", "t2^2+t1^2", "t1^3-t2^4", "t1+t2^2"]
        for _ in range(10):
            a, b = rng.sample(pool, 2)
            va, _ = local_multiplicity(J(a), J(b))
            vb, _ = local_multiplicity(J(b), J(a))
            assert va == vb

    def test_additivity(self):
        f = J("t1-t2^3", 16)
        g1 = J("t2-t1^2", 16)
        g2 = J("t2+t1^2", 16)
        m1, _ = local_multiplicity(f, g1)
        m2, _ = local_multiplicity(f, g2)
        m12, _ = local_multiplicity(f, g1 * g2)
        assert m12 == m1 + m2

    def test_transcendental_pair(self):
        f = transcendental_exp(10)
        value, cert = local_multiplicity(f, J("t2", 10))
        assert value == 1


class TestLocalMembership:
    def test_member(self):
        assert local_membership(J("t1^2"), [J("t1"), J("t2")])
        assert local_membership(J("t1"), [J("t1+t1^2")])

    def test_nonmember(self):
        assert not local_membership(J("t2"), [J("t1+t1^2")])
        assert not local_membership(J("t1"), [J("t1^2"), J("t2^2")])


class TestNewtonPuiseux:
    def test_cusp(self):
        bs = newton_puiseux(J("t2^2-t1^3", 16))
        assert len(bs.cycles) == 1
        c = bs.cycles[0]
        assert c.ram_index == 2 and c.multiplicity == 1
        assert bs.mu == 2

    def test_two_lines(self):
        bs = newton_puiseux(J("t2^2-t1^2", 12))
        assert len(bs.cycles) == 2
        assert all(c.ram_index == 1 and c.multiplicity == 1 for c in bs.cycles)
        assert bs.mu == 2

    def test_double_line(self):
        bs = newton_puiseux(J("t2^2", 12))
        assert len(bs.cycles) == 1
        assert bs.cycles[0].multiplicity == 2
        assert bs.mu == 2

    def test_vertical_branch(self):
        bs = newton_puiseux(J("t1", 8))
        assert len(bs.cycles) == 1
        assert bs.cycles[0].order_at_origin() == 1

    def test_irrational_pair_is_one_cycle(self):
        bs = newton_puiseux(J("t2^2-2*t1^2", 12))
        assert len(bs.cycles) == 1
        assert bs.cycles[0].field_degree == 2
        assert bs.cycles[0].branch_count() == 2

    def test_poly_irreducible_with_two_germ_branches(self):
        bs = newton_puiseux(J("t2^2-t1^2-t1^3", 14))
        assert len(bs.cycles) == 2

    def test_reconstruction_random_products(self):
        rng = random.Random(11)
        pool = [parse_polynomial(t, T) for t in
                ["t1", "t2", "t1-t2^2", "t2-t1^2", "t2^2-t1^3", "t1+t2"]]
        for _ in range(8):
            parts = rng.sample(pool, rng.randint(1, 3))
            p = Polynomial.constant(T, 1)
            for q in parts:
                p = p * q ** rng.randint(1, 2)
            bs = newton_puiseux(Jet2.from_polynomial(p, 18))
            total = sum(c.multiplicity * c.order_at_origin() for c in bs.cycles)
            assert total == bs.mu == p.total_degree() if False else total == bs.mu

    def test_transcendental_smooth_germ(self):
        bs = newton_puiseux(transcendental_exp(10))
        assert len(bs.cycles) == 1
        assert bs.cycles[0].multiplicity == 1
        assert bs.mu == 1


class TestSplitCommon:
    def test_flat_example(self):
        s = split_common(J("t1*(t1-t2^2)", 14), J("t1*(t1-2*t2^2)", 14))
        assert s.h_f.to_polynomial() == parse_polynomial("t1", T)
        assert s.h_g.to_polynomial() == parse_polynomial("t1", T)
        assert s.f.to_polynomial() == parse_polynomial("t1-t2^2", T)
        assert s.g.to_polynomial() == parse_polynomial("t1-2*t2^2", T)

    def test_different_multiplicities(self):
        s = split_common(J("t1^2*t2", 12), J("t1*t2^2", 12))
        assert s.h_f.to_polynomial() == parse_polynomial("t1^2*t2", T)
        assert s.h_g.to_polynomial() == parse_polynomial("t1*t2^2", T)
        assert s.f.is_unit() and s.g.is_unit()

    def test_coprime(self):
        s = split_common(J("t1", 10), J("t2", 10))
        assert s.h_f.is_unit() and s.h_g.is_unit()
        assert s.f.to_polynomial() == parse_polynomial("t1", T)

    def test_contract_products(self):
        fL, gL = J("t1^2*(t1-t2^2)", 16), J("t1*(t1-2*t2^2)", 16)
        s = split_common(fL, gL)
        assert ((s.h_f * s.f) - fL).is_zero_up_to(s.certified_order)
        assert ((s.h_g * s.g) - gL).is_zero_up_to(s.certified_order)
        value, _ = local_multiplicity(s.f, s.g)
        assert value == 2

    def test_transcendental_split(self):
        f = transcendental_exp(12)           # unit * t1
        g = J("t1*(t1-t2^2)", 12)
        s = split_common(f, g)
        # common branch t1 = 0
        assert s.h_f.vanishing_order() == 1
        assert s.h_g.vanishing_order() == 1
        assert s.f.is_unit()
        value, _ = local_multiplicity(s.f, s.g)
        assert value == 0


class TestFactorMultiplicities:
    def test_mixed(self):
        fm = factor_multiplicities(J("t1^2*(t1-t2^2)", 14))
        assert fm.k == 1 and fm.K == 2
        # t1*(t1 - t2^2) with each factor normalized to leading coefficient 1
        assert fm.reduced.to_polynomial() == parse_polynomial("t1*t2^2-t1^2", T)
        assert fm.mu == 3
        assert fm.branch_count == 3

    def test_single_line(self):
        fm = factor_multiplicities(J("t1", 8))
        assert fm.k == fm.K == 1
        assert fm.reduced.to_polynomial() == parse_polynomial("t1", T)

    def test_cusp_squared(self):
        fm = factor_multiplicities(J("(t2^2-t1^3)^2", 20))
        assert fm.k == fm.K == 2
        assert fm.mu == 4
        # h divides reduced^K
        assert germ_divides(fm.reduced ** fm.K, J("(t2^2-t1^3)^2", 20))

    def test_reduced_is_squarefree(self):
        from leafmult.poly import squarefree_part
        fm = factor_multiplicities(J("t1^3*t2^2", 12))
        red = fm.reduced.to_polynomial()
        assert squarefree_part(red) == red or \
            squarefree_part(red) == parse_polynomial("t1*t2", T)


class TestCrossEngineOracle:
    def test_local_equals_global_when_origin_is_the_only_zero(self):
        # when the pair cuts out exactly the origin, the local quotient
        # dimension agrees with the global staircase count
        from leafmult.ideals import (IdealPresentation, attempt_radical,
                                     multiplicity_zero_dim)
        cases = [
            ("t1", "t2"),
            ("t1^2", "t2^3"),
            ("t1^2-t2^3", "t2^2"),
            ("t1^3", "t1*t2+t2^4"),
        ]
        for ftext, gtext in cases:
            f, g = parse_polynomial(ftext, T), parse_polynomial(gtext, T)
            I = IdealPresentation(T, (f, g))
            rad, _, status = attempt_radical(I)
            assert status == "exact"
            # origin-only: the radical is the maximal ideal
            assert set(str(p) for p in rad.generators) == {"t1", "t2"}
            local, _ = local_multiplicity(Jet2.from_polynomial(f, 16),
                                          Jet2.from_polynomial(g, 16))
            assert local == multiplicity_zero_dim(I), (ftext, gtext)


class TestBranchSubstitution:
    def test_parameterization_annihilates_source(self):
        # substituting a cycle's parameterization into the defining germ
        # gives zero up to the certified order
        from leafmult.germs import germ_cycles
        bs = germ_cycles(J("t2^2-t1^3", 16))
        cyc = bs.cycles[0]
        bp = cyc.param
        assert bp is not None
        K = bp.field
        lam_pow = {0: K.one}
        src = bs.frame.push(bs.source)
        prec = bp.series.prec
        residual = {}
        series_pows = {0: {0: K.one}}

        def series_power(j):
            if j not in series_pows:
                prev = series_power(j - 1)
                out = {}
                for e1, c1 in prev.items():
                    for e2, c2 in bp.series.coeffs:
                        e = e1 + e2
                        if e >= prec:
                            continue
                        out[e] = K.add(out.get(e, K.zero), K.mul(c1, c2))
                series_pows[j] = out
            return series_pows[j]

        for (i, jdeg), c in src.coeffs.items():
            lam_i = lam_pow.setdefault(i, None)
            if lam_i is None:
                lam_i = K.one
                for _ in range(i):
                    lam_i = K.mul(lam_i, bp.lam)
                lam_pow[i] = lam_i
            base = K.mul(K.coerce(c), lam_i)
            for e, v in series_power(jdeg).items():
                s_exp = bp.ram * i + e
                if s_exp >= prec:
                    continue
                residual[s_exp] = K.add(residual.get(s_exp, K.zero), K.mul(base, v))
        assert all(K.is_zero(v) for v in residual.values())


class TestInconclusive:
    def test_producerless_jets_raise_inconclusive(self):
        from leafmult.errors import InconclusiveError
        # staircase cannot fit in the stored order and nothing can regenerate
        bare_f = Jet2(3, {(2, 0): Fraction(1)})
        bare_g = Jet2(3, {(0, 3): Fraction(1)})
        with pytest.raises(InconclusiveError):
            local_multiplicity(bare_f, bare_g)

    def test_infinite_needs_a_matched_branch(self):
        from math import inf
        value, why = local_multiplicity(J("t1*(t1-t2^2)", 16), J("t1*(t1+t2^2)", 16))
        assert value == inf
        assert "t1" in str(why)


class TestExtensionFieldCycles:
    def test_irrational_ramified_cycle(self):
        # (t2^2 - 2 t1^2)^2 + t1^5: a single cycle, ramified and quadratic
        # over the rationals, whose defining polynomial is the source itself
        src = J("(t2^2-2*t1^2)^2 + t1^5", 24)
        bs = newton_puiseux(src)
        assert len(bs.cycles) == 1
        c = bs.cycles[0]
        assert c.ram_index == 2
        assert c.field_degree == 2
        assert c.multiplicity == 1
        assert c.branch_count() == 2
        assert bs.mu == 4
