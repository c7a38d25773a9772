import random
from fractions import Fraction
from math import inf

import pytest

from leafmult.errors import BudgetExceededError, DomainError
from leafmult.ideals import (
    DEGREVLEX,
    LEX,
    Budget,
    IdealPresentation,
    MonomialOrder,
    attempt_radical,
    dimension,
    eliminant,
    groebner,
    ideal_power,
    leading_monomial,
    leading_term_ideal,
    member,
    multiplicity_zero_dim,
    normal_form,
    nullstellensatz_exponent,
    radical_membership,
    reduce_poly,
)
from leafmult.poly import Polynomial, parse_polynomial

RING = ("x", "y")


def P(text, ring=RING):
    return parse_polynomial(text, ring)


def ideal(*texts, ring=RING):
    return IdealPresentation(ring, tuple(parse_polynomial(t, ring) for t in texts))


class TestOrders:
    def test_degrevlex(self):
        o = DEGREVLEX
        assert o.greater((2, 0), (1, 1))  # x^2 > xy
        assert o.greater((1, 1), (0, 2))  # xy > y^2
        assert o.greater((1, 0), (0, 1))  # x > y
        assert o.greater((0, 1), (0, 0))  # global: 1 smallest

    def test_lex(self):
        assert LEX.greater((1, 0), (0, 5))

    def test_local_one_largest(self):
        o = MonomialOrder("local")
        assert o.greater((0, 0), (1, 0))
        assert o.greater((1, 0), (2, 0))
        assert o.greater((1, 0), (0, 1))

    def test_degrevlex_three_vars(self):
        # classic: x*z vs y^2 under degrevlex with x>y>z
        o = DEGREVLEX
        assert o.greater((0, 2, 0), (1, 0, 1))


class TestGroebner:
    def test_already_basis(self):
        gb = groebner(ideal("x", "y"))
        assert set(gb.basis) == {P("x"), P("y")}

    def test_spair_reduction(self):
        gb = groebner(ideal("x^2+y^2", "x^2-y^2"))
        assert set(gb.basis) == {P("x^2"), P("y^2")}

    def test_unit(self):
        gb = groebner(ideal("1"))
        assert gb.is_unit_ideal()

    def test_deterministic(self):
        a = groebner(ideal("x^2+y^2", "x^2-y^2"))
        b = groebner(IdealPresentation(RING, (P("x^2-y^2"), P("x^2+y^2"))))
        assert a.basis == b.basis

    def test_budget_error_carries_partial(self):
        big = ideal("x^3-2*x*y", "x^2*y-2*y^2+x")
        with pytest.raises(BudgetExceededError) as e:
            groebner(big, DEGREVLEX, Budget(cap=1))
        assert e.value.stage
        gb = groebner(big)
        assert len(gb.basis) >= 2

    def test_local_order_rejected(self):
        with pytest.raises(DomainError):
            groebner(ideal("x"), MonomialOrder("local"))


class TestNormalForm:
    def test_examples(self):
        assert normal_form(P("x^2"), groebner(ideal("x"))).is_zero()
        assert normal_form(P("x+y"), groebner(ideal("x-y"))) == P("2*y")
        assert normal_form(P("1"), groebner(ideal("x", "y"))) == P("1")

    def test_member_iff_certified_combination(self):
        rng = random.Random(5)
        pool = [P("x^2-y"), P("x*y-1"), P("y^3-x")]
        for _ in range(25):
            I = IdealPresentation(RING, tuple(g for g in pool if rng.random() < 0.7) or (pool[0],))
            gb = groebner(I)
            f = sum((g * P(str(rng.randint(-2, 2))) for g in I.generators),
                    Polynomial.zero(RING))
            quots, rem = reduce_poly(f, gb.basis, gb.order, with_quotients=True)
            assert rem.is_zero() == member(f, I)
            recombined = sum((q * b for q, b in zip(quots, gb.basis)), rem)
            assert recombined == f


class TestRadicalMembership:
    def test_examples(self):
        assert radical_membership(P("x"), ideal("x^2"))
        assert not radical_membership(P("y"), ideal("x^2"))
        assert radical_membership(P("x+y"), ideal("x^2", "y^2"))

    def test_binomial_cube_oracle(self):
        f = P("x+y")
        assert member(f ** 3, ideal("x^2", "y^2"))


class TestLeadingTermIdeal:
    def test_lex_example(self):
        lt = leading_term_ideal(ideal("x+y^2", "y^3"), LEX)
        assert set(lt.generators) == {P("x"), P("y^3")}

    def test_trivial(self):
        assert set(leading_term_ideal(ideal("x", "y")).generators) == {P("x"), P("y")}
        assert set(leading_term_ideal(ideal("x^2-y^2")).generators) == {P("x^2")}


class TestMultiplicity:
    def test_staircase_examples(self):
        assert multiplicity_zero_dim(ideal("x^2", "y^3")) == 6
        assert multiplicity_zero_dim(ideal("x", "y")) == 1
        assert multiplicity_zero_dim(ideal("x^2+y^2", "x^2-y^2")) == 4

    def test_infinite(self):
        assert multiplicity_zero_dim(ideal("x")) == inf

    def test_unit(self):
        assert multiplicity_zero_dim(ideal("1")) == 0

    def test_mult_equals_lt_mult_across_orders(self):
        rng = random.Random(17)
        for _ in range(20):
            I = _random_zero_dim(rng, RING)
            m_drl = multiplicity_zero_dim(I, DEGREVLEX)
            m_lex = multiplicity_zero_dim(I, LEX)
            assert m_drl == m_lex
            lt = leading_term_ideal(I, DEGREVLEX)
            assert multiplicity_zero_dim(lt, DEGREVLEX) == m_drl


class TestIdealPower:
    def test_examples(self):
        sq = ideal_power(ideal("x", "y"), 2)
        assert set(sq.generators) == {P("x^2"), P("x*y"), P("y^2")}
        I = ideal("x^2-y", "y^3")
        assert ideal_power(I, 1) == I
        q = ideal_power(ideal("x^2", "y^2"), 2)
        assert set(q.generators) == {P("x^4"), P("x^2*y^2"), P("y^4")}

    def test_lt_power_inclusion(self):
        # every generator of LT(K)^n is a member of LT(K^n)
        rng = random.Random(23)
        for _ in range(12):
            K = _random_zero_dim(rng, RING)
            for n in (2, 3):
                ltK_n = ideal_power(leading_term_ideal(K), n)
                lt_Kn = leading_term_ideal(ideal_power(K, n))
                for g in ltK_n.generators:
                    m = leading_monomial(g, DEGREVLEX)
                    assert any(
                        all(a <= b for a, b in zip(leading_monomial(h, DEGREVLEX), m))
                        for h in lt_Kn.generators
                    )

    def test_power_multiplicity_lemma(self):
        # K' containing K^n has multiplicity at most n^m * mult(K)
        rng = random.Random(29)
        for _ in range(10):
            m_vars = rng.choice([2, 3])
            ring = ("x", "y", "z")[:m_vars]
            K = _random_zero_dim(rng, ring)
            mult_K = multiplicity_zero_dim(K)
            for n in (2, 3):
                Kn = ideal_power(K, n)
                assert multiplicity_zero_dim(Kn) <= n ** m_vars * mult_K


def _random_zero_dim(rng, ring):
    """Zero-dimensional ideal: pure powers plus random noise below them."""
    gens = []
    n = len(ring)
    for i in range(n):
        d = rng.randint(1, 3)
        mono = tuple(d if j == i else 0 for j in range(n))
        p = Polynomial.monomial(ring, mono)
        for _ in range(rng.randint(0, 2)):
            em = tuple(rng.randint(0, d - 1) for _ in range(n))
            p = p + Polynomial.monomial(ring, em, Fraction(rng.randint(-3, 3)))
        gens.append(p)
    return IdealPresentation(ring, tuple(gens))


class TestDimension:
    def test_examples(self):
        assert dimension(ideal("x")) == 1
        assert dimension(ideal("x", "y")) == 0
        assert dimension(ideal("1")) == -1

    def test_zero_ideal(self):
        assert dimension(IdealPresentation(RING)) == 2


class TestEliminant:
    def test_univariate_extraction(self):
        I = ideal("x^2-y", "y^2-1")
        ex = eliminant(I, 0)
        assert ex is not None and ex.variables_used() == {0}
        assert ex == P("x^4-1")
        ey = eliminant(I, 1)
        assert ey == P("y^2-1")


class TestNullstellensatzExponent:
    def test_search(self):
        assert nullstellensatz_exponent(P("x"), ideal("x^2")) == 2
        assert nullstellensatz_exponent(P("x"), ideal("x^7")) == 7
        assert nullstellensatz_exponent(P("x"), ideal("x")) == 1
        assert nullstellensatz_exponent(P("y"), ideal("x^2")) is None
        assert nullstellensatz_exponent(P("x"), ideal("x^70"), cap=64) is None


class TestAttemptRadical:
    def test_principal(self):
        J, cert, status = attempt_radical(ideal("x^2"))
        assert set(J.generators) == {P("x")} and status == "exact"
        assert cert.exponents == (2,)

    def test_zero_dimensional(self):
        J, cert, status = attempt_radical(ideal("x^2", "y^2"))
        assert set(J.generators) == {P("x"), P("y")} and status == "exact"
        assert sorted(cert.exponents) == [2, 2]
        assert cert.max_weight() == 3

    def test_principal_squarefree_part(self):
        J, _, status = attempt_radical(ideal("x^2*(x-y^2)^2"))
        # x*(x - y^2), normalized to leading coefficient 1 under degrevlex
        assert set(J.generators) == {P("x*y^2-x^2")} and status == "exact"

    def test_gcd_closure_case(self):
        # x^2, x*y^2 generate x*<x, y^2>; the radical is <x>
        J, cert, status = attempt_radical(ideal("x^2", "x*y^2"))
        assert set(J.generators) == {P("x")} and status == "exact"

    def test_curve_times_maximal(self):
        ring = ("x", "y", "z")
        I = ideal("x*y^2-x^4", "y^3-x^3*y", ring=ring)
        J, cert, status = attempt_radical(I)
        assert status == "exact"
        assert set(J.generators) == {parse_polynomial("x^3-y^2", ring)}

    def test_inclusions_certified(self):
        rng = random.Random(31)
        for _ in range(10):
            base = _random_zero_dim(rng, RING)
            I = ideal_power(base, rng.choice([1, 2]))
            J, cert, status = attempt_radical(I)
            # I subset J
            for g in I.generators:
                assert member(g, J)
            # J subset rad(I), generator-wise
            for g, e in zip(J.generators, cert.exponents):
                assert member(g ** e, I)
                assert radical_membership(g, I)

    def test_exact_means_membership_equivalence(self):
        rng = random.Random(37)
        I = ideal("x^2", "y^3")
        J, _, status = attempt_radical(I)
        assert status == "exact"
        probes = [P("x"), P("y"), P("x+y"), P("x*y-x"), P("x+1"), P("y^2-2")]
        for f in probes:
            assert radical_membership(f, I) == member(f, J)
