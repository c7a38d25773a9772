import random
from fractions import Fraction
from math import factorial

import pytest

from leafmult.errors import HypothesisError
from leafmult.foliation import (
    FoliationContext,
    VectorField,
    check_commute,
    lie_derivative,
)
from leafmult.poly import Polynomial, parse_polynomial

XY = ("x", "y")
XYZ = ("x", "y", "z")


def vf(ring, *texts):
    return VectorField(tuple(ring), tuple(parse_polynomial(t, ring) for t in texts))


def flat2():
    """Plane foliated by coordinate translations."""
    return FoliationContext(vf(XY, "1", "0"), vf(XY, "0", "1"), (0, 0))


def flat3():
    return FoliationContext(vf(XYZ, "1", "0", "0"), vf(XYZ, "0", "1", "0"), (0, 0, 0))


def exp_leaf():
    """V1 = d/dx + z d/dz, V2 = d/dy; the leaf through (0,0,1) carries z = e^t1."""
    return FoliationContext(vf(XYZ, "1", "0", "z"), vf(XYZ, "0", "1", "0"), (0, 0, 1))


class TestLieDerivative:
    def test_flat(self):
        assert lie_derivative(vf(XY, "1", "0"), parse_polynomial("x^2*y", XY)) \
            == parse_polynomial("2*x*y", XY)

    def test_exponential_direction(self):
        v = vf(XYZ, "1", "0", "z")
        assert lie_derivative(v, parse_polynomial("z", XYZ)) == parse_polynomial("z", XYZ)

    def test_constant_killed(self):
        v = vf(XY, "y^2", "x-1")
        assert lie_derivative(v, Polynomial.constant(XY, 5)).is_zero()


class TestCommutation:
    def test_exp_model_commutes(self):
        assert check_commute(vf(XYZ, "1", "0", "z"), vf(XYZ, "0", "1", "0")).commute

    def test_witness_on_failure(self):
        rep = check_commute(vf(XY, "y", "0"), vf(XY, "0", "x"))
        assert not rep.commute
        assert rep.witness is not None and not rep.witness.is_zero()

    def test_field_commutes_with_itself(self):
        v = vf(XY, "x^2-y", "x*y")
        assert check_commute(v, v).commute

    def test_context_rejects_noncommuting(self):
        with pytest.raises(HypothesisError):
            FoliationContext(vf(XY, "y", "0"), vf(XY, "0", "x"), (1, 1))

    def test_context_rejects_singular_point(self):
        with pytest.raises(HypothesisError):
            FoliationContext(vf(XY, "1", "0"), vf(XY, "2", "0"), (0, 0))


class TestPoisson:
    def test_coordinates(self):
        ctx = flat2()
        assert ctx.poisson(parse_polynomial("x", XY), parse_polynomial("y", XY)) \
            == Polynomial.constant(XY, 1)

    def test_antisymmetry_diag(self):
        ctx = flat2()
        f = parse_polynomial("x^3-2*x*y", XY)
        assert ctx.poisson(f, f).is_zero()

    def test_squares(self):
        ctx = flat2()
        assert ctx.poisson(parse_polynomial("x^2", XY), parse_polynomial("y^2", XY)) \
            == parse_polynomial("4*x*y", XY)

    def test_antisymmetry_and_biderivation_random(self):
        ctx = exp_leaf()
        rng = random.Random(2)
        for _ in range(15):
            f, g, h = (_random_poly(rng, XYZ) for _ in range(3))
            assert ctx.poisson(f, g) == -ctx.poisson(g, f)
            assert ctx.poisson(f, g * h) == g * ctx.poisson(f, h) + h * ctx.poisson(f, g)


def _random_poly(rng, ring, max_deg=2, terms=3):
    acc = {}
    for _ in range(terms):
        mono = tuple(rng.randint(0, max_deg) for _ in ring)
        acc[mono] = Fraction(rng.randint(-3, 3))
    return Polynomial(ring, acc)


class TestLeafJet:
    def test_flat_restriction(self):
        ctx = flat3()
        jet = ctx.leaf_jet(parse_polynomial("x^2+y^3", XYZ), 4)
        assert jet.to_polynomial() == parse_polynomial("t1^2+t2^3", ("t1", "t2"))
        assert jet.as_exact_polynomial() is not None

    def test_exponential_flow(self):
        ctx = exp_leaf()
        jet = ctx.leaf_jet(parse_polynomial("z", XYZ), 5)
        for a in range(6):
            assert jet.coefficient(a, 0) == Fraction(1, factorial(a))
        assert jet.coefficient(0, 1) == 0

    def test_constant(self):
        ctx = exp_leaf()
        jet = ctx.leaf_jet(Polynomial.constant(XYZ, Fraction(3, 7)), 3)
        assert jet.to_polynomial() == Polynomial.constant(("t1", "t2"), Fraction(3, 7))

    def test_value_at_origin_is_value_at_p(self):
        ctx = exp_leaf()
        f = parse_polynomial("x*z+y^2-2", XYZ)
        assert ctx.leaf_jet(f, 3).value_at_origin() == f.evaluate(ctx.point)

    def test_morphism_property(self):
        ctx = exp_leaf()
        rng = random.Random(9)
        for _ in range(10):
            f = _random_poly(rng, XYZ)
            g = _random_poly(rng, XYZ)
            n = rng.randint(2, 6)
            jf, jg = ctx.leaf_jet(f, n), ctx.leaf_jet(g, n)
            assert ctx.leaf_jet(f * g, n) == jf * jg
            assert ctx.leaf_jet(f + g, n) == jf + jg

    def test_chart_identity(self):
        # in leaf coordinates the fields become coordinate derivations
        ctx = exp_leaf()
        rng = random.Random(13)
        for _ in range(8):
            f = _random_poly(rng, XYZ)
            n = rng.randint(2, 5)
            assert ctx.leaf_jet(ctx.v1.apply(f), n) == ctx.leaf_jet(f, n + 1).derivative(0)
            assert ctx.leaf_jet(ctx.v2.apply(f), n) == ctx.leaf_jet(f, n + 1).derivative(1)

    def test_bracket_is_leaf_jacobian(self):
        ctx = exp_leaf()
        rng = random.Random(17)
        for _ in range(8):
            f = _random_poly(rng, XYZ)
            g = _random_poly(rng, XYZ)
            n = rng.randint(2, 5)
            jf = ctx.leaf_jet(f, n + 1)
            jg = ctx.leaf_jet(g, n + 1)
            jac = jf.derivative(0) * jg.derivative(1) - jf.derivative(1) * jg.derivative(0)
            assert ctx.leaf_jet(ctx.poisson(f, g), n).truncate(jac.order) == jac

    def test_commuting_order_symmetry(self):
        ctx = exp_leaf()
        f = parse_polynomial("x*z^2 - y*z + x^2", XYZ)
        for a in range(4):
            for b in range(4):
                d1 = ctx.iterated_derivative(f, a, b)
                # apply in the other order
                d2 = f
                for _ in range(a):
                    d2 = ctx.v1.apply(d2)
                for _ in range(b):
                    d2 = ctx.v2.apply(d2)
                assert d1.evaluate(ctx.point) == d2.evaluate(ctx.point)

    def test_producer_regenerates(self):
        ctx = exp_leaf()
        jet = ctx.leaf_jet(parse_polynomial("z", XYZ), 3)
        assert jet.regenerate(8).coefficient(7, 0) == Fraction(1, factorial(7))
