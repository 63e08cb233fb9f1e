import numpy as np
import pytest

from cmt.errors import DimensionMismatchError
from cmt.poly import Polynomial, PolyMap

from conftest import random_polynomial


def P2(terms):
    return Polynomial(2, terms)


X = P2({(1, 0): 1.0})
Y = P2({(0, 1): 1.0})


class TestAdd:
    def test_cancellation(self):
        p = P2({(2, 0): 1.0, (0, 1): 1.0})
        q = P2({(2, 0): -1.0})
        assert p + q == Y

    def test_like_terms(self):
        assert P2({(1, 1): 2.0}) + P2({(1, 1): 3.0}) == P2({(1, 1): 5.0})

    def test_overlap(self):
        p = P2({(2, 0): 1.0, (1, 1): 1.0})
        q = P2({(1, 1): 1.0, (0, 2): 1.0})
        assert p + q == P2({(2, 0): 1.0, (1, 1): 2.0, (0, 2): 1.0})

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            X + Polynomial(3, {(1, 0, 0): 1.0})


class TestMul:
    def test_difference_of_squares(self):
        assert (X + Y) * (X - Y) == P2({(2, 0): 1.0, (0, 2): -1.0})

    def test_monomials(self):
        assert P2({(2, 0): 1.0}) * P2({(0, 2): 1.0}) == P2({(2, 2): 1.0})

    def test_quadratic_square(self):
        # (x^2 + x*y + y^2)^2, expanded by hand
        q = P2({(2, 0): 1.0, (1, 1): 1.0, (0, 2): 1.0})
        expect = P2({(4, 0): 1.0, (3, 1): 2.0, (2, 2): 3.0, (1, 3): 2.0, (0, 4): 1.0})
        assert q * q == expect
        assert q**2 == expect


class TestTruncate:
    def test_drops_above(self):
        p = Polynomial(1, {(1,): 1.0, (3,): 1.0})
        assert p.truncate(2) == Polynomial(1, {(1,): 1.0})

    def test_keeps_at_or_below(self):
        p = P2({(2, 1): 1.0, (1, 1): 1.0})
        assert p.truncate(3) == p

    def test_invariance_expression_degree_two_slice(self):
        # Full invariance expression of the 3-variable worked system with
        # every coefficient 1 and h = x^2 + x*y + y^2 substituted for the
        # stable coordinate; its degree-2 slice collapses to x^2 - y^2
        # (coefficient matching done by hand: 1, 0, -1).
        h = P2({(2, 0): 1.0, (1, 1): 1.0, (0, 2): 1.0})
        one = lambda: P2({(2, 0): 1.0, (0, 2): 1.0, (1, 1): 1.0})
        quad_semi = one() + h * h + Y * h + X * h  # e-type row with z = h
        xdot = Y + one() + h * h + Y * h + X * h
        ydot = -1.0 * X + one() + h * h + Y * h + X * h
        full = -1.0 * h + quad_semi - h.partial(0) * xdot - h.partial(1) * ydot
        assert full.truncate(2) == P2({(2, 0): 1.0, (0, 2): -1.0})


class TestComposeLinear:
    def test_identity(self):
        p = P2({(2, 0): 1.0})
        assert p.compose_linear(np.eye(2)) == p

    def test_shear(self):
        # x = 2u + v: x^2 -> 4u^2 + 4uv + v^2
        p = P2({(2, 0): 1.0})
        out = p.compose_linear([[2.0, 1.0], [0.0, 1.0]])
        assert out == P2({(2, 0): 4.0, (1, 1): 4.0, (0, 2): 1.0})

    def test_two_row_substitution(self):
        # x = u + v, z = -2u: x*z -> -2u^2 - 2uv
        p = P2({(1, 1): 1.0})
        out = p.compose_linear([[1.0, 1.0], [-2.0, 0.0]])
        assert out == P2({(2, 0): -2.0, (1, 1): -2.0})

    def test_shape_check(self):
        with pytest.raises(DimensionMismatchError):
            X.compose_linear([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


class TestSubstitute:
    def test_single_variable(self):
        z = Polynomial(1, {(1,): 1.0})
        assert z.substitute({0: P2({(2, 0): 1.0})}) == P2({(2, 0): 1.0})

    def test_square_of_replacement(self):
        z2 = Polynomial(1, {(2,): 1.0})
        out = z2.substitute({0: Polynomial(1, {(2,): 1.2})})
        assert out.allclose(Polynomial(1, {(4,): 1.44}), tol=1e-15)

    def test_partial_substitution(self):
        # p = x*z over (x, z); z -> x^2 + x*y gives x^3 + x^2*y
        p = P2({(1, 1): 1.0})
        out = p.substitute({1: P2({(2, 0): 1.0, (1, 1): 1.0})})
        assert out == P2({(3, 0): 1.0, (2, 1): 1.0})

    def test_inconsistent_targets(self):
        with pytest.raises(DimensionMismatchError):
            P2({(1, 1): 1.0}).substitute(
                {0: Polynomial(1, {(1,): 1.0}), 1: P2({(1, 0): 1.0})}
            )


class TestPartial:
    def test_quadratic_gradient(self):
        h = P2({(2, 0): 1.2, (1, 1): 0.7, (0, 2): 0.4})
        assert h.partial(0) == P2({(1, 0): 2.4, (0, 1): 0.7})

    def test_missing_variable(self):
        assert P2({(2, 0): 1.0}).partial(1).is_zero()

    def test_power_rule(self):
        assert P2({(3, 1): 1.0}).partial(0) == P2({(2, 1): 3.0})


class TestProperties:
    def test_ring_axioms(self, rng):
        for _ in range(40):
            n = int(rng.integers(1, 4))
            p = random_polynomial(rng, n, 2)
            q = random_polynomial(rng, n, 2)
            r = random_polynomial(rng, n, 2)
            assert (p + q).allclose(q + p)
            assert ((p + q) + r).allclose(p + (q + r))
            assert (p * q).allclose(q * p)
            assert ((p * q) * r).allclose(p * (q * r), tol=1e-10)
            assert (p * (q + r)).allclose(p * q + p * r, tol=1e-10)

    def test_compose_linear_is_functorial(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 4))
            p = random_polynomial(rng, n, 3)
            m1 = rng.uniform(-1, 1, (n, n))
            m2 = rng.uniform(-1, 1, (n, n))
            lhs = p.compose_linear(m1 @ m2)
            rhs = p.compose_linear(m1).compose_linear(m2)
            assert lhs.allclose(rhs, tol=1e-10)

    def test_product_rule(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 4))
            p = random_polynomial(rng, n, 3)
            q = random_polynomial(rng, n, 3)
            for var in range(n):
                lhs = (p * q).partial(var)
                rhs = p * q.partial(var) + q * p.partial(var)
                assert lhs.allclose(rhs)

    def test_truncation_partitions_terms(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 4))
            p = random_polynomial(rng, n, 3)
            for d in range(4):
                head = p.truncate(d)
                assert head + (p - head) == p


class TestHousekeeping:
    def test_prune_drops_noise(self):
        p = P2({(1, 0): 1e-15})
        assert p.is_zero()

    def test_render_graded_lex(self):
        p = P2({(0, 2): 0.8, (2, 0): 1.2, (1, 1): 0.2, (0, 1): -1.0})
        assert p.render(["x", "y"]) == "-1.0*y + 1.2*x^2 + 0.2*x*y + 0.8*y^2"

    def test_render_zero(self):
        assert Polynomial(2).render(["x", "y"]) == "0"

    def test_evaluate(self):
        p = P2({(2, 0): 1.0, (1, 1): -0.5})
        assert p.evaluate([2.0, 3.0]) == pytest.approx(4.0 - 3.0)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            X.terms = {}
        with pytest.raises(AttributeError):
            PolyMap([X]).components = ()

    def test_polymap_shared_space(self):
        with pytest.raises(DimensionMismatchError):
            PolyMap([X, Polynomial(3, {(1, 0, 0): 1.0})])

    def test_polymap_dimension_may_differ_from_nvars(self):
        pm = PolyMap([X, Y, X * Y])
        assert len(pm) == 3 and pm.nvars == 2
