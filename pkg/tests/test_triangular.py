import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polyaut.algebra import MultiPoly, VarTable, u_poly
from polyaut.errors import DomainError, NoRationalRoot, WitnessMissing
from polyaut.inverse import v_sequence
from polyaut.textio import parse_poly
from polyaut.triangular import (Reason, check_linear, check_m_triangular, integer_root, is_linear,
                                is_m_triangular, rational_root, solve_top)

from helpers import CLOSURE_PROPERTIES, random_m_triangular

R2 = VarTable(2)
U = u_poly(R2)
dU = U.derivative("Y")


def P(src, ring=R2):
    return parse_poly(src, ring)


class TestCheck:
    def test_U_is_1_triangular(self):
        w = check_m_triangular(U, 1)
        assert w and w.d == 2 and w.q == (1, 1, 1)

    def test_U_squared(self):
        w = check_m_triangular(U ** 2, 2)
        assert w and w.d == 4 and w.q == (2, 2, 1)
        assert w.residuals[2] == P("u1^2")
        assert w.residuals[3].is_zero()

    def test_wrong_m(self):
        w = check_m_triangular(U ** 2, 3)
        assert not w and w.reason is Reason.LeadingNotPositiveMonomial

    def test_negative_leading(self):
        w = check_m_triangular(P("-u2*Y^2"), 1)
        assert not w and w.reason is Reason.LeadingNotPositiveMonomial

    def test_low_variable(self):
        w = check_m_triangular(P("u2*Y^3 + u0*Y^2"), 1)
        assert not w and (w.reason, w.l) == (Reason.ForbiddenLowVariable, 2)

    def test_missing_coefficient(self):
        w = check_m_triangular(P("u2*Y^3 + u2*Y^2 + u0*Y"), 1)
        assert not w and (w.reason, w.l) == (Reason.CoefficientNotPositiveRational, 2)

    def test_negative_window_coefficient(self):
        w = check_m_triangular(P("u2*Y^2 - u1*Y + u0"), 1)
        assert not w and w.reason is Reason.CoefficientNotPositiveRational

    def test_degree_too_small(self):
        w = check_m_triangular(P("u2*Y"), 1)
        assert not w and w.reason is Reason.DegreeTooSmall

    def test_lower_terms_unconstrained(self):
        low = P("u2^-1*u0^3 - 5", R2)
        assert is_m_triangular(U * Y3() + low, 1)

    def test_rejects_X(self):
        with pytest.raises(DomainError):
            check_m_triangular(P("X + u2*Y^2"), 1)

    def test_bad_m(self):
        with pytest.raises(DomainError):
            check_m_triangular(U, 0)

    @pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 2)])
    def test_v_sequence_triangular(self, a, b):
        from math import factorial
        Ua = u_poly(VarTable(a))
        for m, v in enumerate(v_sequence(Ua, b, 3)):
            w = check_m_triangular(v * ((-1) ** m * factorial(m)), b * m + 1)
            assert w and w.d == (a * b - 1) * m + a


def Y3():
    return MultiPoly.var(R2, "Y", 3)


class TestLinear:
    def test_U(self):
        assert check_linear(U) == (True, [1, 1, 1])

    def test_derivative(self):
        assert check_linear(dU) == (True, [1, 2])

    def test_constant_not_linear(self):
        assert not is_linear(MultiPoly.constant(R2, 3))

    def test_top_variable_alone(self):
        assert check_linear(P("2*u2")) == (True, [2])

    def test_wrong_window(self):
        assert not is_linear(P("u0 + u1*Y"))

    def test_too_long(self):
        assert not is_linear(P("u2*Y^3 + u1*Y^2 + u0*Y"))


class TestRoots:
    def test_integer_root(self):
        assert integer_root(3 ** 40, 8) == 3 ** 5
        assert integer_root(3 ** 40 + 1, 8) is None
        assert integer_root(0, 5) == 0 and integer_root(1, 5) == 1

    def test_rational_root(self):
        assert rational_root(Fraction(-8, 27), 3) == Fraction(-2, 3)
        assert rational_root(-4, 2) is None
        assert rational_root(2, 2) is None

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10 ** 12), st.integers(1, 9))
    def test_integer_root_exact(self, n, m):
        r = integer_root(n, m)
        if r is None:
            lo = round(n ** (1 / m))
            assert all((lo + k) ** m != n for k in (-1, 0, 1) if lo + k >= 0)
        else:
            assert r ** m == n


class TestSolveTop:
    def test_linear_case(self):
        assert solve_top(U, 1, [1, 1, 1], [5, 3, 2]) == (5, 3, 2)

    def test_worked(self):
        x = solve_top(U ** 2 * dU, 3, [-1, -1, -1], [-8, -5, -2])
        assert x == (1, 1, 1)

    def test_no_rational_root(self):
        with pytest.raises(NoRationalRoot):
            solve_top(U ** 2, 2, [1, 1, 1], [1, 1, 2])

    def test_witness_missing(self):
        with pytest.raises(WitnessMissing):
            solve_top(P("-u2*Y^2"), 1, [1, 1, 1], [1, 1, 1])

    def test_bad_targets(self):
        with pytest.raises(DomainError):
            solve_top(U, 1, [1, 0, 1], [1, 1, 1])
        with pytest.raises(DomainError):
            solve_top(U, 1, [1, 1, 1], [1, 1, 0])
        with pytest.raises(DomainError):
            solve_top(U, 1, [1, 1], [1, 1])


def solver_instance(rng):
    """Random m-triangular P, random t and x, y derived from them; the solver must reproduce y."""
    a, m = rng.randint(1, 3), rng.randint(1, 4)
    d = rng.randint(a, a + 3)
    Pm = random_m_triangular(rng, a, m, d)
    x = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(a)]
    x.append(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2)))
    t = [Fraction(rng.choice([-2, -1, 1, 3]), rng.randint(1, 2)) for _ in range(a + 1)]
    coeffs = Pm.evaluate_u(x).coefficients_in("Y")
    y = [t[k] * coeffs[d - a + k].constant_value() if d - a + k in coeffs else 0 for k in range(a + 1)]
    got = solve_top(Pm, m, t, y)
    back = Pm.evaluate_u(got).coefficients_in("Y")
    return all(t[k] * (back[d - a + k].constant_value() if d - a + k in back else 0) == y[k]
               for k in range(a + 1))


def test_solver_correctness():
    rng = random.Random(17)
    assert all(solver_instance(rng) for _ in range(200))


@pytest.mark.parametrize("name", sorted(CLOSURE_PROPERTIES))
def test_closure_property(name):
    rng = random.Random(sum(map(ord, name)))
    prop = CLOSURE_PROPERTIES[name]
    assert all(prop(rng) for _ in range(200))
