import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conforma import (
    LIMIT_QUOTIENT, REDUCTION, ConvergenceError, DerivBackend, DomainError,
    PreconditionError, RealFn, SingularityError, chain_deriv, classical_derivative_fn,
    constant, higher_left_deriv, higher_right_deriv, left_deriv, polynomial, right_deriv,
    sequential_left_deriv, sequential_right_deriv,
)
from conftest import SMOOTH, frac_exp, rel_err

BACKENDS = [LIMIT_QUOTIENT, REDUCTION]


def mp_deriv(fn, t, n=1):
    """Classical derivative by mpmath (independent oracle)."""
    return float(mpmath.diff(lambda x: fn(x), mpmath.mpf(t), n))


# -- examples ---------------------------------------------------------------

@pytest.mark.parametrize("bk", BACKENDS)
def test_constant_has_zero_derivative(bk):
    c = constant(5.0)
    for alpha in (0.2, 0.7, 1.0):
        assert left_deriv(c, 1.0, alpha, 3.0, bk) == pytest.approx(0.0, abs=1e-12)
        assert right_deriv(c, 4.0, alpha, 3.0, bk) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("bk", BACKENDS)
def test_scaled_power_has_unit_derivative(bk):
    a = 1.5
    f = RealFn(lambda t: (t - a) ** 0.5 / 0.5, 1, (lambda t: (t - a) ** -0.5,))
    assert left_deriv(f, a, 0.5, a + 4, bk) == pytest.approx(1.0, rel=1e-10)
    b = 2.0
    g = RealFn(lambda t: (b - t) ** 0.5 / 0.5, 1, (lambda t: -(b - t) ** -0.5,))
    assert right_deriv(g, b, 0.5, b - 4, bk) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("bk", BACKENDS)
def test_fractional_exponential_eigen_relation(bk):
    a = 0.5
    f = frac_exp(a, 0.5, lam=2.0)
    assert left_deriv(f, a, 0.5, a + 1, bk) == pytest.approx(2 * math.exp(4), rel=1e-9)


def test_right_derivative_of_linear_at_order_one():
    f = polynomial([3.0, -1.0])  # b - t with b = 3
    for t in (0.0, 1.0, 2.5):
        assert right_deriv(f, 3.0, 1.0, t) == pytest.approx(1.0, rel=1e-12)


def test_higher_left_examples():
    sq = polynomial([0, 0, 1.0])
    assert higher_left_deriv(sq, 0.0, 1.5, 4.0) == pytest.approx(4.0, rel=1e-12)
    for t in (0.3, 1.0, 7.0):
        assert higher_left_deriv(sq, 0.0, 2.0, t) == pytest.approx(2.0, rel=1e-12)
    assert higher_left_deriv(SMOOTH["sin"], 0.2, 1.5, 0.2) == pytest.approx(0.0, abs=1e-6)


def test_higher_right_examples():
    b = 5.0
    f = polynomial([b * b, -2 * b, 1.0])  # (b - t)^2
    assert higher_right_deriv(f, b, 1.5, b - 4) == pytest.approx(4.0, rel=1e-12)
    assert higher_right_deriv(constant(2.0), b, 1.5, 1.0) == pytest.approx(0.0, abs=1e-12)
    g = SMOOTH["sin"]
    for t in (0.5, 2.0):
        assert higher_right_deriv(g, b, 2.0, t) == pytest.approx(g.deriv(2)(t), rel=1e-12)


def test_sequential_examples():
    a, alpha = 0.4, 0.5
    f = RealFn(lambda t: (t - a) ** alpha / alpha, 2,
               (lambda t: (t - a) ** (alpha - 1), lambda t: (alpha - 1) * (t - a) ** (alpha - 2)))
    assert sequential_left_deriv(f, a, alpha, 2, 1.7) == pytest.approx(0.0, abs=1e-12)
    sq = polynomial([0, 0, 1.0])
    assert sequential_left_deriv(sq, 0.0, 0.4, 2, 1.0) == pytest.approx(3.2, rel=1e-12)
    g = SMOOTH["exp"]
    assert sequential_left_deriv(g, 0.0, 1.0, 2, 0.8) == pytest.approx(g.deriv(2)(0.8), rel=1e-12)


def test_chain_examples():
    sq = polynomial([0, 0, 1.0])
    ident = polynomial([0, 1.0])
    for t in np.linspace(0.5, 2.0, 7):
        direct = left_deriv(sq, 0.0, 0.6, t)
        assert chain_deriv(sq, ident, 0.0, 0.6, t) == pytest.approx(direct, rel=1e-10)
        g = polynomial([1.0, 0.5, 0.2])
        assert chain_deriv(ident, g, 0.0, 0.6, t) == pytest.approx(
            left_deriv(g, 0.0, 0.6, t), rel=1e-10)
    f, g = SMOOTH["sin"], polynomial([0.3, 1.0, 0.5])
    t = 1.1
    classical = f.deriv(1)(g(t)) * g.deriv(1)(t)
    assert chain_deriv(f, g, 0.0, 1.0, t) == pytest.approx(classical, rel=1e-12)


# -- errors -----------------------------------------------------------------

def test_domain_errors():
    f = SMOOTH["cubic"]
    with pytest.raises(DomainError):
        left_deriv(f, 1.0, 0.5, 0.5)
    with pytest.raises(DomainError):
        right_deriv(f, 1.0, 0.5, 1.5)
    with pytest.raises(DomainError):
        left_deriv(f, 0.0, 1.5, 1.0)
    with pytest.raises(DomainError):
        higher_left_deriv(f, 1.0, 1.5, 0.0)


def test_precondition_errors():
    rough = RealFn(math.sin)
    with pytest.raises(PreconditionError):
        higher_left_deriv(rough, 0.0, 1.5, 1.0)
    with pytest.raises(PreconditionError):
        higher_left_deriv(RealFn(math.sin, 3), 0.0, 3.5, 1.0)
    with pytest.raises(PreconditionError):
        sequential_left_deriv(RealFn(math.sin, 1), 0.0, 0.5, 2, 1.0)


def test_chain_singularities():
    f = SMOOTH["cubic"]
    g = polynomial([-1.0, 1.0])
    with pytest.raises(SingularityError):
        chain_deriv(f, g, 0.0, 0.5, 1.0)
    with pytest.raises(SingularityError):
        chain_deriv(f, g, 0.0, 0.5, 0.5)


def test_diverging_endpoint_limit():
    f = RealFn(lambda t: np.sqrt(t), 1, (lambda t: 0.5 / np.sqrt(t),), vectorized=True)
    with pytest.raises(ConvergenceError):
        left_deriv(f, 0.0, 0.8, 0.0)


def test_backend_validation():
    with pytest.raises(DomainError):
        DerivBackend("bogus")
    with pytest.raises(DomainError):
        DerivBackend(step0=1.5)
    with pytest.raises(DomainError):
        DerivBackend(richardson_levels=9)


# -- oracles and properties -------------------------------------------------

@pytest.mark.parametrize("name", sorted(SMOOTH))
def test_reduction_matches_mpmath_oracle(name):
    f = SMOOTH[name]
    fn = _mp_version(name)
    for alpha in (0.25, 0.6, 0.9):
        for t in (0.7, 1.9):
            ref = (t - 0.2) ** (1 - alpha) * mp_deriv(fn, t)
            assert left_deriv(f, 0.2, alpha, t, LIMIT_QUOTIENT) == pytest.approx(ref, rel=1e-8)


def _mp_version(name):
    return {
        "cubic": lambda x: 1 - 2 * x + 0.5 * x ** 2 + 0.3 * x ** 3,
        "quadratic": lambda x: 0.2 + x ** 2,
        "sin": lambda x: mpmath.sin(x + 0.3),
        "exp": lambda x: mpmath.exp(0.7 * x),
    }[name]


@pytest.mark.parametrize("name", sorted(SMOOTH))
def test_backend_agreement_grid(name):
    f = SMOOTH[name]
    a = -0.3
    for alpha in np.arange(0.1, 1.0, 0.1):
        for d in (0.1, 0.5, 1.0, 2.0, 3.5, 5.0):
            lq = left_deriv(f, a, alpha, a + d, LIMIT_QUOTIENT)
            rd = left_deriv(f, a, alpha, a + d, REDUCTION)
            assert abs(lq - rd) <= 1e-6 * (1 + abs(rd))
            lq = right_deriv(f, a + 6, alpha, a + 6 - d, LIMIT_QUOTIENT)
            rd = right_deriv(f, a + 6, alpha, a + 6 - d, REDUCTION)
            assert abs(lq - rd) <= 1e-6 * (1 + abs(rd))


def test_backend_agreement_without_hooks():
    # reduction mode falls back to differenced derivatives
    f = RealFn(lambda t: math.exp(0.7 * t) * math.cos(t), 2)
    for alpha in (0.3, 0.8):
        lq = left_deriv(f, 0.0, alpha, 1.3, LIMIT_QUOTIENT)
        rd = left_deriv(f, 0.0, alpha, 1.3, REDUCTION)
        assert abs(lq - rd) <= 1e-8 * (1 + abs(rd))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=5), st.floats(-2, 2))
def test_classical_limit_for_polynomials(coeffs, t):
    p = polynomial(coeffs)
    d = np.polynomial.Polynomial(coeffs).deriv()(t)
    v = left_deriv(p, t - 1.0, 1.0, t, LIMIT_QUOTIENT)
    assert abs(v - d) <= 1e-8 * (1 + abs(d))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 1.0), st.floats(0.05, 3.0))
def test_monotonicity_consistency(alpha, width):
    f = SMOOTH["sin"]
    a = 0.0
    ts = np.linspace(a + 0.01, a + width, 12)
    positive = [left_deriv(f, a, alpha, t) > 0 for t in ts]
    vals = f.many(ts)
    for i in range(len(ts) - 1):
        if positive[i] and positive[i + 1]:
            assert vals[i + 1] > vals[i]


@pytest.mark.parametrize("alpha", [0.2, 0.4, 0.7, 1.0])
def test_sequential_closed_form_matches_composition(alpha):
    f = SMOOTH["cubic"]
    a = 0.1
    inner = RealFn(lambda x: left_deriv(f, a, alpha, x))
    for t in (0.5, 1.2, 2.4):
        composed = left_deriv(inner, a, alpha, t)
        d = t - a
        closed = (1 - alpha) * d ** (1 - 2 * alpha) * f.deriv(1)(t) + d ** (2 - 2 * alpha) * f.deriv(2)(t)
        assert sequential_left_deriv(f, a, alpha, 2, t) == pytest.approx(closed, rel=1e-12)
        assert rel_err(composed, closed, 1e-12) <= 1e-6


@pytest.mark.parametrize("alpha", [0.3, 0.6, 1.0])
def test_sequential_right_matches_composition(alpha):
    f = SMOOTH["sin"]
    b = 3.0
    inner = RealFn(lambda x: right_deriv(f, b, alpha, x))
    for t in (0.5, 1.6, 2.7):
        composed = right_deriv(inner, b, alpha, t)
        assert sequential_right_deriv(f, b, alpha, 2, t) == pytest.approx(composed, rel=1e-6)


def test_sequential_without_hooks_nests_numerically():
    f = RealFn(lambda t: math.sin(t + 0.3), 2)
    for t in (0.6, 1.5):
        ref = sequential_left_deriv(SMOOTH["sin"], 0.0, 0.7, 2, t)
        assert sequential_left_deriv(f, 0.0, 0.7, 2, t) == pytest.approx(ref, rel=1e-6)


def test_sequential_endpoint_values():
    f = SMOOTH["exp"]
    assert sequential_left_deriv(f, 0.0, 0.4, 2, 0.0) == 0.0
    assert sequential_right_deriv(f, 1.0, 0.3, 3, 1.0) == 0.0
    # above 1/count the endpoint value is the one-sided limit of the interior
    v = sequential_left_deriv(f, 0.0, 1.0, 2, 0.0)
    assert v == pytest.approx(f.deriv(2)(0.0), rel=1e-8)


def test_left_endpoint_limit_of_first_order():
    f = SMOOTH["sin"]
    # (t-a)^(1-alpha) f'(t) -> 0 for alpha < 1; -> f'(a) for alpha = 1
    assert left_deriv(f, 0.5, 0.6, 0.5) == pytest.approx(0.0, abs=1e-6)
    assert left_deriv(f, 0.5, 1.0, 0.5) == pytest.approx(f.deriv(1)(0.5), rel=1e-8)
    assert right_deriv(f, 0.5, 1.0, 0.5) == pytest.approx(-f.deriv(1)(0.5), rel=1e-8)


def test_classical_derivative_fn_sources():
    f = SMOOTH["exp"]
    assert classical_derivative_fn(f, 2)(0.3) == pytest.approx(0.49 * math.exp(0.21), rel=1e-14)
    g = RealFn(lambda t: math.exp(0.7 * t), 2)
    assert classical_derivative_fn(g, 2)(0.3) == pytest.approx(0.49 * math.exp(0.21), rel=1e-7)
