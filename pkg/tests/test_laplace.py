import math

import mpmath
import numpy as np
import pytest

from conforma import (
    DivergenceError, DomainError, NumericFailure, QuadratureSpec, RealFn, TransformQuery,
    constant, laplace_numeric, laplace_of_deriv, laplace_table, polynomial, table_function,
    table_growth, weighted_form,
)
from conforma.laplace import KINDS


def mp_transform(fn, t0, alpha, s):
    """Defining integral in t with mpmath tanh-sinh quadrature (independent oracle)."""
    a = mpmath.mpf(alpha)
    g = lambda t: mpmath.exp(-s * (t - t0) ** a / a) * fn(t) * (t - t0) ** (a - 1)
    return float(mpmath.quad(g, [t0, t0 + 1, t0 + 10, mpmath.inf]))


def mp_table_function(kind, params, t0, alpha):
    """The table functions again, in mpmath arithmetic so far tails cannot overflow."""
    a = mpmath.mpf(alpha)
    u = lambda t: (t - t0) ** a / a
    if kind == "one":
        return lambda t: mpmath.mpf(1)
    if kind == "t":
        return lambda t: t
    if kind == "t_pow":
        return lambda t: t ** params["p"]
    if kind == "frac_exp":
        return lambda t: mpmath.exp(params["lam"] * u(t))
    if kind == "frac_sin":
        return lambda t: mpmath.sin(params["omega"] * u(t))
    if kind == "frac_cos":
        return lambda t: mpmath.cos(params["omega"] * u(t))
    inner = mp_table_function(params["inner"], params["inner_params"], t0, alpha)
    return lambda t: mpmath.exp(-params["k"] * u(t)) * inner(t)


def test_examples():
    for alpha in (0.3, 0.5, 1.0):
        q = TransformQuery(1.5, alpha, 2.0)
        assert laplace_numeric(constant(1.0), q) == pytest.approx(0.5, rel=1e-12)
    e = table_function("frac_exp", {"lam": 1.0}, 0.0, 0.5)
    assert laplace_numeric(e, TransformQuery(0.0, 0.5, 3.0, 1.0)) == pytest.approx(0.5, rel=1e-10)
    t = polynomial([0, 1.0])
    assert laplace_numeric(t, TransformQuery(0.0, 0.5, 1.0)) == pytest.approx(0.5, rel=1e-10)


def test_table_examples():
    assert laplace_table("one", None, 0.0, 0.5, 4.0) == 0.25
    assert laplace_table("frac_sin", {"omega": 2.0}, 0.0, 0.5, 1.0) == pytest.approx(0.4)
    damped = {"k": 1.0, "inner": "frac_sin", "inner_params": {"omega": 1.0}}
    assert laplace_table("damped", damped, 0.0, 0.5, 0.0) == pytest.approx(0.5)
    assert laplace_table("t", None, 2.0, 1.0, 2.0) == pytest.approx(2 / 2 + 1 / 4)


@pytest.mark.parametrize("kind, params", [
    ("one", {}), ("t", {}), ("t_pow", {"p": 1.7}), ("frac_exp", {"lam": 0.5}),
    ("frac_sin", {"omega": 2.0}), ("frac_cos", {"omega": 1.5}),
    ("damped", {"k": 0.5, "inner": "frac_cos", "inner_params": {"omega": 1.0}}),
])
def test_table_against_mpmath(kind, params):
    alpha = 0.6
    t0 = 0.0
    s = table_growth(kind, params) + 1.0
    ref = mp_transform(mp_table_function(kind, params, t0, alpha), t0, alpha, s)
    assert laplace_table(kind, params, t0, alpha, s) == pytest.approx(ref, rel=1e-8)


def test_sin_entry_oracle_versus_printed_form():
    w, s, alpha = 2.0, 1.5, 0.5
    f = table_function("frac_sin", {"omega": w}, 0.0, alpha)
    oracle = laplace_numeric(f, TransformQuery(0.0, alpha, s))
    assert oracle == pytest.approx(w / (s * s + w * w), rel=1e-10)
    printed = 1.0 / (w * w + s * s)
    assert oracle / printed == pytest.approx(w, rel=1e-10)


def test_shifted_base_point():
    t0 = 1.2
    for kind in ("t", "frac_cos"):
        f = table_function(kind, {}, t0, 0.7)
        v = laplace_numeric(f, TransformQuery(t0, 0.7, 1.3))
        assert v == pytest.approx(laplace_table(kind, {}, t0, 0.7, 1.3), rel=1e-9)


def test_weighted_form_cross_check():
    f = RealFn(lambda t: np.cos(t) + t ** 2, vectorized=True)
    q = TransformQuery(0.0, 0.5, 2.0)
    full = laplace_numeric(f, q)
    truncated = weighted_form(f, q, 400.0)
    assert truncated == pytest.approx(full, rel=1e-9)


def test_regions_and_errors():
    with pytest.raises(DivergenceError):
        TransformQuery(0.0, 0.5, 1.0, tail_bound=1.0)
    with pytest.raises(DomainError):
        TransformQuery(0.0, 1.5, 2.0)
    with pytest.raises(DomainError):
        laplace_table("frac_exp", {"lam": 2.0}, 0.0, 0.5, 1.5)
    with pytest.raises(DomainError):
        laplace_table("t_pow", {"p": 1.0}, 1.0, 0.5, 1.5)
    with pytest.raises(DomainError):
        laplace_table("t_pow", {"p": -0.6}, 0.0, 0.5, 1.5)
    with pytest.raises(DomainError):
        laplace_table("bessel", {}, 0.0, 0.5, 1.5)
    with pytest.raises(DomainError):
        table_function("bessel", {}, 0.0, 0.5)
    assert table_growth("damped", {"k": 2.0, "inner": "frac_exp", "inner_params": {"lam": 1.0}}) == -1.0


def test_growth_bound_understated_fails_loudly():
    # exp(2u) with a claimed growth of 0: the tail never dies out
    f = table_function("frac_exp", {"lam": 2.0}, 0.0, 0.5)
    with pytest.raises(NumericFailure):
        laplace_numeric(f, TransformQuery(0.0, 0.5, 1.0), QuadratureSpec(rel_tol=1e-8))



def test_laplace_of_derivative_rule():
    s = 3.0
    assert laplace_of_deriv(1 / s, 1.0, s) == pytest.approx(0.0, abs=1e-15)
    lam = 0.7
    F = 1 / (s - lam)
    assert laplace_of_deriv(F, 1.0, s) == pytest.approx(lam * F, rel=1e-14)
    assert laplace_of_deriv(2.5, 0.0, s) == 7.5


def test_kinds_constant():
    assert set(KINDS) == {"one", "t", "t_pow", "frac_exp", "frac_sin", "frac_cos", "damped"}
