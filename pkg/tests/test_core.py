import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conforma import (
    DomainError, FracOrder, Interval, PreconditionError, QuadratureSpec, RealFn,
    as_fn, constant, make_order, polynomial,
)


@pytest.mark.parametrize("alpha, n, beta", [
    (0.5, 0, 0.5),
    (1.0, 0, 1.0),
    (1.5, 1, 0.5),
    (3.0, 2, 1.0),
])
def test_make_order_examples(alpha, n, beta):
    o = make_order(alpha)
    assert (o.n, o.beta) == (n, beta)


@given(st.floats(min_value=1e-6, max_value=1e6, allow_nan=False))
def test_make_order_invariants(alpha):
    o = make_order(alpha)
    assert o.n + o.beta == o.alpha == alpha
    assert o.n < alpha <= o.n + 1
    assert 0 < o.beta <= 1
    if alpha <= 1:
        assert o.n == 0 and o.beta == alpha


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_make_order_rejects(bad):
    with pytest.raises(DomainError):
        make_order(bad)


def test_inconsistent_order_rejected():
    with pytest.raises(DomainError):
        FracOrder(1.5, 0, 1.5)
    with pytest.raises(DomainError):
        FracOrder(2.0, 2, 0.0)


def test_integer_order_flag():
    assert make_order(2.0).is_integer
    assert not make_order(2.5).is_integer


def test_interval():
    iv = Interval(0.0, 2.0)
    assert 1.0 in iv and 2.0 in iv and 3.0 not in iv
    assert Interval(1.0).b == math.inf
    with pytest.raises(DomainError):
        Interval(2.0, 1.0)


def test_realfn_hooks_and_many():
    p = polynomial([1.0, 2.0, 3.0])
    assert p(2.0) == 17.0
    assert p.deriv(0)(2.0) == 17.0
    assert p.deriv(1)(2.0) == 14.0
    assert p.deriv(2)(2.0) == 6.0
    np.testing.assert_allclose(p.many(np.array([0.0, 1.0])), [1.0, 6.0])
    d = p.derivative_fn(1)
    assert d(1.0) == 8.0 and d.deriv(1)(1.0) == 6.0


def test_realfn_scalar_many():
    f = as_fn(lambda t: t * t)
    assert not f.vectorized
    np.testing.assert_allclose(f.many(np.array([[1.0, 2.0]])), [[1.0, 4.0]])
    assert f.deriv(1) is None


def test_realfn_declared_smoothness():
    with pytest.raises(PreconditionError):
        RealFn(math.sin, 0, (math.cos,))
    with pytest.raises(DomainError):
        RealFn(math.sin, -1)
    with pytest.raises(PreconditionError):
        constant(1.0).derivative_fn(5)


def test_constant():
    c = constant(5.0)
    assert c(3.0) == 5.0
    assert c.deriv(1)(3.0) == 0.0
    assert c.many(np.zeros(3)).tolist() == [5.0] * 3


def test_as_fn_rejects_non_callable():
    with pytest.raises(TypeError):
        as_fn(3.0)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(DomainError):
        QuadratureSpec(nodes_per_panel=1)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdiv=0)
