"""Residuals of the calculus identities, each computed from independent parts.

Every function returns ``lhs - rhs``; a value near zero (relative to the
magnitudes involved) means the identity holds for the given data. Nothing
here uses an identity to compute one of its own sides.
"""

from __future__ import annotations

import math
from typing import Optional

from .core import DEFAULT_QUAD, QuadratureSpec, RealFn, as_fn, as_order
from .derivatives import (
    DerivBackend, chain_deriv, classical_derivative_fn, higher_left_deriv,
    higher_right_deriv, left_deriv, right_deriv,
)
from .errors import DomainError
from .integrals import left_integral, q_reflect, right_integral


def left_weighted(h, a: float, b: float, alpha: float,
                  spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``int_a^b h(t) (t-a)^(alpha-1) dt``."""
    return left_integral(h, a, alpha, b, spec)


def right_weighted(h, a: float, b: float, alpha: float,
                   spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``int_a^b h(t) (b-t)^(alpha-1) dt``."""
    return right_integral(h, b, alpha, a, spec)


def _integral_fn(f, base, order, side, spec, smoothness):
    if side == "left":
        fn = lambda x: left_integral(f, base, order, x, spec)
    else:
        fn = lambda x: right_integral(f, base, order, x, spec)
    return RealFn(fn, smoothness=smoothness)


def derivative_of_integral_residual(f, a: float, order, t: float, side: str = "left",
                                    spec: QuadratureSpec = DEFAULT_QUAD,
                                    backend: Optional[DerivBackend] = None) -> float:
    """``T_alpha I_alpha f (t) - f(t)`` for the left (base ``a``) or right (end ``a``) pair."""
    o = as_order(order)
    F = _integral_fn(f, a, o, side, spec, o.n + 1)
    if side == "left":
        val = higher_left_deriv(F, a, o, t, backend)
    else:
        val = higher_right_deriv(F, a, o, t, backend)
    return val - float(as_fn(f)(t))


def _taylor(f: RealFn, base: float, n: int, t: float, sign: float) -> float:
    terms = [float(f(base))]
    for k in range(1, n + 1):
        dk = float(classical_derivative_fn(f, k)(base))
        terms.append((sign ** k) * dk * abs(t - base) ** k / math.factorial(k))
    return math.fsum(terms)


def integral_of_derivative_residual(f, a: float, order, t: float, side: str = "left",
                                    spec: QuadratureSpec = DEFAULT_QUAD,
                                    backend: Optional[DerivBackend] = None) -> float:
    """``I_alpha T_alpha f (t) - [f(t) - Taylor_n(t)]`` about the base point.

    For the right pair ``a`` is the terminal point and the Taylor terms carry
    the signs ``(-1)^k``.
    """
    f = as_fn(f)
    o = as_order(order)
    if side == "left":
        D = RealFn(lambda x: higher_left_deriv(f, a, o, x, backend))
        lhs = left_integral(D, a, o, t, spec)
        rhs = float(f(t)) - _taylor(f, a, o.n, t, 1.0)
    else:
        D = RealFn(lambda x: higher_right_deriv(f, a, o, x, backend))
        lhs = right_integral(D, a, o, t, spec)
        rhs = float(f(t)) - _taylor(f, a, o.n, t, -1.0)
    return lhs - rhs


def by_parts_residual(f, g, a: float, b: float, alpha: float,
                      spec: QuadratureSpec = DEFAULT_QUAD,
                      backend: Optional[DerivBackend] = None) -> float:
    """Left-left integration by parts against the weight ``(t-a)^(alpha-1)``.

    ``int f T g - (fg|_a^b - int g T f)``.
    """
    f, g = as_fn(f), as_fn(g)
    fTg = RealFn(lambda x: float(f(x)) * left_deriv(g, a, alpha, x, backend))
    gTf = RealFn(lambda x: float(g(x)) * left_deriv(f, a, alpha, x, backend))
    boundary = float(f(b)) * float(g(b)) - float(f(a)) * float(g(a))
    return left_weighted(fTg, a, b, alpha, spec) - (boundary - left_weighted(gTf, a, b, alpha, spec))


def mixed_integral_residual(f, g, a: float, b: float, alpha: float,
                            spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``int (I^a f) g (b-t)^(alpha-1) dt - int f (^b I g) (t-a)^(alpha-1) dt``."""
    f, g = as_fn(f), as_fn(g)
    left = RealFn(lambda x: left_integral(f, a, alpha, x, spec) * float(g(x)))
    right = RealFn(lambda x: float(f(x)) * right_integral(g, b, alpha, x, spec))
    return right_weighted(left, a, b, alpha, spec) - left_weighted(right, a, b, alpha, spec)


def left_right_by_parts_residual(f, g, a: float, b: float, alpha: float,
                                 spec: QuadratureSpec = DEFAULT_QUAD,
                                 backend: Optional[DerivBackend] = None) -> float:
    """``int (T^a f) g dα(t,a) - int f (^bT g) dα(b,t) - fg|_a^b``."""
    f, g = as_fn(f), as_fn(g)
    lhs_fn = RealFn(lambda x: left_deriv(f, a, alpha, x, backend) * float(g(x)))
    rhs_fn = RealFn(lambda x: float(f(x)) * right_deriv(g, b, alpha, x, backend))
    boundary = float(f(b)) * float(g(b)) - float(f(a)) * float(g(a))
    return (left_weighted(lhs_fn, a, b, alpha, spec)
            - right_weighted(rhs_fn, a, b, alpha, spec) - boundary)


def q_intertwining_residual(f, a: float, b: float, order, t: float,
                            spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``(Q I^a f)(t) - (^bI Q f)(t)`` with ``Q`` the reflection of ``[a, b]``."""
    lhs = left_integral(f, a, order, a + b - t, spec)
    rhs = right_integral(q_reflect(f, a, b), b, order, t, spec)
    return lhs - rhs


def composition_residual(f, a: float, alpha: float, beta: float, t: float,
                         backend: Optional[DerivBackend] = None) -> float:
    """``T_alpha T_beta f - [T_(alpha+beta) f + (1-beta)(t-a)^(-beta) T_alpha f]``."""
    if not (0 < alpha <= 1 and 0 < beta <= 1 and 1 < alpha + beta <= 2):
        raise DomainError("composition rule needs 0 < alpha, beta <= 1 and 1 < alpha+beta <= 2")
    if not t > a:
        raise DomainError("composition rule is stated for t > a")
    f = as_fn(f)
    inner = RealFn(lambda x: left_deriv(f, a, beta, x, backend))
    lhs = left_deriv(inner, a, alpha, t)
    rhs = (higher_left_deriv(f, a, alpha + beta, t, backend)
           + (1.0 - beta) * (t - a) ** (-beta) * left_deriv(f, a, alpha, t, backend))
    return lhs - rhs


def chain_residual(f, g, a: float, alpha: float, t: float,
                   backend: Optional[DerivBackend] = None) -> float:
    """Difference between the direct derivative of ``f(g(t))`` and the chain-rule value."""
    f, g = as_fn(f), as_fn(g)
    h = RealFn(lambda x: float(f(float(g(x)))))
    return left_deriv(h, a, alpha, t, backend) - chain_deriv(f, g, a, alpha, t, backend)
