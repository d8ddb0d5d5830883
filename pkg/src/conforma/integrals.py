r"""Left and right conformable integrals and their closed forms.

For :math:`\alpha = n + \beta`,

.. math::

    (I_\alpha^a f)(t) = \frac{1}{n!}\int_a^t (t-x)^n (x-a)^{\beta-1} f(x)\,dx .

The weight :math:`(x-a)^{\beta-1}` is removed before quadrature by the
substitution :math:`u = (x-a)^\beta/\beta`, which leaves a continuous
integrand on :math:`[0, (t-a)^\beta/\beta]`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .core import DEFAULT_QUAD, FracOrder, QuadratureSpec, RealFn, as_fn, as_order
from .errors import DomainError
from .quadrature import integrate

Order = Union[float, FracOrder]
Side = Literal["left", "right"]


def gamma_ratio(p: float, q: float) -> float:
    """``Gamma(p) / Gamma(q)`` for positive arguments without overflow."""
    if p <= 0 or q <= 0:
        raise DomainError("gamma_ratio needs positive arguments")
    if p < 170 and q < 170:
        return math.gamma(p) / math.gamma(q)
    return math.exp(math.lgamma(p) - math.lgamma(q))


def _substituted(f: RealFn, dist: float, beta: float, n: int, direction: float, base: float):
    """Integrand in ``u`` for a kernel centred at ``base`` with reach ``dist``."""
    inv = 1.0 / beta
    norm = 1.0 / math.factorial(n)

    def g(u):
        d = (beta * u) ** inv
        vals = f.many(base + direction * d)
        if n:
            vals = vals * np.maximum(dist - d, 0.0) ** n
        return norm * vals

    return g


@dataclass(frozen=True)
class WeightedIntegral:
    """A conformable integral operator bound to a base point and side.

    Calling it on ``(f, t)`` evaluates the left integral starting at
    ``base`` or the right one terminating at ``base``.
    """

    base: float
    side: Side
    order: FracOrder
    spec: QuadratureSpec = DEFAULT_QUAD

    def __post_init__(self):
        object.__setattr__(self, "order", as_order(self.order))
        if self.side not in ("left", "right"):
            raise DomainError(f"side must be 'left' or 'right', got {self.side!r}")

    def __call__(self, f, t: float) -> float:
        if self.side == "left":
            return left_integral(f, self.base, self.order, t, self.spec)
        return right_integral(f, self.base, self.order, t, self.spec)


def left_integral(f, a: float, order: Order, t: float,
                  spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Left conformable integral of any positive order, for ``t >= a``."""
    f = as_fn(f)
    o = as_order(order)
    if t < a:
        raise DomainError(f"left integral starting at {a} is undefined at t={t}")
    if t == a:
        return 0.0
    dist = t - a
    upper = dist ** o.beta / o.beta
    g = _substituted(f, dist, o.beta, o.n, +1.0, a)
    return integrate(g, 0.0, upper, spec).value


def right_integral(f, b: float, order: Order, t: float,
                   spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    r"""Right conformable integral terminating at ``b``, for ``t <= b``.

    .. math::

        ({}^{b}I_\alpha f)(t) = \frac{1}{n!}\int_t^b (x-t)^n (b-x)^{\beta-1} f(x)\,dx .
    """
    f = as_fn(f)
    o = as_order(order)
    if t > b:
        raise DomainError(f"right integral terminating at {b} is undefined at t={t}")
    if t == b:
        return 0.0
    dist = b - t
    upper = dist ** o.beta / o.beta
    g = _substituted(f, dist, o.beta, o.n, -1.0, b)
    return integrate(g, 0.0, upper, spec).value


def rl_integral(f, a: float, alpha: float, t: float,
                spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    r"""Riemann-Liouville integral :math:`\frac{1}{\Gamma(\alpha)}\int_a^t (t-s)^{\alpha-1} f(s)\,ds`."""
    f = as_fn(f)
    if not alpha > 0:
        raise DomainError(f"order must be positive, got {alpha}")
    if t < a:
        raise DomainError(f"integral starting at {a} is undefined at t={t}")
    if t == a:
        return 0.0
    dist = t - a
    norm = 1.0 / math.gamma(alpha)
    if alpha <= 1.0:
        # singular kernel at s = t: substitute u = (t - s)^alpha / alpha
        inv = 1.0 / alpha
        g = lambda u: norm * f.many(t - (alpha * u) ** inv)
        return integrate(g, 0.0, dist ** alpha / alpha, spec).value
    g = lambda s: norm * np.maximum(dist - s, 0.0) ** (alpha - 1.0) * f.many(a + s)
    return integrate(g, 0.0, dist, spec).value


def power_integral_closed(mu: float, order: Order, base: float, side: Side, x: float) -> float:
    r"""Closed-form integral of a power of the distance to the base point.

    Left: :math:`I_\alpha^a (t-a)^\mu` evaluated at ``x``; right: the mirror
    image for :math:`(b-t)^\mu`. Both equal
    :math:`\frac{\Gamma(\alpha+\mu-n)}{\Gamma(\alpha+\mu+1)}\,d^{\alpha+\mu}`
    with ``d`` the distance from ``x`` to the base point.
    """
    o = as_order(order)
    if not o.alpha + mu - o.n > 0:
        raise DomainError(f"closed form needs alpha + mu - n > 0, got {o.alpha + mu - o.n}")
    if side == "left":
        d = x - base
    elif side == "right":
        d = base - x
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if d < 0:
        raise DomainError(f"x={x} lies on the wrong side of the base point {base}")
    return gamma_ratio(o.alpha + mu - o.n, o.alpha + mu + 1.0) * d ** (o.alpha + mu)


def q_reflect(f, a: float, b: float) -> RealFn:
    """The reflection ``x -> f(a + b - x)``; derivative hooks pick up signs."""
    f = as_fn(f)
    s = a + b
    hooks = tuple(
        (lambda x, h=h, k=k: (-1.0) ** k * h(s - x))
        for k, h in enumerate(f.exact_derivs, start=1)
    )
    return RealFn(lambda x: f.eval(s - x), f.smoothness, hooks, f.vectorized)


def semigroup_residual(f, alpha: float, mu: float, t: float,
                       spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    r"""Residual of the composition identity for two orders in ``(0, 1]``, base 0.

    The composed side applies the order-``alpha`` integral first and the
    order-``mu`` integral to its result:

    .. math::

        I_\mu(I_\alpha f)(t) - \Big[\frac{t^\mu}{\mu} I_\alpha f(t)
            + \frac{1}{\mu} I_{\alpha+\mu} f(t)
            - \frac{t}{\mu}\int_0^t s^{\alpha+\mu-2} f(s)\,ds\Big].

    Every term is its own quadrature. Requires :math:`1 < \alpha+\mu \le 2`.
    """
    f = as_fn(f)
    if not (0 < alpha <= 1 and 0 < mu <= 1 and 1 < alpha + mu <= 2):
        raise DomainError(
            f"need 0 < alpha, mu <= 1 with 1 < alpha + mu <= 2, got alpha={alpha}, mu={mu}")
    if t < 0:
        raise DomainError("the identity is stated on [0, t] with t >= 0")
    inner = RealFn(lambda x: left_integral(f, 0.0, alpha, x, spec))
    composed = left_integral(inner, 0.0, mu, t, spec)
    first = t ** mu / mu * left_integral(f, 0.0, alpha, t, spec)
    second = left_integral(f, 0.0, alpha + mu, t, spec) / mu
    # the weight s^(alpha+mu-2) is the order alpha+mu-1 <= 1 kernel
    third = t / mu * left_integral(f, 0.0, alpha + mu - 1.0, t, spec)
    return composed - (first + second - third)
