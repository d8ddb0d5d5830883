r"""Left and right conformable derivatives.

For :math:`0 < \alpha \le 1` the left derivative based at ``a`` is the limit

.. math::

    (T_\alpha^a f)(t) = \lim_{\epsilon \to 0}
        \frac{f(t + \epsilon (t - a)^{1 - \alpha}) - f(t)}{\epsilon},

which equals :math:`(t - a)^{1-\alpha} f'(t)` for differentiable ``f``. Higher
orders :math:`\alpha = n + \beta` apply the order-``beta`` operator to
:math:`f^{(n)}`. Values at the base point are one-sided limits.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Union

from ._extrapolate import central_derivative, one_sided_limit, ridders
from .core import FracOrder, RealFn, as_fn, as_order
from .errors import DomainError, PreconditionError, SingularityError

Order = Union[float, FracOrder]

#: geometric approach to endpoints starts this far inside the interval
ENDPOINT_H0 = 0.05


@dataclass(frozen=True)
class DerivBackend:
    """How a first-level conformable derivative is evaluated.

    ``limit_quotient`` extrapolates the defining difference quotient over
    ``step0 * 2**-k``, ``k = 0..richardson_levels``. ``reduction_formula``
    multiplies the classical derivative (exact hook when present, otherwise
    extrapolated central differences) by the power weight.
    """

    mode: Literal["limit_quotient", "reduction_formula"] = "limit_quotient"
    step0: float = 0.1
    richardson_levels: int = 6

    def __post_init__(self):
        if self.mode not in ("limit_quotient", "reduction_formula"):
            raise DomainError(f"unknown backend mode {self.mode!r}")
        if not 0 < self.step0 < 1:
            raise DomainError("step0 must lie in (0, 1)")
        if not 1 <= self.richardson_levels <= 8:
            raise DomainError("richardson_levels must be between 1 and 8")


LIMIT_QUOTIENT = DerivBackend("limit_quotient")
REDUCTION = DerivBackend("reduction_formula")


def _pick(f: RealFn, backend: Optional[DerivBackend]) -> DerivBackend:
    if backend is not None:
        return backend
    return REDUCTION if f.deriv(1) is not None else LIMIT_QUOTIENT


def _first_order(alpha: Order) -> float:
    order = as_order(alpha)
    if order.n != 0:
        raise DomainError(f"first-level derivative needs 0 < alpha <= 1, got {order.alpha}")
    return order.alpha


def _quotient(f: RealFn, t: float, dist: float, alpha: float, bk: DerivBackend) -> float:
    # dist is the distance to the base point; the step in t is eps * dist**(1-alpha)
    w = dist ** (1.0 - alpha)
    eps0 = bk.step0 * min(1.0, dist ** alpha)

    def q(eps):
        return (f(t + eps * w) - f(t - eps * w)) / (2.0 * eps)

    return ridders(q, eps0, bk.richardson_levels, power=2)[0]


def _classical(f: RealFn, t: float, k: int, lower=-math.inf, upper=math.inf) -> float:
    hook = f.deriv(k)
    if hook is not None:
        return float(hook(t))
    if k > 2:
        raise PreconditionError(
            f"derivative of order {k} needs an exact hook; numeric differencing stops at 2")
    return central_derivative(f, t, k, lower=lower, upper=upper)


def _left_interior(f: RealFn, a: float, alpha: float, t: float, bk: DerivBackend) -> float:
    dist = t - a
    if bk.mode == "reduction_formula":
        return dist ** (1.0 - alpha) * _classical(f, t, 1, lower=a)
    return _quotient(f, t, dist, alpha, bk)


def _right_interior(f: RealFn, b: float, alpha: float, t: float, bk: DerivBackend) -> float:
    dist = b - t
    if bk.mode == "reduction_formula":
        return -(dist ** (1.0 - alpha)) * _classical(f, t, 1, upper=b)
    return -_quotient(f, t, dist, alpha, bk)


def left_deriv(f, a: float, order: Order, t: float,
               backend: Optional[DerivBackend] = None) -> float:
    """Left conformable derivative of order ``0 < alpha <= 1`` at ``t >= a``.

    At ``t == a`` the right limit is taken along ``a + h_k`` and extrapolated;
    :class:`~conforma.errors.ConvergenceError` is raised if it does not settle.
    """
    f = as_fn(f)
    alpha = _first_order(order)
    if t < a:
        raise DomainError(f"left derivative based at {a} is undefined at t={t}")
    bk = _pick(f, backend)
    if t == a:
        return one_sided_limit(lambda h: _left_interior(f, a, alpha, a + h, bk), ENDPOINT_H0)
    return _left_interior(f, a, alpha, t, bk)


def right_deriv(f, b: float, order: Order, t: float,
                backend: Optional[DerivBackend] = None) -> float:
    """Right conformable derivative terminating at ``b``, for ``t <= b``."""
    f = as_fn(f)
    alpha = _first_order(order)
    if t > b:
        raise DomainError(f"right derivative terminating at {b} is undefined at t={t}")
    bk = _pick(f, backend)
    if t == b:
        return one_sided_limit(lambda h: _right_interior(f, b, alpha, b - h, bk), ENDPOINT_H0)
    return _right_interior(f, b, alpha, t, bk)


def classical_derivative_fn(f, n: int, lower=-math.inf, upper=math.inf) -> RealFn:
    """``f^(n)`` as a :class:`RealFn`, from hooks or (``n <= 2``) differences."""
    f = as_fn(f)
    if n == 0:
        return f
    if f.smoothness < n:
        raise PreconditionError(
            f"order needs {n} classical derivatives but smoothness is {f.smoothness}")
    hook = f.deriv(n)
    if hook is not None:
        return f.derivative_fn(n)
    if n > 2:
        raise PreconditionError(f"derivative of order {n} needs an exact hook")
    return RealFn(lambda x: central_derivative(f, x, n, lower=lower, upper=upper),
                  smoothness=f.smoothness - n)


def higher_left_deriv(f, a: float, order: Order, t: float,
                      backend: Optional[DerivBackend] = None) -> float:
    r"""Left derivative of any order :math:`\alpha = n + \beta`: :math:`T_\beta^a f^{(n)}`.

    Requires ``f.smoothness >= n``. At ``t == a`` the right limit is
    returned; it vanishes for non-integer ``alpha`` when :math:`f^{(n+1)}`
    stays bounded near ``a``.
    """
    f = as_fn(f)
    o = as_order(order)
    if t < a:
        raise DomainError(f"left derivative based at {a} is undefined at t={t}")
    g = classical_derivative_fn(f, o.n, lower=a)
    return left_deriv(g, a, o.beta, t, backend)


def higher_right_deriv(f, b: float, order: Order, t: float,
                       backend: Optional[DerivBackend] = None) -> float:
    r"""Right derivative of any order: :math:`(-1)^n\,{}^{b}T_\beta f^{(n)}`.

    The sign makes integer orders reproduce :math:`(-d/dt)^{n+1} f` and keeps
    :func:`~conforma.integrals.right_integral` a right inverse.
    """
    f = as_fn(f)
    o = as_order(order)
    if t > b:
        raise DomainError(f"right derivative terminating at {b} is undefined at t={t}")
    g = classical_derivative_fn(f, o.n, upper=b)
    sign = -1.0 if o.n % 2 else 1.0
    return sign * right_deriv(g, b, o.beta, t, backend)


# -- sequential derivatives ------------------------------------------------

def _sequential_terms(alpha: float, count: int, side: int):
    """Expand the ``count``-fold operator as ``sum c * d**gamma * f^(j)``.

    ``d`` is the distance to the base point; ``side`` is +1 (left) or -1 (right).
    """
    terms = {(0, 0.0): 1.0}
    for _ in range(count):
        nxt = defaultdict(float)
        for (j, gamma), c in terms.items():
            if gamma != 0.0:
                nxt[(j, round(gamma - alpha, 12))] += c * gamma
            nxt[(j + 1, round(gamma + 1.0 - alpha, 12))] += side * c
        terms = {k: v for k, v in nxt.items() if v != 0.0}
    return terms


def _nested(f: RealFn, base: float, alpha: float, count: int, side: int,
            backend: Optional[DerivBackend]) -> Callable[[float], float]:
    g = f
    for _ in range(count):
        prev = g
        if side > 0:
            g = RealFn(lambda x, p=prev: left_deriv(p, base, alpha, x, backend))
        else:
            g = RealFn(lambda x, p=prev: right_deriv(p, base, alpha, x, backend))
    return g


def _sequential(f, base, alpha, count, t, side, backend):
    f = as_fn(f)
    alpha = _first_order(alpha)
    if count < 1:
        raise DomainError("count must be at least 1")
    if f.smoothness < count:
        raise PreconditionError(
            f"{count} sequential applications need smoothness >= {count}, got {f.smoothness}")
    dist = (t - base) * side
    if dist < 0:
        raise DomainError(f"t={t} lies outside the half-line based at {base}")

    if all(f.deriv(j) is not None for j in range(1, count + 1)):
        terms = _sequential_terms(alpha, count, side)

        def interior(x):
            d = (x - base) * side
            return math.fsum(c * d ** gamma * f.deriv(j)(x) for (j, gamma), c in terms.items())
    else:
        interior = _nested(f, base, alpha, count, side, backend)

    if dist == 0:
        if alpha <= 1.0 / count:
            return 0.0
        return one_sided_limit(lambda h: interior(base + side * h), ENDPOINT_H0)
    return float(interior(t))


def sequential_left_deriv(f, a: float, alpha: float, count: int, t: float,
                          backend: Optional[DerivBackend] = None) -> float:
    r"""``count``-fold composition :math:`T_\alpha^a \cdots T_\alpha^a f`.

    With exact hooks up to order ``count`` the composition is expanded in
    closed form; otherwise the first-level derivative is nested numerically.
    At ``t == a`` the value is 0 for ``alpha <= 1/count``. This is the
    endpoint convention for smooth ``f``; at exactly ``alpha == 1/count`` the
    one-sided limit is :math:`(1-\alpha)\cdots f'(a)` and differs from it when
    :math:`f'(a) \ne 0`. Larger ``alpha`` takes the limit, which may diverge.
    """
    return _sequential(f, a, alpha, count, t, +1, backend)


def sequential_right_deriv(f, b: float, alpha: float, count: int, t: float,
                           backend: Optional[DerivBackend] = None) -> float:
    """Mirror of :func:`sequential_left_deriv` terminating at ``b``."""
    return _sequential(f, b, alpha, count, t, -1, backend)


def chain_deriv(f, g, a: float, alpha: float, t: float,
                backend: Optional[DerivBackend] = None) -> float:
    r"""Chain-rule evaluation :math:`(T_\alpha^a f)(g(t))\,(T_\alpha^a g)(t)\,g(t)^{\alpha-1}`.

    This equals :math:`T_\alpha^a (f \circ g)(t)` when the base point is 0;
    for ``a != 0`` the factor :math:`(g(t)-a)^{1-\alpha} g(t)^{\alpha-1}` is
    left over. ``g(t)`` must be positive unless ``alpha == 1``.
    """
    f, g = as_fn(f), as_fn(g)
    alpha = _first_order(alpha)
    if t < a:
        raise DomainError(f"left derivative based at {a} is undefined at t={t}")

    def value(x):
        gx = float(g(x))
        if gx == 0.0:
            raise SingularityError(f"chain rule needs g(t) != 0; g({x}) = 0")
        if gx < 0.0 and alpha != 1.0:
            raise SingularityError(
                f"g({x}) = {gx} < 0 makes g(t)**(alpha-1) non-real for alpha={alpha}")
        outer = left_deriv(f, a, alpha, gx, backend)
        inner = left_deriv(g, a, alpha, x, backend)
        return outer * inner * gx ** (alpha - 1.0)

    if t == a:
        return one_sided_limit(lambda h: value(a + h), ENDPOINT_H0)
    return value(t)
