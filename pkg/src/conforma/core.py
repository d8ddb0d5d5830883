"""Shared value types: fractional orders, functions and quadrature settings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, PreconditionError

Scalar = Callable[[float], float]


@dataclass(frozen=True)
class FracOrder:
    r"""A positive order split as :math:`\alpha = n + \beta`.

    ``n`` is the unique integer with :math:`n < \alpha \le n + 1`, so that
    :math:`\beta \in (0, 1]`. Integer orders therefore carry ``beta == 1``.
    """

    alpha: float
    n: int
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"order must be positive and finite, got {self.alpha!r}")
        if not (0 < self.beta <= 1) or self.n < 0 or self.n + self.beta != self.alpha:
            raise DomainError(
                f"inconsistent decomposition alpha={self.alpha}, n={self.n}, beta={self.beta}"
            )

    @property
    def is_integer(self) -> bool:
        return self.beta == 1.0


def make_order(alpha: float) -> FracOrder:
    """Decompose ``alpha > 0`` into ``(n, beta)`` with ``beta`` in ``(0, 1]``."""
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"order must be positive and finite, got {alpha!r}")
    n = math.ceil(alpha) - 1
    # alpha - n is exact here (Sterbenz) because n <= alpha <= 2n for n >= 1
    return FracOrder(alpha, n, alpha - n)


def as_order(order: Union[float, FracOrder]) -> FracOrder:
    if isinstance(order, FracOrder):
        return order
    return make_order(order)


@dataclass(frozen=True)
class Interval:
    """A base point ``a`` and terminal point ``b`` (``b`` may be infinite)."""

    a: float
    b: float = math.inf

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"interval needs a < b, got [{self.a}, {self.b}]")

    def __contains__(self, t: float) -> bool:
        return self.a <= t <= self.b


@dataclass(frozen=True)
class RealFn:
    """A scalar function together with what the caller knows about it.

    Parameters
    ----------
    eval
        The function itself, ``float -> float``.
    smoothness
        Number of continuous classical derivatives the caller vouches for.
        Nothing is detected automatically; theorems with smoothness
        hypotheses are only as good as this declaration.
    exact_derivs
        Known classical derivatives ``(f', f'', ...)``.
    vectorized
        Set when ``eval`` accepts and returns numpy arrays; quadrature then
        evaluates whole panels in one call.
    """

    eval: Scalar
    smoothness: int = 0
    exact_derivs: tuple = ()
    vectorized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "exact_derivs", tuple(self.exact_derivs))
        if self.smoothness < 0:
            raise DomainError("smoothness must be nonnegative")
        if len(self.exact_derivs) > self.smoothness:
            raise PreconditionError(
                f"{len(self.exact_derivs)} exact derivatives supplied but "
                f"smoothness declared as {self.smoothness}"
            )

    def __call__(self, t: float) -> float:
        return self.eval(t)

    def deriv(self, k: int) -> Optional[Scalar]:
        """The ``k``-th exact derivative hook, or ``None`` (``k = 0`` is ``eval``)."""
        if k == 0:
            return self.eval
        if k <= len(self.exact_derivs):
            return self.exact_derivs[k - 1]
        return None

    def many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.vectorized:
            return np.broadcast_to(np.asarray(self.eval(xs), dtype=float), xs.shape)
        return np.array([self.eval(float(x)) for x in xs.ravel()], dtype=float).reshape(xs.shape)

    def derivative_fn(self, k: int) -> "RealFn":
        """The ``k``-th derivative as a :class:`RealFn` built from exact hooks."""
        d = self.deriv(k)
        if d is None:
            raise PreconditionError(f"no exact hook for derivative of order {k}")
        return RealFn(d, max(self.smoothness - k, 0), self.exact_derivs[k:], self.vectorized)


def as_fn(f: Union[RealFn, Scalar]) -> RealFn:
    """Wrap a plain callable as a :class:`RealFn` with no declared smoothness."""
    if isinstance(f, RealFn):
        return f
    if not callable(f):
        raise TypeError(f"expected a callable or RealFn, got {type(f).__name__}")
    return RealFn(f)


def constant(c: float) -> RealFn:
    c = float(c)
    return RealFn(lambda t: c + 0.0 * t, smoothness=3,
                  exact_derivs=(lambda t: 0.0 * t,) * 3, vectorized=True)


def polynomial(coeffs: Sequence[float]) -> RealFn:
    """``sum(coeffs[k] * t**k)`` with all derivative hooks attached."""
    p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    derivs = []
    q = p
    for _ in range(max(len(coeffs), 1) + 2):
        q = q.deriv()
        derivs.append(q)
    return RealFn(p, smoothness=len(derivs), exact_derivs=tuple(derivs), vectorized=True)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for every adaptive integral.

    ``nodes_per_panel`` is the Gauss-Legendre order used on each panel.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdiv: int = 2 ** 14
    nodes_per_panel: int = 15

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.nodes_per_panel < 2:
            raise DomainError("nodes_per_panel must be at least 2")
        if self.max_subdiv < 1:
            raise DomainError("max_subdiv must be at least 1")


DEFAULT_QUAD = QuadratureSpec()
