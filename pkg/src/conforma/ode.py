r"""Linear conformable differential equations.

Solutions of :math:`T_\alpha^a y = A y + f` are written in the scaled time
:math:`u = (t-a)^\alpha/\alpha`, in which the operator becomes ``d/du`` and
the fundamental matrix is the ordinary exponential :math:`e^{A u}`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from .core import DEFAULT_QUAD, QuadratureSpec, RealFn, as_fn
from .derivatives import DerivBackend, left_deriv
from .errors import DomainError
from .integrals import left_integral
from .quadrature import integrate

VectorFn = Callable[[float], np.ndarray]


def scaled_time(a: float, alpha: float, t: float) -> float:
    if t < a:
        raise DomainError(f"t={t} precedes the base point {a}")
    return (t - a) ** alpha / alpha


def solve_scalar(lam: float, y0: float, a: float, alpha: float, t: float) -> float:
    r"""Solution :math:`y_0 e^{\lambda (t-a)^\alpha/\alpha}` of :math:`T_\alpha^a y = \lambda y`."""
    return y0 * math.exp(lam * scaled_time(a, alpha, t))


def picard_partial(lam: float, y0: float, a: float, alpha: float, n: int, t: float) -> float:
    """The ``n``-th successive approximation in closed form.

    ``y0 * sum_{k<=n} (lam u)^k / k!``, summed exactly.
    """
    if n < 0:
        raise DomainError("iteration count must be nonnegative")
    x = lam * scaled_time(a, alpha, t)
    terms, term = [1.0], 1.0
    for k in range(1, n + 1):
        term *= x / k
        terms.append(term)
    return y0 * math.fsum(terms)


def picard_iterates(lam: float, y0: float, a: float, alpha: float, n: int,
                    spec: QuadratureSpec = DEFAULT_QUAD) -> list[RealFn]:
    """Iterates ``y_0..y_n`` of ``y_{m+1} = y0 + lam * I_alpha^a y_m`` by quadrature.

    Each iterate is a function that evaluates its fractional integral afresh,
    so evaluating ``y_n`` nests ``n`` quadratures.
    """
    if n < 0:
        raise DomainError("iteration count must be nonnegative")
    y0 = float(y0)
    its = [RealFn(lambda t: y0 + 0.0 * np.asarray(t, dtype=float), vectorized=True)]
    for _ in range(n):
        prev = its[-1]
        its.append(RealFn(lambda t, p=prev: y0 + lam * left_integral(p, a, alpha, t, spec)))
    return its


def picard_poly(lam: float, y0: float, n: int) -> np.ndarray:
    """Exact-path iterates: coefficients of ``y_n`` as a polynomial in ``u``.

    Integration in ``u`` is term-wise (``u^k -> u^(k+1)/(k+1)``), which is
    what the fractional integral does to powers of the scaled time.
    """
    coef = np.array([float(y0)])
    for _ in range(n):
        integ = np.concatenate([[0.0], coef / np.arange(1, coef.size + 1)])
        integ[0] = y0
        integ[1:] *= lam
        coef = integ
    return coef


def frac_matrix_exp(A, a: float, alpha: float, t: float) -> np.ndarray:
    r"""Fundamental matrix :math:`e^{A (t-a)^\alpha/\alpha}` (scaling and squaring)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"matrix must be square, got shape {A.shape}")
    return scipy.linalg.expm(A * scaled_time(a, alpha, t))


@dataclass(frozen=True)
class LinearFracSystem:
    """``T_alpha^a y = A y + f(t)`` with ``y(a) = c``.

    ``f`` returns a vector of length ``n`` (or ``None`` for the homogeneous
    system).
    """

    A: np.ndarray
    c: np.ndarray
    a: float
    alpha: float
    f: Optional[VectorFn] = None
    f_vectorized: bool = False

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DomainError(f"A must be square, got shape {A.shape}")
        if c.shape != (A.shape[0],):
            raise DomainError(f"c has shape {c.shape}, expected ({A.shape[0]},)")
        if not 0 < self.alpha <= 1:
            raise DomainError(f"order must lie in (0, 1], got {self.alpha}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def forcing(self, t: float) -> np.ndarray:
        if self.f is None:
            return np.zeros(self.dim)
        return np.asarray(self.f(t), dtype=float).reshape(self.dim)


def solve_system(sys: LinearFracSystem, t: float,
                 spec: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    r"""Variation-of-constants solution at ``t``.

    .. math::

        y(t) = e^{A u(t)} c + \int_a^t e^{A (u(t) - u(s))} f(s)\,(s-a)^{\alpha-1}\,ds,

    computed in the scaled time, where the weight disappears:
    the integral is :math:`\int_0^{u(t)} e^{A(u(t)-v)} f(a + (\alpha v)^{1/\alpha})\,dv`.
    """
    U = scaled_time(sys.a, sys.alpha, t)
    y = scipy.linalg.expm(sys.A * U) @ sys.c
    if sys.f is None or U == 0.0:
        return y
    inv = 1.0 / sys.alpha
    vals, vecs = None, None
    # diagonalise once when A is well conditioned; otherwise fall back to expm per node
    w, V = np.linalg.eig(sys.A)
    if np.linalg.cond(V) < 1e8:
        vals, vecs, vinv = w, V, np.linalg.inv(V)

    def g(v):
        nodes = np.atleast_1d(v)
        out = np.empty((nodes.size, sys.dim))
        for i, vi in enumerate(nodes):
            fv = sys.forcing(sys.a + (sys.alpha * vi) ** inv)
            if vals is not None:
                out[i] = np.real(vecs @ (np.exp(vals * (U - vi)) * (vinv @ fv)))
            else:
                out[i] = scipy.linalg.expm(sys.A * (U - vi)) @ fv
        return out

    return y + integrate(g, 0.0, U, spec).value


def residual(sys: LinearFracSystem, y: VectorFn, t: float,
             backend: Optional[DerivBackend] = None) -> np.ndarray:
    """``T_alpha^a y(t) - A y(t) - f(t)``, componentwise, for ``t > a``."""
    if not t > sys.a:
        raise DomainError("residual is checked at interior points t > a")
    comps = [RealFn(lambda s, i=i: float(np.asarray(y(s))[i])) for i in range(sys.dim)]
    dy = np.array([left_deriv(c, sys.a, sys.alpha, t, backend) for c in comps])
    return dy - sys.A @ np.asarray(y(t), dtype=float) - sys.forcing(t)


# -- Gronwall ---------------------------------------------------------------

@dataclass(frozen=True)
class GronwallInstance:
    """Data of the integral inequality ``r <= delta + k * int r (s-a)^(alpha-1) ds``."""

    r: RealFn
    delta: float
    k: float
    a: float
    b: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "r", as_fn(self.r))
        if self.delta < 0 or self.k < 0:
            raise DomainError("delta and k must be nonnegative")
        if not self.a < self.b:
            raise DomainError("need a < b")
        if not 0 < self.alpha <= 1:
            raise DomainError(f"order must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class GronwallReport:
    """Per-point slack of hypothesis and conclusion.

    ``hypothesis_slack[i] = delta + k I_alpha r(t_i) - r(t_i)`` and
    ``conclusion_slack[i] = delta exp(k u_i) - r(t_i)``. A hypothesis counts as
    held when its slack is above ``-tol``; ``violations`` lists grid indices
    where it held but the conclusion failed.
    """

    t: np.ndarray
    r: np.ndarray
    hypothesis_slack: np.ndarray
    conclusion_slack: np.ndarray
    tol: float
    hypothesis_held: np.ndarray = field(init=False)
    violations: np.ndarray = field(init=False)

    def __post_init__(self):
        held = self.hypothesis_slack >= -self.tol
        object.__setattr__(self, "hypothesis_held", held)
        object.__setattr__(
            self, "violations", np.flatnonzero(held & (self.conclusion_slack < -self.tol)))

    @property
    def ok(self) -> bool:
        """True when the bound held wherever the hypothesis did."""
        return self.violations.size == 0


def gronwall_check(g: GronwallInstance, grid_size: int,
                   spec: QuadratureSpec = DEFAULT_QUAD) -> GronwallReport:
    """Evaluate both sides of the inequality on a uniform grid over ``[a, b]``."""
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    ts = np.linspace(g.a, g.b, grid_size)
    r = np.array([float(g.r(t)) for t in ts])
    if np.any(r < 0):
        raise DomainError("r must be nonnegative on the grid")
    integral = np.array([left_integral(g.r, g.a, g.alpha, t, spec) for t in ts])
    hyp = g.delta + g.k * integral - r
    u = (ts - g.a) ** g.alpha / g.alpha
    concl = g.delta * np.exp(g.k * u) - r
    scale = max(1.0, float(np.max(np.abs(r))), g.delta)
    tol = 10.0 * spec.rel_tol * scale + spec.abs_tol
    return GronwallReport(ts, r, hyp, concl, tol)
