r"""Fractional Laplace transform of order :math:`0 < \alpha \le 1`.

.. math::

    F_\alpha^{t_0}(s) = \int_{t_0}^\infty e^{-s (t-t_0)^\alpha/\alpha}
        f(t)\,(t-t_0)^{\alpha-1}\,dt
      = \int_0^\infty e^{-su} f\big(t_0 + (\alpha u)^{1/\alpha}\big)\,du,

the second form by :math:`u = (t-t_0)^\alpha/\alpha`. Numeric evaluation
uses the second form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional

import numpy as np

from .core import DEFAULT_QUAD, QuadratureSpec, RealFn, as_fn
from .errors import AccuracyError, DivergenceError, DomainError
from .quadrature import integrate

#: panel length is this many e-folds of the decaying factor
PANEL_EFOLDS = 5.0
MAX_PANELS = 400

KINDS = ("one", "t", "t_pow", "frac_exp", "frac_sin", "frac_cos", "damped")


@dataclass(frozen=True)
class TransformQuery:
    """Where to evaluate a transform.

    ``tail_bound`` is the caller's growth constant ``c`` with
    ``|f(t0 + (alpha u)**(1/alpha))| <= C exp(c u)``.
    """

    t0: float
    alpha: float
    s: float
    tail_bound: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise DomainError(f"transform order must lie in (0, 1], got {self.alpha}")
        if not self.s > self.tail_bound:
            raise DivergenceError(
                f"transform diverges: s={self.s} must exceed the growth bound {self.tail_bound}")


def laplace_numeric(f, q: TransformQuery, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Evaluate the fractional transform by panels ``[kL, (k+1)L]`` in ``u``.

    ``L = 5 / (s - tail_bound)``. Summation stops once a panel falls below
    ``abs_tol`` (relative to the running total) and the geometric remainder
    implied by the growth bound is added.
    """
    f = as_fn(f)
    inv = 1.0 / q.alpha
    decay = q.s - q.tail_bound
    length = PANEL_EFOLDS / decay

    def g(u):
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.exp(-q.s * u) * f.many(q.t0 + (q.alpha * u) ** inv)
        if not np.all(np.isfinite(vals)):
            raise DivergenceError(
                f"integrand overflowed near u={float(np.max(u)):.4g}; "
                f"is the growth bound {q.tail_bound} too small?")
        return vals

    total = 0.0
    parts = []
    quiet = 0
    for k in range(MAX_PANELS):
        piece = integrate(g, k * length, (k + 1) * length, spec).value
        parts.append(piece)
        total = math.fsum(parts)
        small = abs(piece) <= max(spec.abs_tol, spec.rel_tol * abs(total))
        quiet = quiet + 1 if small else 0
        # two quiet panels in a row guard against an integrand that
        # happens to vanish over one panel
        if quiet >= 2:
            ratio = math.exp(-PANEL_EFOLDS)
            return math.fsum(parts + [piece * ratio / (1.0 - ratio)])
    raise AccuracyError(
        f"transform tail still significant after {MAX_PANELS} panels", total, abs(parts[-1]))


def weighted_form(f, q: TransformQuery, upper: float,
                  spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    r"""The defining integral over ``[t0, upper]`` with weight :math:`(t-t_0)^{\alpha-1}`.

    Integrates in ``v = (t - t0)^alpha`` (which only rescales the weight away)
    rather than ``u``; used to cross-check :func:`laplace_numeric`.
    """
    f = as_fn(f)
    a = q.alpha
    vmax = (upper - q.t0) ** a
    g = lambda v: np.exp(-q.s * v / a) * f.many(q.t0 + v ** (1.0 / a)) / a
    return integrate(g, 0.0, vmax, spec).value


def _region(kind: str, params: Mapping[str, Any]) -> float:
    """Infimum of ``s`` for which each table entry converges."""
    if kind in ("one", "t", "t_pow", "frac_sin", "frac_cos"):
        return 0.0
    if kind == "frac_exp":
        return float(params.get("lam", 1.0))
    if kind == "damped":
        inner = params.get("inner", "frac_sin")
        return _region(inner, params.get("inner_params", {})) - float(params["k"])
    raise DomainError(f"unknown table entry {kind!r}")


def laplace_table(kind: str, params: Optional[Mapping[str, Any]], t0: float,
                  alpha: float, s: float) -> float:
    r"""Closed-form fractional transforms.

    ========  ==============================  ==================================
    kind      function of ``t``               transform
    ========  ==============================  ==================================
    one       1                               1/s
    t         t                               t0/s + a^(1/a) G(1+1/a)/s^(1+1/a)
    t_pow     t^p (``t0 = 0``, p > -a)        a^(p/a) G(1+p/a)/s^(1+p/a)
    frac_exp  exp(lam u)                      1/(s - lam)
    frac_sin  sin(omega u)                    omega/(s^2 + omega^2)
    frac_cos  cos(omega u)                    s/(s^2 + omega^2)
    damped    exp(-k u) g(t)                  transform of g at s + k
    ========  ==============================  ==================================

    Here ``u = (t - t0)^a / a`` and ``G`` is the gamma function. ``params``
    carries ``p``, ``lam`` (default 1), ``omega`` (default 1), and for
    ``damped`` the keys ``k``, ``inner`` (a kind) and ``inner_params``.
    """
    params = dict(params or {})
    if not 0 < alpha <= 1:
        raise DomainError(f"transform order must lie in (0, 1], got {alpha}")
    lo = _region(kind, params)
    if kind == "t_pow":
        p = float(params["p"])
        if t0 != 0:
            raise DomainError("t_pow is tabulated for t0 = 0 only")
        if not p > -alpha:
            raise DomainError(f"t^p is not transformable for p={p} <= -alpha")
    if not s > lo:
        raise DomainError(f"{kind} transform needs s > {lo}, got s={s}")
    a = alpha
    if kind == "one":
        return 1.0 / s
    if kind == "t":
        return t0 / s + a ** (1.0 / a) * math.gamma(1.0 + 1.0 / a) / s ** (1.0 + 1.0 / a)
    if kind == "t_pow":
        p = float(params["p"])
        return a ** (p / a) * math.gamma(1.0 + p / a) / s ** (1.0 + p / a)
    if kind == "frac_exp":
        return 1.0 / (s - float(params.get("lam", 1.0)))
    if kind == "frac_sin":
        w = float(params.get("omega", 1.0))
        return w / (s * s + w * w)
    if kind == "frac_cos":
        w = float(params.get("omega", 1.0))
        return s / (s * s + w * w)
    # damped
    k = float(params["k"])
    return laplace_table(params.get("inner", "frac_sin"), params.get("inner_params", {}),
                         t0, alpha, s + k)


def table_function(kind: str, params: Optional[Mapping[str, Any]], t0: float,
                   alpha: float) -> RealFn:
    """The time-domain function behind a :func:`laplace_table` entry."""
    params = dict(params or {})
    a = alpha
    u = lambda t: np.maximum(t - t0, 0.0) ** a / a
    if kind == "one":
        fn = lambda t: np.ones_like(np.asarray(t, dtype=float))
    elif kind == "t":
        fn = lambda t: np.asarray(t, dtype=float)
    elif kind == "t_pow":
        p = float(params["p"])
        fn = lambda t: np.asarray(t, dtype=float) ** p
    elif kind == "frac_exp":
        lam = float(params.get("lam", 1.0))
        fn = lambda t: np.exp(lam * u(t))
    elif kind == "frac_sin":
        w = float(params.get("omega", 1.0))
        fn = lambda t: np.sin(w * u(t))
    elif kind == "frac_cos":
        w = float(params.get("omega", 1.0))
        fn = lambda t: np.cos(w * u(t))
    elif kind == "damped":
        k = float(params["k"])
        inner = table_function(params.get("inner", "frac_sin"), params.get("inner_params", {}),
                               t0, alpha)
        fn = lambda t: np.exp(-k * u(t)) * inner.eval(t)
    else:
        raise DomainError(f"unknown table entry {kind!r}")
    return RealFn(fn, vectorized=True)


def table_growth(kind: str, params: Optional[Mapping[str, Any]]) -> float:
    """Growth constant of a table function in the scaled variable ``u``."""
    return _region(kind, dict(params or {}))


def laplace_of_deriv(F_value: float, f_at_a: float, s: float) -> float:
    """Transform of the conformable derivative: ``s * F - f(a)``."""
    return s * F_value - f_at_a
