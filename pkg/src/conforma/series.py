r"""Fractional power series :math:`\sum_k c_k (t - t_0)^{k\alpha}`.

Coefficients are stored one per power slot ``k`` (zeros kept explicitly), so
term-by-term differentiation is a shift: :math:`T_\alpha^{t_0}` maps slot
``k`` to slot ``k - 1`` with factor :math:`k\alpha`.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional

import numpy as np

from .core import as_fn
from ._extrapolate import ridders
from .errors import DomainError

Kind = Literal["frac_exp", "frac_sin", "frac_cos", "frac_geom"]

#: deepest level at which coefficients are extracted numerically
MAX_NUMERIC_ORDER = 4


@dataclass(frozen=True)
class FracSeries:
    """Coefficients ``c_0..c_K`` of a fractional power series about ``t0``.

    ``radius`` is the half-width of the validity interval ``[t0, t0 + radius)``
    in ``t`` (``math.inf`` for entire series).

    Coefficients given as :class:`~fractions.Fraction` are also kept exactly
    in ``exact``; :meth:`derivative` then works in rational arithmetic and the
    float coefficients are the correctly rounded exact values.
    """

    t0: float
    alpha: float
    coeffs: tuple
    radius: float = math.inf
    exact: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if coeffs and all(isinstance(c, Fraction) for c in coeffs):
            object.__setattr__(self, "exact", coeffs)
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))
        if not 0 < self.alpha <= 1:
            raise DomainError(f"series order must lie in (0, 1], got {self.alpha}")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise DomainError("series coefficients must be finite")
        if not self.radius >= 0:
            raise DomainError("radius must be nonnegative")

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: float) -> float:
        return eval_series(self, t)

    def truncate(self, n: int) -> "FracSeries":
        src = self.exact if self.exact is not None else self.coeffs
        return FracSeries(self.t0, self.alpha, src[: n + 1], self.radius)

    def derivative(self) -> "FracSeries":
        """Term-by-term conformable derivative based at ``t0``."""
        if self.exact is not None:
            a = Fraction(self.alpha)
            c = [k * a * ck for k, ck in enumerate(self.exact)][1:] or [Fraction(0)]
        else:
            c = [k * self.alpha * ck for k, ck in enumerate(self.coeffs)][1:] or [0.0]
        return FracSeries(self.t0, self.alpha, c, self.radius)

    def dumps(self) -> str:
        """Plain-text form: ``t0 alpha K radius`` then one coefficient per line."""
        out = io.StringIO()
        out.write(f"{self.t0!r} {self.alpha!r} {self.K} {self.radius!r}\n")
        for c in self.coeffs:
            out.write(f"{c!r}\n")
        return out.getvalue()

    @classmethod
    def loads(cls, text: str) -> "FracSeries":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise DomainError("empty series text")
        head = lines[0].split()
        if len(head) != 4:
            raise DomainError("series header must be 't0 alpha K radius'")
        t0, alpha, K, radius = float(head[0]), float(head[1]), int(head[2]), float(head[3])
        coeffs = [float(v) for v in lines[1:]]
        if len(coeffs) != K + 1:
            raise DomainError(f"header announces K={K} but {len(coeffs)} coefficients follow")
        return cls(t0, alpha, coeffs, radius)


def eval_series(s: FracSeries, t: float) -> float:
    """Partial sum at ``t``, accumulated in ascending ``k`` with exact rounding."""
    if t < s.t0:
        raise DomainError(f"series about {s.t0} is one-sided; t={t} lies below it")
    if not t - s.t0 < s.radius:
        raise DomainError(f"t={t} lies outside the validity interval [{s.t0}, {s.t0 + s.radius})")
    w = (t - s.t0) ** s.alpha
    terms = []
    p = 1.0
    for c in s.coeffs:
        terms.append(c * p)
        p *= w
    return math.fsum(terms)


def builtin_series(kind: Kind, t0: float, alpha: float, K: int) -> FracSeries:
    r"""Exact coefficients of the fractional exp, sin, cos and geometric series.

    In the scaled variable :math:`u = (t-t_0)^\alpha/\alpha` these are the
    classical series of :math:`e^u`, :math:`\sin u`, :math:`\cos u` and
    :math:`1/(1-u)`; the geometric one converges for :math:`u < 1`, i.e.
    :math:`t - t_0 < \alpha^{1/\alpha}`.
    """
    if K < 0:
        raise DomainError("K must be nonnegative")
    if not 0 < alpha <= 1:
        raise DomainError(f"series order must lie in (0, 1], got {alpha}")
    # computed exactly (a float alpha is a dyadic rational), rounded once
    a = Fraction(alpha)
    zero = Fraction(0)
    # u^k / k! expressed per slot: c_k = 1 / (alpha^k k!)
    fact = [Fraction(1)]
    for k in range(1, K + 1):
        fact.append(fact[-1] / (a * k))
    if kind == "frac_exp":
        return FracSeries(t0, alpha, fact)
    if kind == "frac_sin":
        c = [zero if k % 2 == 0 else (-1) ** (k // 2) * fact[k] for k in range(K + 1)]
        return FracSeries(t0, alpha, c)
    if kind == "frac_cos":
        c = [(-1) ** (k // 2) * fact[k] if k % 2 == 0 else zero for k in range(K + 1)]
        return FracSeries(t0, alpha, c)
    if kind == "frac_geom":
        c = [a ** -k for k in range(K + 1)]
        return FracSeries(t0, alpha, c, alpha ** (1.0 / alpha))
    raise DomainError(f"unknown series kind {kind!r}")


def closed_form(kind: Kind, t0: float, alpha: float):
    """The function each built-in series represents, as a callable of ``t``."""
    u = lambda t: (t - t0) ** alpha / alpha
    table = {
        "frac_exp": lambda t: math.exp(u(t)),
        "frac_sin": lambda t: math.sin(u(t)),
        "frac_cos": lambda t: math.cos(u(t)),
        "frac_geom": lambda t: 1.0 / (1.0 - u(t)),
    }
    if kind not in table:
        raise DomainError(f"unknown series kind {kind!r}")
    return table[kind]


def taylor_coeffs(f, t0: float, alpha: float, K: int, radius: float = math.inf,
                  h0: float = 0.5) -> FracSeries:
    r"""Extract :math:`c_k = (T_\alpha^{t_0})^k f(t_0) / (\alpha^k k!)` numerically.

    In the scaled variable :math:`u = (t-t_0)^\alpha/\alpha` the conformable
    derivative based at ``t0`` is ``d/du``, so the ``k``-fold sequential
    derivative at ``t0`` is the ``k``-th right derivative of
    :math:`F(u) = f(t_0 + (\alpha u)^{1/\alpha})` at ``u = 0``. It is taken
    from forward differences of step ``h0 * 2**-j`` with Richardson
    extrapolation. Noise grows like ``h**-k``, hence the cap ``K <= 4``; use
    :func:`builtin_series` beyond that. ``radius`` is attached unchecked.
    """
    f = as_fn(f)
    if K < 0:
        raise DomainError("K must be nonnegative")
    if K > MAX_NUMERIC_ORDER:
        raise DomainError(
            f"numeric extraction stops at K={MAX_NUMERIC_ORDER}; got K={K}")
    if not 0 < alpha <= 1:
        raise DomainError(f"series order must lie in (0, 1], got {alpha}")
    inv = 1.0 / alpha
    F = lambda u: float(f(t0 + (alpha * u) ** inv))
    coeffs = [float(f(t0))]
    for k in range(1, K + 1):
        binom = [(-1.0) ** (k - j) * math.comb(k, j) for j in range(k + 1)]
        q = lambda h, k=k, binom=binom: math.fsum(
            b * F(j * h) for j, b in enumerate(binom)) / h ** k
        dk, _ = ridders(q, h0, 6, power=1)
        coeffs.append(dk / (alpha ** k * math.factorial(k)))
    return FracSeries(t0, alpha, coeffs, radius)


def remainder_bound(M: float, n: int, alpha: float, t0: float, t: float) -> float:
    r"""Bound :math:`M (t-t_0)^{\alpha(n+1)} / (\alpha^{n+1} (n+1)!)` on the tail after term ``n``."""
    if M < 0:
        raise DomainError("M must be nonnegative")
    if t < t0:
        raise DomainError("remainder bound is one-sided: t >= t0")
    return M * (t - t0) ** (alpha * (n + 1)) / (alpha ** (n + 1) * math.factorial(n + 1))


def ratio_radius(s: FracSeries, rel_zero: float = 1e-9) -> float:
    r"""Radius of convergence in ``t`` from successive coefficient ratios.

    Ratios between consecutive nonzero slots are normalised per slot and
    extrapolated linearly in ``1/k`` to ``k -> infinity`` (Domb-Sykes). A
    vanishing intercept means an entire series. The radius :math:`R_w` in
    :math:`w = (t-t_0)^\alpha` converts to :math:`R_w^{1/\alpha}` in ``t``.
    """
    c = np.asarray(s.coeffs, dtype=float)
    nz = np.flatnonzero(c != 0.0)
    if nz.size < 3:
        raise DomainError("ratio test needs at least three nonzero coefficients")
    if nz[-1] < len(c) - 2:
        # at least two trailing zeros: a polynomial padded with a zero tail
        return math.inf
    k = nz[1:].astype(float)
    gaps = np.diff(nz).astype(float)
    r = np.abs(c[nz[1:]] / c[nz[:-1]]) ** (1.0 / gaps)
    take = slice(-min(4, r.size), None)
    x = 1.0 / k[take]
    y = r[take]
    if y.size >= 2 and np.ptp(x) > 0:
        slope, intercept = np.polyfit(x, y, 1)
    else:
        intercept = float(y[-1])
    if intercept <= rel_zero * float(np.max(r)):
        return math.inf
    return (1.0 / intercept) ** (1.0 / s.alpha)
