"""Richardson/Ridders extrapolation and one-sided limits."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError


def ridders(quotient: Callable[[float], float], h0: float, levels: int,
            power: int = 2, shrink: float = 2.0) -> tuple[float, float]:
    """Extrapolate ``quotient(h)`` to ``h -> 0``.

    ``quotient(h) = Q + c1 h^power + c2 h^(2 power) + ...`` is assumed
    (``power=1`` for one-sided quotients, ``power=2`` for central ones).
    Returns the table entry with the smallest error estimate, Ridders style.
    """
    fac = shrink ** power
    table = [[quotient(h0)]]
    best, err = table[0][0], math.inf
    h = h0
    for i in range(1, levels + 1):
        h /= shrink
        row = [quotient(h)]
        f = fac
        for j in range(1, i + 1):
            row.append((f * row[j - 1] - table[i - 1][j - 1]) / (f - 1.0))
            f *= fac
            e = max(abs(row[j] - row[j - 1]), abs(row[j] - table[i - 1][j - 1]))
            if e <= err:
                err, best = e, row[j]
        table.append(row)
        if abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * err and i > 2:
            break
    return best, err


def central_derivative(f: Callable[[float], float], t: float, order: int = 1,
                       h0: Optional[float] = None, levels: int = 6,
                       lower: float = -math.inf, upper: float = math.inf) -> float:
    """Classical derivative of order 1 or 2 by extrapolated differences.

    The stencil stays inside ``[lower, upper]``: it shrinks to a quarter of
    the distance to the nearer bound, and is one-sided when ``t`` sits on it.
    """
    if order not in (1, 2):
        raise ValueError("only first and second derivatives are differenced numerically")
    if h0 is None:
        h0 = 0.05 * max(1.0, abs(t))
    room = min(t - lower, upper - t)
    if room > 0.0:
        # near a bound the function may only be smooth on the scale of room
        h0 = min(h0, room / 4.0)
        if order == 1:
            q = lambda h: (f(t + h) - f(t - h)) / (2.0 * h)
        else:
            q = lambda h: (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
        return ridders(q, h0, levels, power=2)[0]
    s = 1.0 if t - lower < upper - t else -1.0
    if order == 1:
        q = lambda h: s * (-3.0 * f(t) + 4.0 * f(t + s * h) - f(t + 2.0 * s * h)) / (2.0 * h)
    else:
        q = lambda h: (2.0 * f(t) - 5.0 * f(t + s * h) + 4.0 * f(t + 2.0 * s * h)
                       - f(t + 3.0 * s * h)) / (h * h)
    return ridders(q, h0, levels, power=1)[0]


def _wynn(seq: list[float]) -> list[float]:
    """Even columns of Wynn's epsilon table, last entry of each."""
    eps_prev = [0.0] * (len(seq) + 1)
    eps_cur = list(seq)
    out = [seq[-1]]
    k = 0
    while len(eps_cur) > 1:
        nxt = []
        for i in range(len(eps_cur) - 1):
            d = eps_cur[i + 1] - eps_cur[i]
            if d == 0.0:
                nxt.append(math.inf)
            else:
                nxt.append(eps_prev[i + 1] + 1.0 / d)
        eps_prev, eps_cur = eps_cur, nxt
        k += 1
        if k % 2 == 0:
            finite = [v for v in eps_cur if math.isfinite(v)]
            if not finite:
                break
            out.append(finite[-1])
    return out


def _best(cols: list[float]) -> float:
    """Column estimate that moved least from its predecessor."""
    if len(cols) < 2:
        return cols[-1]
    moves = [abs(cols[i] - cols[i - 1]) for i in range(1, len(cols))]
    return cols[1 + int(np.argmin(moves))]


def one_sided_limit(g: Callable[[float], float], h0: float = 0.1, ratio: float = 0.5,
                    count: int = 16, rtol: float = 1e-6, atol: float = 1e-8) -> float:
    """``lim_{h -> 0+} g(h)`` from samples along ``h0 * ratio**k``.

    Power-law approach ``L + C h^p`` (any ``p > 0``) is geometric in ``k``,
    which Wynn's epsilon algorithm removes term by term. A growing tail is
    reported as divergence rather than extrapolated to an antilimit.
    """
    vals = [float(g(h0 * ratio ** k)) for k in range(count)]
    if not all(math.isfinite(v) for v in vals):
        raise ConvergenceError("non-finite values on the approach to the endpoint")
    est = _one_sided(vals, rtol, atol)
    # a limit below rounding level of the samples is zero
    return 0.0 if abs(est) <= 64 * np.finfo(float).eps * max(map(abs, vals)) else est


def _one_sided(vals: list[float], rtol: float, atol: float) -> float:
    diffs = np.abs(np.diff(vals))
    tol = atol + rtol * abs(vals[-1])
    tail = diffs[-4:]
    if tail.max() <= 0.1 * tol:
        # already flat to within tolerance; extrapolating noise only hurts
        return vals[-1]
    rho = float(np.median(tail[1:] / np.maximum(tail[:-1], 1e-300)))
    if rho < 1.0 and tail[-1] * rho / (1.0 - rho) <= 0.1 * tol and tail.max() <= tol:
        return vals[-1]
    if np.all(tail[1:] >= tail[:-1] * (1.0 - 1e-9)) and tail[-1] > atol:
        raise ConvergenceError(
            f"endpoint limit diverges: successive differences {tail.tolist()} are not shrinking")
    # extrapolate on two overlapping tail windows; their agreement is the test
    est = _best(_wynn(vals))
    prev = _best(_wynn(vals[:-1]))
    if not (math.isfinite(est) and math.isfinite(prev)) or abs(est - prev) > atol + rtol * abs(est):
        raise ConvergenceError(f"endpoint extrapolants disagree: {prev!r} vs {est!r}")
    return est
