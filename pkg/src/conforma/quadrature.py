"""Globally adaptive panel quadrature.

Each panel is integrated with an ``m``-point Gauss-Legendre rule on the whole
panel and on its two halves; the difference of the two levels is the panel's
error estimate. The panel with the largest estimate is bisected until the
total estimate meets the tolerance. Integrands receive an array of nodes and
return an array of values (optionally with a trailing vector axis).
"""

from __future__ import annotations

import functools
import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DEFAULT_QUAD, QuadratureSpec
from .errors import AccuracyError


@functools.lru_cache(maxsize=None)
def _gauss(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    return x, w


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    panels: int


def _rule(g, lo, hi, x, w):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    vals = np.asarray(g(mid + half * x), dtype=float)
    return half * np.tensordot(w, vals, axes=(0, 0))


class _Panel:
    __slots__ = ("lo", "hi", "left", "right", "value", "error")

    def __init__(self, g, lo, hi, coarse, x, w):
        mid = 0.5 * (lo + hi)
        self.lo, self.hi = lo, hi
        self.left = _rule(g, lo, mid, x, w)
        self.right = _rule(g, mid, hi, x, w)
        self.value = self.left + self.right
        self.error = float(np.max(np.abs(self.value - coarse)))


def integrate(g: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
              spec: QuadratureSpec = DEFAULT_QUAD, breakpoints=(),
              raise_on_failure: bool = True) -> QuadResult:
    """Integrate ``g`` over ``[lo, hi]`` (``lo <= hi``) to ``spec`` tolerances.

    Returns the refined sum with the summed two-level error estimate. The
    summation order depends only on the panel tree, so results are
    deterministic.
    """
    if hi < lo:
        raise ValueError("integrate expects lo <= hi")
    if hi == lo:
        probe = np.asarray(g(np.array([lo])), dtype=float)
        return QuadResult(np.zeros(probe.shape[1:]) if probe.ndim > 1 else 0.0, 0.0, 0)
    x, w = _gauss(spec.nodes_per_panel)
    edges = [lo] + sorted(b for b in breakpoints if lo < b < hi) + [hi]
    heap = []
    counter = 0
    for p, q in zip(edges[:-1], edges[1:]):
        panel = _Panel(g, p, q, _rule(g, p, q, x, w), x, w)
        heap.append((-panel.error, counter, panel))
        counter += 1
    heapq.heapify(heap)
    n_panels = len(heap)

    def totals():
        ordered = sorted((item[2] for item in heap), key=lambda pn: pn.lo)
        value = functools.reduce(lambda acc, pn: acc + pn.value, ordered[1:], ordered[0].value)
        return value, math.fsum(pn.error for pn in ordered)

    value, err = totals()
    while True:
        scale = float(np.max(np.abs(value)))
        if err <= max(spec.abs_tol, spec.rel_tol * scale):
            break
        if n_panels >= spec.max_subdiv:
            if raise_on_failure:
                value, err = totals()
                raise AccuracyError(
                    f"quadrature on [{lo}, {hi}] stalled at error estimate {err:.3e} "
                    f"after {n_panels} panels", value, err)
            break
        _, _, worst = heapq.heappop(heap)
        mid = 0.5 * (worst.lo + worst.hi)
        if not (worst.lo < mid < worst.hi):
            # cannot split further in floating point; freeze the panel
            err -= worst.error
            worst.error = 0.0
            heapq.heappush(heap, (0.0, counter, worst))
            counter += 1
            continue
        value = value - worst.value
        err -= worst.error
        for p, q, coarse in ((worst.lo, mid, worst.left), (mid, worst.hi, worst.right)):
            child = _Panel(g, p, q, coarse, x, w)
            heapq.heappush(heap, (-child.error, counter, child))
            counter += 1
            value = value + child.value
            err += child.error
        n_panels += 1
    value, err = totals()
    if np.ndim(value) == 0:
        value = float(value)
    return QuadResult(value, err, n_panels)
