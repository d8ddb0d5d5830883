import math

import numpy as np
import pytest

from conforma import RealFn, polynomial


def sin_shifted(shift=0.3):
    """sin(t + shift) with four derivative hooks."""
    s = shift
    return RealFn(lambda t: np.sin(t + s), 4,
                  (lambda t: np.cos(t + s), lambda t: -np.sin(t + s),
                   lambda t: -np.cos(t + s), lambda t: np.sin(t + s)),
                  vectorized=True)


def exp_fn(rate=1.0):
    r = rate
    return RealFn(lambda t: np.exp(r * t), 4,
                  tuple((lambda t, k=k: r ** k * np.exp(r * t)) for k in range(1, 5)),
                  vectorized=True)


def frac_exp(a, alpha, lam=1.0):
    """exp(lam (t-a)^alpha / alpha) with its first classical derivative."""
    def f(t):
        return np.exp(lam * np.maximum(np.asarray(t, dtype=float) - a, 0.0) ** alpha / alpha)

    def d1(t):
        d = np.asarray(t, dtype=float) - a
        return lam * d ** (alpha - 1.0) * f(t)

    return RealFn(f, 1, (d1,), vectorized=True)


#: smooth test functions used across suites
SMOOTH = {
    "cubic": polynomial([1.0, -2.0, 0.5, 0.3]),
    "quadratic": polynomial([0.2, 0.0, 1.0]),
    "sin": sin_shifted(),
    "exp": exp_fn(0.7),
}


@pytest.fixture(params=sorted(SMOOTH))
def smooth_fn(request):
    return SMOOTH[request.param]


def rel_err(x, ref, floor=1.0):
    return abs(x - ref) / max(abs(ref), floor)


# -- acceptance summary -----------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    props = dict(report.user_properties)
    crit = props.get("criterion")
    if crit is None:
        return
    n, title = crit
    entry = _CRITERIA.setdefault(n, {"title": title, "ok": True, "worst": None, "notes": []})
    entry["ok"] = entry["ok"] and report.passed
    if "worst" in props:
        w = props["worst"]
        entry["worst"] = w if entry["worst"] is None else max(entry["worst"], w)
    if props.get("detail"):
        entry["notes"].append(props["detail"])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        parts = ([f"worst {e['worst']:.1e}"] if e["worst"] is not None else []) + e["notes"]
        line = f"criterion {n:>2} {'PASS' if e['ok'] else 'FAIL'}  {e['title']}"
        if parts:
            line += "  [" + "; ".join(parts) + "]"
        terminalreporter.write_line(line)
