"""Linear fractional equations: exact solution, successive approximation,
systems and the Gronwall bound.

Run with ``python3 demos/ode_tour.py``.
"""

import math

import numpy as np

import conforma as cf

lam, y0, a, alpha = -1.0, 2.0, 0.0, 0.5

print("successive approximations of T y = lambda y at t = 1")
exact = cf.solve_scalar(lam, y0, a, alpha, 1.0)
for n in (1, 2, 4, 8, 16, 25):
    approx = cf.picard_partial(lam, y0, a, alpha, n, 1.0)
    print(f"  n={n:2d}: {approx: .15f}   error {abs(approx - exact):.2e}")

print("\nthe same iterates built by repeated quadrature")
its = cf.picard_iterates(lam, y0, a, alpha, 3)
for t in (0.25, 1.0):
    print(f"  t={t}: quadrature {its[3](t):.12f}  closed form "
          f"{cf.picard_partial(lam, y0, a, alpha, 3, t):.12f}")

print("\na forced 2x2 system and its residual")
A = np.array([[0.0, 1.0], [-1.0, -0.2]])
sysm = cf.LinearFracSystem(A, [1.0, 0.0], 0.0, 0.7, lambda t: np.array([0.0, math.cos(t)]))
for t in (0.5, 1.0, 2.0):
    y = cf.solve_system(sysm, t)
    r = cf.residual(sysm, lambda s: cf.solve_system(sysm, s), t)
    print(f"  t={t}: y = {y}, max |residual| = {np.max(np.abs(r)):.1e}")

print("\nfundamental matrices multiply in the scaled time u = (t-a)^alpha/alpha")
t_of = lambda u: (0.7 * u) ** (1 / 0.7)
E1, E2 = cf.frac_matrix_exp(A, 0.0, 0.7, t_of(0.4)), cf.frac_matrix_exp(A, 0.0, 0.7, t_of(0.9))
print("  max |E(0.4) E(0.9) - E(1.3)| =",
      np.max(np.abs(E1 @ E2 - cf.frac_matrix_exp(A, 0.0, 0.7, t_of(1.3)))))

print("\nGronwall bound")
delta, k = 1.0, 0.5
cases = {
    "saturating": cf.RealFn(lambda t: delta * math.exp(k * t ** 0.5 / 0.5)),
    "bounded": cf.RealFn(lambda t: delta * (1 + 0.5 * (1 - math.exp(-t ** 0.5 / 0.5)))),
    "too fast": cf.RealFn(lambda t: 1 + 10 * t),
}
for name, r in cases.items():
    rep = cf.gronwall_check(cf.GronwallInstance(r, delta, k, 0.0, 2.0, 0.5), 9)
    print(f"  {name:10s}: hypothesis held at {int(rep.hypothesis_held.sum())}/9 points, "
          f"bound violations {rep.violations.size}, min slack {rep.conclusion_slack.min():.2e}")
