"""A short walk through derivatives, integrals, series and transforms.

Run with ``python3 demos/calculus_tour.py``.
"""

import math

import numpy as np

import conforma as cf


def section(title):
    print(f"\n== {title}")


section("derivatives")
square = cf.polynomial([0.0, 0.0, 1.0])
for alpha in (0.25, 0.5, 0.75, 1.0):
    # T_alpha t^2 = 2 t^(2-alpha)
    val = cf.left_deriv(square, 0.0, alpha, 4.0)
    print(f"T_{alpha:<4} t^2 at t=4: {val:12.8f}   (2 t^(2-alpha) = {2 * 4 ** (2 - alpha):.8f})")
print("order 1.5 of t^2 at t=4:", cf.higher_left_deriv(square, 0.0, 1.5, 4.0))
print("order 1.5 of t^2 at the base point:", cf.higher_left_deriv(square, 0.0, 1.5, 0.0))
print("two applications of T_0.4 to t^2 at t=1:", cf.sequential_left_deriv(square, 0.0, 0.4, 2, 1.0))

section("integrals undo derivatives")
f = cf.RealFn(lambda t: np.sin(t) + t, 2, (lambda t: np.cos(t) + 1, lambda t: -np.sin(t)),
              vectorized=True)
a, alpha = 0.5, 0.6
for t in (0.7, 1.5, 3.0):
    D = cf.RealFn(lambda x: cf.left_deriv(f, a, alpha, x))
    back = cf.left_integral(D, a, alpha, t)
    print(f"t={t}: I(T f) = {back:.12f}   f(t) - f(a) = {float(f(t) - f(a)):.12f}")

section("power rule for integrals")
for mu, alpha in ((0.0, 0.5), (1.0, 0.5), (1.0, 1.5), (2.5, 0.8)):
    closed = cf.power_integral_closed(mu, alpha, 0.0, "left", 1.0)
    num = cf.left_integral(cf.RealFn(lambda s, m=mu: s ** m), 0.0, alpha, 1.0)
    print(f"mu={mu}, alpha={alpha}: quadrature {num:.12f}  closed form {closed:.12f}")

section("fractional power series")
s = cf.builtin_series("frac_exp", 0.0, 0.5, 12)
exact = cf.closed_form("frac_exp", 0.0, 0.5)
for t in (0.1, 0.5, 1.0):
    err = abs(exact(t) - cf.eval_series(s, t))
    bound = cf.remainder_bound(math.exp(t ** 0.5 / 0.5), 12, 0.5, 0.0, t)
    print(f"t={t}: truncation error {err:.2e} <= bound {bound:.2e}")
geom = cf.builtin_series("frac_geom", 0.0, 0.5, 30)
print("geometric series radius: declared", geom.radius, " ratio test", cf.ratio_radius(geom))

section("fractional Laplace transform")
for kind, params in (("one", {}), ("frac_exp", {"lam": 1.0}), ("frac_sin", {"omega": 2.0}),
                     ("t_pow", {"p": 1.5})):
    alpha, s = 0.5, 3.0
    g = cf.table_function(kind, params, 0.0, alpha)
    num = cf.laplace_numeric(g, cf.TransformQuery(0.0, alpha, s, cf.table_growth(kind, params)))
    print(f"{kind:9s} s={s}: numeric {num:.12f}  table {cf.laplace_table(kind, params, 0.0, alpha, s):.12f}")
