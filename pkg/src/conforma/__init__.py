"""Conformable fractional calculus: derivatives, integrals, series, transforms and ODEs."""

from .core import (
    DEFAULT_QUAD, FracOrder, Interval, QuadratureSpec, RealFn, as_fn, as_order,
    constant, make_order, polynomial,
)
from .derivatives import (
    LIMIT_QUOTIENT, REDUCTION, DerivBackend, chain_deriv, classical_derivative_fn,
    higher_left_deriv, higher_right_deriv, left_deriv, right_deriv,
    sequential_left_deriv, sequential_right_deriv,
)
from .errors import (
    AccuracyError, ConformaError, ConvergenceError, DivergenceError, DomainError,
    NumericFailure, PreconditionError, SingularityError,
)
from .integrals import (
    WeightedIntegral, gamma_ratio, left_integral, power_integral_closed, q_reflect,
    right_integral, rl_integral, semigroup_residual,
)
from .laplace import (
    TransformQuery, laplace_numeric, laplace_of_deriv, laplace_table, table_function,
    table_growth, weighted_form,
)
from .ode import (
    GronwallInstance, GronwallReport, LinearFracSystem, frac_matrix_exp, gronwall_check,
    picard_iterates, picard_partial, picard_poly, residual, scaled_time, solve_scalar,
    solve_system,
)
from .quadrature import QuadResult, integrate
from .series import (
    FracSeries, builtin_series, closed_form, eval_series, ratio_radius, remainder_bound,
    taylor_coeffs,
)

__version__ = "0.1.0"
