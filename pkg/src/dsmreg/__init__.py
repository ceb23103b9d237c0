"""Stable solution of ill-posed linear systems from noisy data.

Given a dense operator A, exact data f = A y, and an observation f_delta
with ||f_delta - f|| <= delta, naive inversion amplifies the noise without
bound whenever A has tiny singular values.  This package instead evolves
the regularized trajectory

    u'(t) = -u(t) + (A^T A + a(t) I)^{-1} A^T f_delta,

with a decreasing schedule a(t), and reads off the reconstruction at a
stopping time chosen so that the residual matches the noise level.  Two
discrepancy-based stopping rules are provided: the root of

    a ||(A A^T + a I)^{-1} f_delta|| = c * delta,        1 < c < 2,

and the crossing of the exponentially discounted running average of the
same quantity along the schedule.  A verification harness exercises every
provable identity, bound, and limit on seeded test problems, and a small
CLI (``dsmreg sweep | verify | export-problem``) drives noise-sweep
convergence studies with CSV reports.
"""

from .discrepancy import (
    DiscrepancyConfig,
    StoppingRecord,
    h_value,
    integral_stopping_time,
    psi,
    residual_identity,
    solve_a_delta,
)
from .errors import (
    AccuracyError,
    ConfigurationError,
    DsmError,
    HorizonExceededError,
    InconsistentDataError,
    NoiseDominatesError,
    NoSolutionError,
)
from .operators import (
    DenseOperator,
    SpectralFactorization,
    factorize,
    gram_shifted_inverse_apply,
    minimal_norm_solution,
    null_projection,
    regularized_solution,
)
from .problems import (
    NoisyObservation,
    ProblemInstance,
    fredholm_problem,
    perturb,
    source_condition_problem,
    synthetic_problem,
)
from .quadrature import convolution_crossing, exp_convolution, exp_weighted_integral
from .schedule import Schedule, ScheduleConditionReport
from .solver import (
    DsmResult,
    IntegratorConfig,
    integrate_u,
    solve_integral_rule,
    solve_root_rule,
    w_dot_diagnostic,
    w_time_derivative,
    w_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ConfigurationError",
    "DenseOperator",
    "DiscrepancyConfig",
    "DsmError",
    "DsmResult",
    "HorizonExceededError",
    "InconsistentDataError",
    "IntegratorConfig",
    "NoSolutionError",
    "NoiseDominatesError",
    "NoisyObservation",
    "ProblemInstance",
    "Schedule",
    "ScheduleConditionReport",
    "SpectralFactorization",
    "StoppingRecord",
    "convolution_crossing",
    "exp_convolution",
    "exp_weighted_integral",
    "factorize",
    "fredholm_problem",
    "gram_shifted_inverse_apply",
    "h_value",
    "integral_stopping_time",
    "integrate_u",
    "minimal_norm_solution",
    "null_projection",
    "perturb",
    "psi",
    "regularized_solution",
    "residual_identity",
    "solve_a_delta",
    "solve_integral_rule",
    "solve_root_rule",
    "source_condition_problem",
    "synthetic_problem",
    "w_dot_diagnostic",
    "w_time_derivative",
    "w_trajectory",
]
