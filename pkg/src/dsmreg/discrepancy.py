"""Discrepancy functionals and the two stopping rules built on them.

The central scalar object is the discrepancy

    d(a) = a * ||(A A^T + a I)^{-1} f_delta||,

a continuous nondecreasing function of the shift that runs from the norm of
the out-of-range data component (a -> 0) up to ||f_delta|| (a -> infinity).
The root rule solves d(a) = c * delta directly; the integral rule composes
d with a decreasing schedule a(t) and stops when the exponentially
discounted running average of h(t) = d(a(t)) crosses c * delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    HorizonExceededError,
    InconsistentDataError,
    NoiseDominatesError,
)
from .operators import SpectralFactorization, null_projection, regularized_solution
from .quadrature import convolution_crossing
from .schedule import Schedule

__all__ = [
    "DiscrepancyConfig",
    "StoppingRecord",
    "psi",
    "solve_a_delta",
    "h_value",
    "integral_stopping_time",
    "residual_identity",
]


@dataclass(frozen=True)
class DiscrepancyConfig:
    """Parameters of the discrepancy equations.

    ``c`` is the noise multiplier, constrained to (1, 2); the target
    discrepancy level is c * delta.  ``root_tolerance`` is relative and
    applies to the achieved discrepancy value.
    """

    c: float = 1.5
    root_tolerance: float = 1e-8
    max_bisection_steps: int = 200

    def __post_init__(self):
        if not 1.0 < self.c < 2.0:
            raise ValueError(f"c must lie in (1, 2), got {self.c}")
        if not self.root_tolerance > 0:
            raise ValueError("root_tolerance must be positive")
        if self.max_bisection_steps < 1:
            raise ValueError("max_bisection_steps must be positive")


@dataclass(frozen=True)
class StoppingRecord:
    """Outcome of a stopping rule: the time, the shift, and the level hit."""

    rule: str
    t_delta: float
    a_delta: float
    achieved_discrepancy: float

    def __post_init__(self):
        if self.rule not in ("integral", "root"):
            raise ValueError(f"unknown stopping rule {self.rule!r}")


def _left_coefficients_squared(fact: SpectralFactorization, f_delta) -> np.ndarray:
    return fact.left_coefficients(f_delta) ** 2


def _discrepancy_from_parts(beta2: np.ndarray, eigs: np.ndarray, a):
    """d(a) = sqrt(sum_i beta_i^2 * (a / (s_i + a))^2), vectorized in a."""
    a_arr = np.asarray(a, dtype=float)
    filt = a_arr[..., None] / (eigs + a_arr[..., None])
    out = np.sqrt((beta2 * filt**2).sum(axis=-1))
    return out if out.ndim else float(out)


def _discrepancy(fact: SpectralFactorization, f_delta, a):
    return _discrepancy_from_parts(
        _left_coefficients_squared(fact, f_delta), fact.gram_eigenvalues(), a
    )


def psi(fact: SpectralFactorization, f_delta, a: float):
    """Squared discrepancy and discrepancy at shift ``a``.

    Returns
    -------
    (psi_value, discrepancy) : tuple of float
        psi_value = sum_i a^2 beta_i^2 / (s_i + a)^2 over the eigenvalues
        s_i of A A^T with data coefficients beta_i, and
        discrepancy = sqrt(psi_value) = a * ||(A A^T + a I)^{-1} f_delta||.
    """
    if not a > 0:
        raise ValueError(f"shift a must be positive, got {a}")
    d = _discrepancy(fact, f_delta, float(a))
    return d**2, d


def solve_a_delta(
    fact: SpectralFactorization, f_delta, delta: float, cfg: DiscrepancyConfig | None = None
) -> float:
    """Solve d(a) = c * delta for the shift a.

    The map a -> d(a) is continuous and nondecreasing from the out-of-range
    component norm up to ||f_delta||, so a root exists and is unique
    whenever ||P f_delta|| < c * delta < ||f_delta||.  The root is found by
    geometric bracketing followed by bisection in log(a).

    Raises
    ------
    NoiseDominatesError
        If ||f_delta|| <= c * delta (stop; the defensible output is u = 0).
    InconsistentDataError
        If the out-of-range component reaches c * delta.
    """
    cfg = cfg or DiscrepancyConfig()
    if not delta > 0:
        raise ValueError("delta must be positive")
    f_delta = np.asarray(f_delta, dtype=float)
    level = cfg.c * delta
    norm_f = float(np.linalg.norm(f_delta))
    if norm_f <= level:
        raise NoiseDominatesError(
            f"||f_delta||={norm_f} does not exceed c*delta={level}; "
            "noise dominates the data and the defensible reconstruction is u = 0"
        )
    p_norm = float(np.linalg.norm(null_projection(fact, f_delta)))
    if p_norm >= level:
        raise InconsistentDataError(
            f"out-of-range data component {p_norm} reaches c*delta={level}; "
            "the discrepancy equation has no root"
        )
    beta2 = _left_coefficients_squared(fact, f_delta)
    eigs = fact.gram_eigenvalues()

    def disc(a):
        return _discrepancy_from_parts(beta2, eigs, a)

    s1 = fact.gram_norm
    a_lo = max(fact.rank_tolerance * s1, 1e-300)
    a_hi = max(1e6 * s1, a_lo * 16.0)
    for _ in range(2000):
        if disc(a_lo) <= level:
            break
        a_lo /= 16.0
    else:
        raise AccuracyError("failed to bracket the discrepancy root from below")
    for _ in range(2000):
        if disc(a_hi) >= level:
            break
        a_hi *= 16.0
    else:
        raise AccuracyError("failed to bracket the discrepancy root from above")
    tol = cfg.root_tolerance * level
    mid = np.sqrt(a_lo * a_hi)
    for _ in range(cfg.max_bisection_steps):
        mid = np.sqrt(a_lo * a_hi)
        value = disc(mid)
        if abs(value - level) <= tol:
            return float(mid)
        if value > level:
            a_hi = mid
        else:
            a_lo = mid
    raise AccuracyError(
        f"bisection did not reach the discrepancy tolerance within "
        f"{cfg.max_bisection_steps} steps"
    )


def h_value(schedule: Schedule, fact: SpectralFactorization, f_delta, t: float) -> float:
    """Discrepancy along the schedule: h(t) = d(a(t)).

    Nonincreasing in t because d is nondecreasing in the shift and the
    schedule decreases.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    return float(_discrepancy(fact, f_delta, schedule.value(float(t))))


def integral_stopping_time(
    schedule: Schedule,
    fact: SpectralFactorization,
    f_delta,
    delta: float,
    cfg: DiscrepancyConfig | None = None,
    t_max: float | None = None,
) -> StoppingRecord:
    """Stopping time where the discounted discrepancy average hits c*delta.

    Advances g' = -g + h(t), g(0) = 0, by exact variation-of-constants steps
    and returns the crossing of c * delta appropriate to the tail behaviour
    of h (see ``convolution_crossing``).  When ``t_max`` is None a horizon
    is derived from the root rule, which the falling-branch crossing
    exceeds by at most a few time units.

    Raises
    ------
    NoiseDominatesError
        If ||f_delta|| <= c * delta.
    HorizonExceededError
        If h(0) <= c * delta (the discounted average g stays below h(0)
        forever, so no crossing can exist; start the schedule larger by
        increasing c0) or if no crossing occurs before ``t_max``.
    """
    cfg = cfg or DiscrepancyConfig()
    if not delta > 0:
        raise ValueError("delta must be positive")
    f_delta = np.asarray(f_delta, dtype=float)
    level = cfg.c * delta
    norm_f = float(np.linalg.norm(f_delta))
    if norm_f <= level:
        raise NoiseDominatesError(
            f"||f_delta||={norm_f} does not exceed c*delta={level}; "
            "noise dominates the data and the defensible reconstruction is u = 0"
        )
    beta2 = _left_coefficients_squared(fact, f_delta)
    eigs = fact.gram_eigenvalues()
    h0 = _discrepancy_from_parts(beta2, eigs, schedule.value(0.0))
    if h0 <= level:
        raise HorizonExceededError(
            f"initial discrepancy h(0)={h0} does not exceed c*delta={level}, so the "
            "discounted discrepancy can never reach that level; increase c0 so the "
            "schedule starts larger"
        )
    p_norm = float(np.linalg.norm(null_projection(fact, f_delta)))
    if t_max is None:
        if p_norm < level:
            a_root = solve_a_delta(fact, f_delta, delta, cfg)
            t_root = schedule.inverse_time(a_root)
            t_max = max(100.0, 1e3 * (t_root + 1.0))
        else:
            t_max = 1e4

    def h_of(ts):
        return _discrepancy_from_parts(beta2, eigs, schedule.value(np.asarray(ts, float)))

    crossing = convolution_crossing(
        h_of,
        level,
        t_max,
        q_limit=p_norm,
        value_rtol=cfg.root_tolerance,
        quad_rtol=max(1e-14, min(1e-12, 0.01 * cfg.root_tolerance)),
    )
    t_delta = crossing.t_cross
    return StoppingRecord(
        rule="integral",
        t_delta=t_delta,
        a_delta=schedule.value(t_delta),
        achieved_discrepancy=crossing.value,
    )


def residual_identity(fact: SpectralFactorization, f_delta, a: float):
    """Evaluate both sides of the residual identity at shift ``a``.

    The discrepancy equals the residual of the smoothed solution:

        a ||(A A^T + a I)^{-1} f_delta|| = ||A w - f_delta||,
        w = (A^T A + a I)^{-1} A^T f_delta.

    The left side is computed spectrally, the right side by building w and
    explicitly applying the stored operator matrix.

    Returns
    -------
    (lhs, rhs) : tuple of float
    """
    if not a > 0:
        raise ValueError(f"shift a must be positive, got {a}")
    f_delta = np.asarray(f_delta, dtype=float)
    lhs = float(_discrepancy(fact, f_delta, float(a)))
    w = regularized_solution(fact, a, f_delta)
    rhs = float(np.linalg.norm(fact.operator.apply(w) - f_delta))
    return lhs, rhs
