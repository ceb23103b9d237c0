"""Command-line studies: noise sweeps, invariant verification, problem export.

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 solver precondition failure.  The ``DSMREG_LOG_LEVEL`` environment
variable controls log verbosity.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import time
from dataclasses import dataclass

import numpy as np
import scipy.special

from .dataio import export_problem
from .discrepancy import DiscrepancyConfig, psi, residual_identity, solve_a_delta
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
    gram_shifted_inverse_apply,
    minimal_norm_solution,
    null_projection,
    regularized_solution,
)
from .problems import (
    ProblemInstance,
    fredholm_problem,
    perturb,
    source_condition_problem,
    synthetic_problem,
)
from .quadrature import exp_convolution
from .schedule import Schedule
from .solver import (
    IntegratorConfig,
    integrate_u,
    solve_integral_rule,
    solve_root_rule,
    w_dot_diagnostic,
)

__all__ = [
    "SweepConfig",
    "run_sweep",
    "VerifyReport",
    "CheckResult",
    "run_verify",
    "build_problem",
    "main",
]

log = logging.getLogger(__name__)

_CSV_COLUMNS = (
    "delta",
    "rule",
    "a_delta",
    "t_delta",
    "error",
    "residual",
    "delta_over_sqrt_a",
    "wall_time_ms",
    "status",
)

_ERROR_CODES = {
    NoiseDominatesError: "noise_dominates",
    InconsistentDataError: "inconsistent_data",
    HorizonExceededError: "horizon_exceeded",
    NoSolutionError: "no_solution",
    AccuracyError: "accuracy",
    ConfigurationError: "configuration",
}

VERIFY_SUITES = ("identities", "bounds", "lemmas", "all")


@dataclass(frozen=True)
class SweepConfig:
    """Configuration of a noise-level sweep.

    ``problem_spec`` names a generator, e.g. ``synthetic:n=32`` or
    ``gravity:n=32``.  ``deltas`` must be strictly decreasing.  The noise
    direction is drawn once per sweep (seed + 1) so that the trend over
    deltas is not confounded by direction resampling; everything is
    deterministic under ``seed``.
    """

    problem_spec: str
    deltas: tuple
    c: float
    schedule_spec: str
    rule: str
    seed: int
    output_path: str | None = None
    quad_tolerance: float = 1e-10
    t_max: float | None = None

    def __post_init__(self):
        deltas = tuple(float(d) for d in self.deltas)
        if len(deltas) == 0:
            raise ValueError("deltas must be nonempty")
        if any(d <= 0 for d in deltas):
            raise ValueError("deltas must be positive")
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("deltas must be strictly decreasing")
        if not 1.0 < self.c < 2.0:
            raise ValueError(f"c must lie in (1, 2), got {self.c}")
        if self.rule not in ("integral", "root", "both"):
            raise ValueError(f"rule must be integral, root, or both, got {self.rule!r}")
        object.__setattr__(self, "deltas", deltas)


def build_problem(spec: str, seed: int) -> ProblemInstance:
    """Construct a test problem from a generator spec string.

    ``synthetic:n=N`` builds an N-by-N operator with singular values 1/i^2
    and solution coefficients 1/i; ``gravity:n=N`` and ``heat:n=N`` build
    the smoothing-kernel discretizations.
    """
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"bad problem parameter {item!r}; expected key=value")
            params[key.strip()] = value.strip()
    known = set(params) - {"n"}
    if known:
        raise ValueError(f"unknown problem parameters {sorted(known)}")
    n = int(params.get("n", 32))
    if name == "synthetic":
        i = np.arange(1, n + 1)
        return synthetic_problem(1.0 / i**2, 1.0 / i, n, n, seed)
    if name in ("gravity", "gravity_like"):
        return fredholm_problem("gravity_like", n)
    if name in ("heat", "heat_like"):
        return fredholm_problem("heat_like", n)
    raise ValueError(f"unknown problem generator {name!r}")


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def run_sweep(cfg: SweepConfig, timer=time.perf_counter) -> str:
    """Run the sweep and return the CSV report text (written to
    ``cfg.output_path`` as well when set).

    One row per (delta, rule), sorted by delta descending then rule name.
    Solver failures mark the row's status with an error code and leave the
    numeric fields empty; the sweep continues.  With a fixed ``timer`` the
    output is byte-identical across runs.
    """
    problem = build_problem(cfg.problem_spec, cfg.seed)
    schedule = Schedule.from_spec(cfg.schedule_spec)
    dcfg = DiscrepancyConfig(c=cfg.c)
    icfg = IntegratorConfig(quad_tolerance=cfg.quad_tolerance)
    rules = ("integral", "root") if cfg.rule == "both" else (cfg.rule,)
    rows = []
    for delta in cfg.deltas:
        noisy = perturb(problem, delta, seed=cfg.seed + 1)
        for rule in rules:
            start = timer()
            try:
                if rule == "integral":
                    result = solve_integral_rule(problem, noisy, schedule, dcfg, icfg, cfg.t_max)
                else:
                    result = solve_root_rule(problem, noisy, schedule, dcfg, icfg)
                status = "ok"
            except DsmError as exc:
                result = None
                status = _ERROR_CODES.get(type(exc), "error")
                log.warning("sweep row delta=%g rule=%s failed: %s", delta, rule, exc)
            wall_ms = (timer() - start) * 1e3
            if result is None:
                rows.append((delta, rule, "", "", "", "", "", _fmt(wall_ms), status))
            else:
                rows.append(
                    (
                        delta,
                        rule,
                        _fmt(result.stopping.a_delta),
                        _fmt(result.stopping.t_delta),
                        _fmt(result.error_to_y) if result.error_to_y is not None else "",
                        _fmt(result.residual_norm),
                        _fmt(result.delta_over_sqrt_a),
                        _fmt(wall_ms),
                        status,
                    )
                )
    rows.sort(key=lambda row: (-row[0], row[1]))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(_CSV_COLUMNS)
    for row in rows:
        writer.writerow((_fmt(row[0]),) + row[1:])
    text = buf.getvalue()
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as handle:
            handle.write(text)
    return text


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float
    threshold: float
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def format(self) -> str:
        lines = []
        for check in self.checks:
            tag = "PASS" if check.passed else "FAIL"
            lines.append(
                f"[{tag}] {check.name}: measured {check.margin:.3e} vs "
                f"threshold {check.threshold:.3e} ({check.detail})"
            )
        tag = "PASS" if self.passed else "FAIL"
        lines.append(f"[{tag}] suite={self.suite}: {sum(c.passed for c in self.checks)}"
                     f"/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _random_instance(seed: int) -> ProblemInstance:
    """Seeded instance with a controlled, possibly rank-deficient spectrum."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(6, 13))
    n = int(rng.integers(5, 12))
    k = int(rng.integers(2, min(m, n) + 1))
    sigmas = np.sort(np.exp(rng.uniform(np.log(1e-2), np.log(2.0), k)))[::-1]
    y_coeffs = rng.standard_normal(k)
    return synthetic_problem(sigmas, y_coeffs, m, n, int(rng.integers(0, 2**31)))


def _check(name, margin, threshold, detail, larger_is_worse=True) -> CheckResult:
    passed = margin <= threshold if larger_is_worse else margin >= threshold
    return CheckResult(name, bool(passed), float(margin), float(threshold), detail)


def _identity_checks() -> list:
    worst_identity = 0.0
    worst_commute = 0.0
    worst_recon = 0.0
    worst_idem = 0.0
    worst_pinv = 0.0
    for seed in range(20):
        problem = _random_instance(1000 + seed)
        noisy = perturb(problem, 1e-3, seed=2000 + seed)
        fact = problem.fact
        f_delta = noisy.f_delta
        norm_f = np.linalg.norm(f_delta)
        for a in np.geomspace(1e-8, 1.0, 10):
            lhs, rhs = residual_identity(fact, f_delta, a)
            worst_identity = max(worst_identity, abs(lhs - rhs) / norm_f)
        gram = problem.operator.entries @ problem.operator.entries.T
        for a in fact.gram_norm * np.geomspace(1e-2, 10.0, 7):
            left = problem.operator.apply(regularized_solution(fact, a, f_delta))
            right = gram @ gram_shifted_inverse_apply(fact, a, f_delta)
            worst_commute = max(worst_commute, np.linalg.norm(left - right) / norm_f)
        sv = fact.singular_values
        recon = (fact.left_vectors[:, : sv.size] * sv) @ fact.right_vectors[:, : sv.size].T
        scale = max(1.0, np.linalg.norm(problem.operator.entries))
        worst_recon = max(
            worst_recon, np.linalg.norm(recon - problem.operator.entries) / scale
        )
        pf = null_projection(fact, f_delta)
        worst_idem = max(
            worst_idem, np.linalg.norm(null_projection(fact, pf) - pf) / max(norm_f, 1e-30)
        )
        y_hat = minimal_norm_solution(fact, problem.f)
        worst_pinv = max(
            worst_pinv,
            np.linalg.norm(problem.operator.apply(y_hat) - problem.f)
            / max(np.linalg.norm(problem.f), 1e-30),
        )
    return [
        _check("residual_identity_dual_path", worst_identity, 1e-10,
               "spectral discrepancy vs explicit operator residual, 20 problems x 10 shifts"),
        _check("smoothed_inverse_commutation", worst_commute, 1e-12,
               "A applied after solution-space filter vs gram filter, moderate shifts"),
        _check("factor_reconstruction", worst_recon, 1e-12,
               "Frobenius defect of U diag(s) V^T against the stored matrix"),
        _check("null_projector_idempotent", worst_idem, 1e-12,
               "second application of the projector changes nothing"),
        _check("pseudoinverse_consistency", worst_pinv, 1e-10,
               "minimal-norm solution reproduces consistent data"),
    ]


def _bounds_checks() -> list:
    schedule = Schedule()
    worst_smooth = 0.0
    worst_resolvent = 0.0
    worst_velocity = 0.0
    worst_noise = 0.0
    worst_psi_mono = 0.0
    worst_psi_limit = 0.0
    worst_pnorm = 0.0
    for seed in range(10):
        problem = _random_instance(3000 + seed)
        delta = 1e-2
        noisy = perturb(problem, delta, seed=4000 + seed)
        fact = problem.fact
        f_delta = noisy.f_delta
        norm_f = np.linalg.norm(f_delta)
        for a in np.geomspace(1e-8, 1.0, 25):
            w = regularized_solution(fact, a, f_delta)
            worst_smooth = max(worst_smooth, 2.0 * np.sqrt(a) * np.linalg.norm(w) / norm_f)
            z = gram_shifted_inverse_apply(fact, a, f_delta)
            worst_resolvent = max(worst_resolvent, a * np.linalg.norm(z) / norm_f)
        for t in np.geomspace(0.1, 1e4, 20):
            w_dot_norm, bound = w_dot_diagnostic(schedule, fact, f_delta, t)
            if bound > 0:
                worst_velocity = max(worst_velocity, w_dot_norm / bound)
        noise = f_delta - problem.f
        icfg = IntegratorConfig(quad_tolerance=1e-12)
        for t in (1.0, 5.0, 20.0):
            j2 = integrate_u(schedule, fact, noise, icfg, t)
            cap = (1.0 - np.exp(-t)) * delta / (2.0 * np.sqrt(schedule.value(t)))
            worst_noise = max(worst_noise, np.linalg.norm(j2) / cap)
        grid = np.geomspace(1e-10, 1e2, 200) * fact.gram_norm
        values = np.array([psi(fact, f_delta, a)[0] for a in grid])
        drops = np.diff(values)
        worst_psi_mono = max(worst_psi_mono, float(-drops.min() / values.max()))
        psi_top = psi(fact, f_delta, 1e6 * fact.gram_norm)[0]
        worst_psi_limit = max(worst_psi_limit, abs(psi_top - norm_f**2) / norm_f**2)
        worst_pnorm = max(
            worst_pnorm, np.linalg.norm(null_projection(fact, f_delta)) / delta
        )
    return [
        _check("smoothed_inverse_norm_bound", worst_smooth, 1.0 + 1e-12,
               "2 sqrt(a) ||w|| <= ||f|| across shifts in [1e-8, 1]"),
        _check("gram_resolvent_norm_bound", worst_resolvent, 1.0 + 1e-12,
               "a ||(A A^T + a I)^{-1} g|| <= ||g||"),
        _check("trajectory_velocity_envelope", worst_velocity, 1.0 + 1e-12,
               "||w'(t)|| against (|a'|/a^2) ||A^T f_delta|| at sampled times"),
        _check("noise_smoothing_accumulated", worst_noise, 1.0 + 1e-10,
               "discounted noise integral against (1 - e^-t) delta / (2 sqrt(a(t)))"),
        _check("discrepancy_square_monotone", worst_psi_mono, 1e-13,
               "squared discrepancy nondecreasing on a log grid of shifts"),
        _check("discrepancy_square_saturates", worst_psi_limit, 1e-5,
               "squared discrepancy reaches ||f_delta||^2 at shift 1e6 * ||A||^2"),
        _check("out_of_range_component_small", worst_pnorm, 1.0,
               "||P f_delta|| <= delta on noise-consistent data"),
    ]


def _eventually_decreasing(values: np.ndarray) -> bool:
    diffs = np.diff(values)
    rising = np.where(diffs >= 0)[0]
    start = 0 if rising.size == 0 else int(rising[-1]) + 1
    return start < diffs.size and values[-1] < values[start]


def _lemmas_checks() -> list:
    checks = []
    schedule = Schedule()

    # analytic log-derivative of the squared discrepancy decays along the path
    problem = _random_instance(5001)
    noisy = perturb(problem, 1e-3, seed=5002)
    fact = problem.fact
    beta2 = fact.left_coefficients(noisy.f_delta) ** 2
    eigs = fact.gram_eigenvalues()
    times = np.geomspace(1.0, 1e5, 40)
    a, a_dot = schedule.eval(times)
    num = np.abs(a_dot) * (beta2[None, :] * 2.0 * a[:, None] * eigs[None, :]
                           / (eigs[None, :] + a[:, None]) ** 3).sum(axis=1)
    den = (beta2[None, :] * a[:, None] ** 2 / (eigs[None, :] + a[:, None]) ** 2).sum(axis=1)
    ratio = num / den
    checks.append(
        _check("discrepancy_log_derivative_decay",
               float(ratio[-1]), 1e-3,
               f"|d(h^2)/dt| / h^2 sampled on [1, 1e5]; decreasing={_eventually_decreasing(ratio)}")
    )

    # the discounted average attaches itself to the discrepancy when the
    # out-of-range component keeps the discrepancy from vanishing
    deficient = synthetic_problem(
        np.array([1.0, 0.5, 0.2]), np.array([1.0, -0.5, 0.25]), 8, 6, seed=5003
    )
    noisy_d = perturb(deficient, 5e-2, seed=5004)
    beta2_d = deficient.fact.left_coefficients(noisy_d.f_delta) ** 2
    eigs_d = deficient.fact.gram_eigenvalues()

    def h_of(ts):
        a_ts = schedule.value(np.asarray(ts, dtype=float))
        filt = a_ts[..., None] / (eigs_d + a_ts[..., None])
        return np.sqrt((beta2_d * filt**2).sum(axis=-1))

    horizon = 200.0
    g_val = exp_convolution(h_of, horizon, rel_tol=1e-12)
    ratio_g = g_val / h_of(np.array([horizon]))[0]
    checks.append(
        _check("discounted_average_tracks_discrepancy", abs(ratio_g - 1.0), 0.1,
               f"g(T)/h(T) at T={horizon} on data with an out-of-range component")
    )

    # convergence-rate inequality under a smoothness power of the solution
    gamma = 0.25
    i = np.arange(1, 17)
    base = synthetic_problem(1.0 / i**2, np.zeros(16), 16, 16, seed=5005)
    rng = np.random.default_rng(5006)
    v = rng.standard_normal(16)
    v *= 5.0 / np.linalg.norm(v)
    src = source_condition_problem(base, gamma, v)
    cfg = DiscrepancyConfig(c=1.5, root_tolerance=1e-10)
    p = gamma + 0.5
    c_gamma = p**p * (1.0 - p) ** (1.0 - p)
    worst_rate = 0.0
    worst_max_formula = 0.0
    prev_ratio = np.inf
    ratios_decreasing = True
    for j, delta in enumerate((1e-1, 1e-2, 1e-3, 1e-4)):
        noisy_s = perturb(src, delta, seed=5007 + j)
        a_delta = solve_a_delta(src.fact, noisy_s.f_delta, delta, cfg)
        lhs = (cfg.c - 1.0) * delta / np.sqrt(a_delta)
        rhs = c_gamma * src.source_v_norm * a_delta**gamma
        worst_rate = max(worst_rate, lhs / rhs)
        s_grid = a_delta * np.geomspace(1e-6, 1e6, 200_001)
        brute = np.max(s_grid**p / (s_grid + a_delta))
        closed = c_gamma * a_delta ** (gamma - 0.5)
        worst_max_formula = max(worst_max_formula, abs(brute - closed) / closed)
        ratio_now = delta / np.sqrt(a_delta)
        ratios_decreasing &= ratio_now < prev_ratio
        prev_ratio = ratio_now
    checks.append(
        _check("source_condition_rate_inequality", worst_rate, 1.0,
               "(c-1) delta / sqrt(a) <= c(gamma) ||v|| a^gamma along a noise sweep")
    )
    checks.append(
        _check("rate_constant_max_formula", worst_max_formula, 1e-4,
               "brute-force max of s^(gamma+1/2)/(s+a) vs closed form")
    )
    checks.append(
        _check("noise_amplification_decreasing", 0.0 if ratios_decreasing else 1.0, 0.5,
               "delta / sqrt(a_delta) decreases along the sweep")
    )

    # the discounted average inherits the limit of its forcing
    t_fast = 30.0
    conv_const = exp_convolution(lambda s: np.ones_like(s), t_fast, rel_tol=1e-13)
    conv_exp = exp_convolution(lambda s: np.exp(-s), t_fast, rel_tol=1e-13)
    t_slow = 2500.0
    conv_slow = exp_convolution(lambda s: 1.0 / (1.0 + s), t_slow, rel_tol=1e-13)
    limit_err = max(abs(conv_const - 1.0), abs(conv_exp), abs(conv_slow))
    checks.append(
        _check("discounted_average_inherits_limits", limit_err, 1e-3,
               "forcings 1, e^-s, 1/(1+s); horizons long enough for each decay rate")
    )
    exact_slow = np.exp(-(1.0 + t_fast)) * (
        scipy.special.expi(1.0 + t_fast) - scipy.special.expi(1.0)
    )
    conv_slow_30 = exp_convolution(lambda s: 1.0 / (1.0 + s), t_fast, rel_tol=1e-13)
    kernel_err = max(
        abs(conv_const - (1.0 - np.exp(-t_fast))),
        abs(conv_exp - t_fast * np.exp(-t_fast)),
        abs(conv_slow_30 - exact_slow) / exact_slow,
    )
    checks.append(
        _check("discounted_average_closed_forms", kernel_err, 1e-9,
               "quadrature kernel against exact convolution values at t=30")
    )

    # the shift kills the solution-space filter on range-orthogonal solutions
    problem_y = _random_instance(5008)
    sv = problem_y.fact.singular_values
    coeffs = problem_y.fact.right_vectors[:, : sv.size].T @ problem_y.y
    a_grid = np.geomspace(1.0, 1e-10, 40)
    filt = a_grid[:, None] / (sv[None, :] ** 2 + a_grid[:, None])
    values = np.sqrt(((filt * coeffs[None, :]) ** 2).sum(axis=1))
    decreasing = bool(np.all(np.diff(values) < 1e-18))
    final_rel = float(values[-1] / np.linalg.norm(problem_y.y))
    checks.append(
        _check("solution_filter_vanishes", final_rel if decreasing else np.inf, 1e-4,
               "a ||(A^T A + a I)^{-1} y|| decreasing to zero for y in the row space")
    )

    # stopping shift decreases and stopping time grows as the noise shrinks
    sweep_problem = build_problem("synthetic:n=16", seed=5009)
    schedule_s = Schedule()
    cfg_s = DiscrepancyConfig(c=1.5)
    a_vals = []
    t_vals = []
    for j, delta in enumerate((1e-1, 3e-2, 1e-2, 3e-3, 1e-3)):
        noisy_t = perturb(sweep_problem, delta, seed=5010)
        a_d = solve_a_delta(sweep_problem.fact, noisy_t.f_delta, delta, cfg_s)
        a_vals.append(a_d)
        t_vals.append(schedule_s.inverse_time(a_d))
    trend_ok = bool(np.all(np.diff(a_vals) < 0) and np.all(np.diff(t_vals) > 0))
    checks.append(
        _check("stopping_trends", 0.0 if trend_ok else 1.0, 0.5,
               "a_delta strictly decreasing and t_delta strictly increasing in delta")
    )
    return checks


def run_verify(suite: str = "all") -> VerifyReport:
    """Run an invariant-verification suite and return the report.

    Suites: ``identities`` (dual-path equalities), ``bounds`` (provable
    inequalities), ``lemmas`` (asymptotic diagnostics), ``all``.
    """
    if suite not in VERIFY_SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {VERIFY_SUITES}")
    checks = []
    if suite in ("identities", "all"):
        checks.extend(_identity_checks())
    if suite in ("bounds", "all"):
        checks.extend(_bounds_checks())
    if suite in ("lemmas", "all"):
        checks.extend(_lemmas_checks())
    return VerifyReport(suite=suite, checks=tuple(checks))


def _parse_deltas(text: str) -> tuple:
    items = [item for item in text.split(",") if item.strip()]
    return tuple(float(item) for item in items)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsmreg",
        description="Noise sweeps and invariant verification for regularized "
                    "reconstruction of ill-posed linear systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a noise-level sweep and emit CSV")
    sweep.add_argument("--problem", default="synthetic",
                       help="problem generator: synthetic | gravity | heat")
    sweep.add_argument("--n", type=int, default=32, help="discretization size")
    sweep.add_argument("--deltas", default="1e-1,1e-2,1e-3,1e-4",
                       help="comma-separated noise levels, strictly decreasing")
    sweep.add_argument("--c", type=float, default=1.5, help="noise multiplier in (1, 2)")
    sweep.add_argument("--schedule", default="c0=1,c1=1,b=0.5",
                       help="schedule spec c0=<v>,c1=<v>,b=<v>")
    sweep.add_argument("--rule", default="both", choices=("integral", "root", "both"))
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    sweep.add_argument("--quad-tol", type=float, default=1e-10,
                       help="relative tolerance of the trajectory quadrature")
    sweep.add_argument("--t-max", type=float, default=None,
                       help="search horizon for the integral rule (default: automatic)")

    verify = sub.add_parser("verify", help="run invariant-verification suites")
    verify.add_argument("suite", nargs="?", default="all", choices=VERIFY_SUITES)

    export = sub.add_parser("export-problem",
                            help="write a problem as a MatrixMarket + CSV bundle")
    export.add_argument("--problem", default="synthetic")
    export.add_argument("--n", type=int, default=32)
    export.add_argument("--seed", type=int, default=0)
    export.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("DSMREG_LOG_LEVEL", "WARNING"))
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            report = run_verify(args.suite)
            print(report.format())
            return 0 if report.passed else 1
        if args.command == "sweep":
            cfg = SweepConfig(
                problem_spec=f"{args.problem}:n={args.n}",
                deltas=_parse_deltas(args.deltas),
                c=args.c,
                schedule_spec=args.schedule,
                rule=args.rule,
                seed=args.seed,
                output_path=args.out,
                quad_tolerance=args.quad_tol,
                t_max=args.t_max,
            )
            text = run_sweep(cfg)
            if args.out:
                print(f"wrote {args.out}")
            else:
                sys.stdout.write(text)
            failed = [line for line in text.splitlines()[1:] if line and not line.endswith(",ok")]
            return 3 if failed else 0
        if args.command == "export-problem":
            problem = build_problem(f"{args.problem}:n={args.n}", args.seed)
            paths = export_problem(problem, args.out)
            for name, path in paths.items():
                print(f"{name}: {path}")
            return 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoiseDominatesError, InconsistentDataError, NoSolutionError) as exc:
        print(f"solver precondition failed: {exc}", file=sys.stderr)
        return 3
    except DsmError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return 3
    return 2


if __name__ == "__main__":
    sys.exit(main())
