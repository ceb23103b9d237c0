"""Reproducible ill-posed test instances with known minimal-norm solutions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import DenseOperator, SpectralFactorization, factorize

__all__ = [
    "ProblemInstance",
    "NoisyObservation",
    "synthetic_problem",
    "fredholm_problem",
    "perturb",
    "source_condition_problem",
]

GRAVITY_DEPTH = 0.25
HEAT_WIDTH = 0.05

_CONSISTENCY_TOL = 1e-12


def _readonly(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ProblemInstance:
    """Operator, exact data f = A y, and the minimal-norm solution y.

    ``source_gamma`` and ``source_v_norm`` are set when the solution was
    manufactured through a smoothness power of A^T A, for use by the rate
    checks.
    """

    operator: DenseOperator
    fact: SpectralFactorization
    f: np.ndarray
    y: np.ndarray
    label: str
    source_gamma: float | None = None
    source_v_norm: float | None = None

    def __post_init__(self):
        f = _readonly(self.f)
        y = _readonly(self.y)
        if f.shape != (self.operator.m,) or y.shape != (self.operator.n,):
            raise ValueError("data/solution shapes do not match the operator")
        norm_f = float(np.linalg.norm(f))
        if np.linalg.norm(self.operator.apply(y) - f) > _CONSISTENCY_TOL * max(norm_f, 1e-30):
            raise ValueError("data is not consistent with the stored solution")
        norm_y = float(np.linalg.norm(y))
        null_part = y - _range_projection(self.fact, y)
        if np.linalg.norm(null_part) > _CONSISTENCY_TOL * max(norm_y, 1e-30):
            raise ValueError("solution has a null-space component")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "y", y)


def _range_projection(fact: SpectralFactorization, y: np.ndarray) -> np.ndarray:
    """Project a solution-space vector onto the row space of the operator."""
    vr = fact.right_vectors[:, : fact.rank]
    return vr @ (vr.T @ y)


@dataclass(frozen=True)
class NoisyObservation:
    """Noisy data with ||f_delta - f|| equal to delta exactly."""

    f_delta: np.ndarray
    delta: float
    seed: int

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        object.__setattr__(self, "f_delta", _readonly(self.f_delta))


def synthetic_problem(sigmas, y_coeffs, m: int, n: int, seed: int | None) -> ProblemInstance:
    """Operator with prescribed singular values and a known solution.

    A = U diag(sigmas) V^T with seeded random orthogonal factors (identity
    factors when ``seed`` is None), y expanded in the leading right singular
    vectors with the given coefficients, and f = A y.

    Parameters
    ----------
    sigmas : sequence of positive floats, nonincreasing
    y_coeffs : sequence of floats, one per singular value
    m, n : int
        Data and solution space dimensions; len(sigmas) <= min(m, n).
    seed : int or None
        Seed for the orthogonal factors; None uses identity factors.
    """
    sigmas = np.asarray(sigmas, dtype=float)
    y_coeffs = np.asarray(y_coeffs, dtype=float)
    k = sigmas.size
    if k > min(m, n) or y_coeffs.size != k:
        raise ValueError("dimension mismatch between sigmas, y_coeffs, and (m, n)")
    if np.any(sigmas <= 0) or np.any(np.diff(sigmas) > 0):
        raise ValueError("sigmas must be positive and nonincreasing")
    if seed is None:
        u = np.eye(m)
        v = np.eye(n)
    else:
        rng = np.random.default_rng(seed)
        u = _haar_orthogonal(m, rng)
        v = _haar_orthogonal(n, rng)
    a = (u[:, :k] * sigmas) @ v[:, :k].T
    y = v[:, :k] @ y_coeffs
    f = a @ y
    label = f"synthetic(m={m},n={n},k={k},seed={seed})"
    return ProblemInstance(DenseOperator(a), factorize(a), f, y, label)


def _haar_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def fredholm_problem(kind: str, n: int) -> ProblemInstance:
    """Midpoint-rule discretization of a smoothing integral operator on [0, 1].

    ``gravity_like`` uses the kernel d / (d^2 + (x - t)^2)^(3/2) with
    d = 0.25 (severely ill-posed); ``heat_like`` uses the Gaussian kernel
    exp(-(x - t)^2 / (4 kappa)) / sqrt(4 pi kappa) with kappa = 0.05.  The
    solution is sin(pi t) sampled at the nodes and projected onto the row
    space, since the discretization can introduce a numerical null space.
    """
    if n < 8:
        raise ValueError("need at least 8 quadrature nodes")
    nodes = (np.arange(n) + 0.5) / n
    diff = nodes[:, None] - nodes[None, :]
    if kind == "gravity_like":
        d = GRAVITY_DEPTH
        kernel = d / (d**2 + diff**2) ** 1.5
    elif kind == "heat_like":
        kappa = HEAT_WIDTH
        kernel = np.exp(-(diff**2) / (4.0 * kappa)) / np.sqrt(4.0 * np.pi * kappa)
    else:
        raise ValueError(f"unknown problem kind {kind!r}")
    a = kernel / n
    fact = factorize(a)
    y = _range_projection(fact, np.sin(np.pi * nodes))
    f = a @ y
    return ProblemInstance(DenseOperator(a), fact, f, y, label=f"{kind}(n={n})")


def perturb(problem: ProblemInstance, delta: float, seed: int) -> NoisyObservation:
    """Add noise of exact magnitude ``delta`` in a seeded random direction."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    rng = np.random.default_rng(seed)
    direction = rng.standard_normal(problem.operator.m)
    direction /= np.linalg.norm(direction)
    return NoisyObservation(problem.f + delta * direction, float(delta), int(seed))


def source_condition_problem(base: ProblemInstance, gamma: float, v) -> ProblemInstance:
    """Replace the solution of ``base`` by a smoothness-power image.

    The new solution is y = (A^T A)^gamma v expanded over the nonzero
    spectrum (null components of v are dropped), with f = A y.  The
    exponent and ||v|| are stored for the convergence-rate checks.
    """
    if not 0.0 < gamma < 0.5:
        raise ValueError(f"gamma must lie in (0, 1/2), got {gamma}")
    v = np.asarray(v, dtype=float)
    if v.shape != (base.operator.n,):
        raise ValueError("v must live in the solution space")
    fact = base.fact
    r = fact.rank
    vr = fact.right_vectors[:, :r]
    coeffs = vr.T @ v
    y = vr @ ((fact.singular_values[:r] ** 2) ** gamma * coeffs)
    f = base.operator.apply(y)
    return ProblemInstance(
        base.operator,
        fact,
        f,
        y,
        label=f"{base.label}+source(gamma={gamma})",
        source_gamma=float(gamma),
        source_v_norm=float(np.linalg.norm(v)),
    )
