"""Dense operators, singular factorizations, and spectral filter applications.

The factorization is computed once per operator; every shifted-inverse,
projector, or pseudoinverse application afterwards is an O(m*n) filter
evaluation in the singular basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DenseOperator",
    "SpectralFactorization",
    "factorize",
    "gram_shifted_inverse_apply",
    "regularized_solution",
    "null_projection",
    "minimal_norm_solution",
]

_ORTHO_TOL = 1e-12
_RECON_TOL = 1e-12


def _readonly(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DenseOperator:
    """Real m-by-n matrix realizing the forward map of a linear problem.

    Parameters
    ----------
    entries : (m, n) array_like
        Matrix entries; all must be finite.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] < 1 or entries.shape[1] < 1:
            raise ValueError("operator entries must form a nonempty 2-d matrix")
        if not np.all(np.isfinite(entries)):
            raise ValueError("operator entries must all be finite")
        object.__setattr__(self, "entries", _readonly(entries))

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def apply(self, x) -> np.ndarray:
        """Return A @ x."""
        return self.entries @ np.asarray(x, dtype=float)

    def apply_adjoint(self, g) -> np.ndarray:
        """Return A.T @ g."""
        return self.entries.T @ np.asarray(g, dtype=float)


@dataclass(frozen=True)
class SpectralFactorization:
    """Singular system A = U diag(sigma) V^T of a dense operator.

    ``left_vectors`` holds the full m-by-m orthogonal U and
    ``right_vectors`` the full n-by-n orthogonal V, so that the null spaces
    of A and A^T are spanned by trailing columns.  ``singular_values`` are
    the min(m, n) values in nonincreasing order.  Values below
    ``rank_tolerance`` are treated as exact zeros by the projector and
    pseudoinverse operations.
    """

    operator: DenseOperator
    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray
    rank_tolerance: float

    def __post_init__(self):
        u = _readonly(self.left_vectors)
        sv = _readonly(np.atleast_1d(self.singular_values))
        v = _readonly(self.right_vectors)
        m, n = self.operator.m, self.operator.n
        if u.shape != (m, m) or v.shape != (n, n) or sv.shape != (min(m, n),):
            raise ValueError("factor shapes do not match the operator")
        if np.any(sv < 0) or np.any(np.diff(sv) > 0):
            raise ValueError("singular values must be nonnegative and nonincreasing")
        if self.rank_tolerance < 0:
            raise ValueError("rank_tolerance must be nonnegative")
        for mat, name in ((u, "left"), (v, "right")):
            gram = mat.T @ mat
            if np.max(np.abs(gram - np.eye(mat.shape[0]))) > _ORTHO_TOL:
                raise ValueError(f"{name} singular vectors are not orthogonal")
        recon = (u[:, : sv.size] * sv) @ v[:, : sv.size].T
        scale = max(1.0, float(np.linalg.norm(self.operator.entries)))
        if np.linalg.norm(recon - self.operator.entries) > _RECON_TOL * scale:
            raise ValueError("factors do not reconstruct the operator")
        object.__setattr__(self, "left_vectors", u)
        object.__setattr__(self, "singular_values", sv)
        object.__setattr__(self, "right_vectors", v)

    @property
    def m(self) -> int:
        return self.operator.m

    @property
    def n(self) -> int:
        return self.operator.n

    @property
    def rank(self) -> int:
        """Number of singular values treated as nonzero."""
        sv = self.singular_values
        return int(np.sum((sv >= self.rank_tolerance) & (sv > 0)))

    @property
    def gram_norm(self) -> float:
        """Largest eigenvalue of A A^T (and of A^T A)."""
        return float(self.singular_values[0] ** 2)

    def gram_eigenvalues(self) -> np.ndarray:
        """Eigenvalues of A A^T along the columns of ``left_vectors``."""
        sv = self.singular_values
        return np.concatenate([sv**2, np.zeros(self.m - sv.size)])

    def left_coefficients(self, g) -> np.ndarray:
        """Coordinates of a data-space vector in the left singular basis."""
        return self.left_vectors.T @ np.asarray(g, dtype=float)


def factorize(op, rank_tolerance: float | None = None) -> SpectralFactorization:
    """Compute the singular factorization of a dense operator.

    Parameters
    ----------
    op : DenseOperator or (m, n) array_like
        Operator to factor.  All entries must be finite.
    rank_tolerance : float, optional
        Threshold below which singular values are treated as exact zeros.
        Defaults to 1e-12 times the largest singular value.

    Returns
    -------
    SpectralFactorization
    """
    if not isinstance(op, DenseOperator):
        op = DenseOperator(op)
    u, sv, vt = np.linalg.svd(op.entries, full_matrices=True)
    if rank_tolerance is None:
        rank_tolerance = 1e-12 * float(sv[0])
    elif rank_tolerance < 0:
        raise ValueError("rank_tolerance must be nonnegative")
    return SpectralFactorization(op, u, sv, vt.T, float(rank_tolerance))


def _require_positive_shift(a: float) -> float:
    a = float(a)
    if not a > 0:
        raise ValueError(f"shift a must be positive, got {a}")
    return a


def gram_shifted_inverse_apply(fact: SpectralFactorization, a: float, g) -> np.ndarray:
    """Apply (A A^T + a I)^{-1} to a data-space vector.

    Exact on the left singular basis; the null-space component of ``g`` is
    scaled by 1/a.  Satisfies ||result|| <= ||g|| / a for every a > 0.
    """
    a = _require_positive_shift(a)
    coef = fact.left_coefficients(g)
    return fact.left_vectors @ (coef / (fact.gram_eigenvalues() + a))


def regularized_solution(fact: SpectralFactorization, a: float, f) -> np.ndarray:
    """Apply the smoothed inverse (A^T A + a I)^{-1} A^T to data ``f``.

    Each data coefficient is multiplied by the filter sigma / (sigma^2 + a),
    so ||result|| <= ||f|| / (2 sqrt(a)).
    """
    a = _require_positive_shift(a)
    sv = fact.singular_values
    k = sv.size
    beta = fact.left_vectors[:, :k].T @ np.asarray(f, dtype=float)
    return fact.right_vectors[:, :k] @ (sv * beta / (sv**2 + a))


def null_projection(fact: SpectralFactorization, f) -> np.ndarray:
    """Project a data-space vector onto the null space of A^T.

    Directions whose singular value falls below ``rank_tolerance`` count as
    null.  The projection is idempotent and a contraction.
    """
    f = np.asarray(f, dtype=float)
    ur = fact.left_vectors[:, : fact.rank]
    return f - ur @ (ur.T @ f)


def minimal_norm_solution(fact: SpectralFactorization, f) -> np.ndarray:
    """Minimal-norm least-squares solution of A u = f.

    For ``f`` in the range of A this is the unique solution orthogonal to
    the null space of A; otherwise it solves the least-squares problem.
    """
    f = np.asarray(f, dtype=float)
    r = fact.rank
    beta = fact.left_vectors[:, :r].T @ f
    return fact.right_vectors[:, :r] @ (beta / fact.singular_values[:r])
