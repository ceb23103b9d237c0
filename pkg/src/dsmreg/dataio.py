"""Reading and writing operators, vectors, and problem bundles.

Matrices are accepted in MatrixMarket text format (array or coordinate) and
in plain comma-separated text with one row per line.  Problem instances are
exported as a MatrixMarket + CSV bundle with a small metadata file.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .problems import ProblemInstance

__all__ = [
    "load_matrix",
    "save_matrix_market",
    "save_csv",
    "load_csv_vector",
    "export_problem",
]


def load_matrix(path) -> np.ndarray:
    """Load a dense matrix from MatrixMarket or comma-separated text.

    The format is detected from the leading ``%%MatrixMarket`` banner.
    """
    path = Path(path)
    with open(path) as handle:
        first = handle.readline()
    if first.startswith("%%MatrixMarket"):
        mat = scipy.io.mmread(path)
        if scipy.sparse.issparse(mat):
            mat = mat.toarray()
        return np.asarray(mat, dtype=float)
    return np.loadtxt(path, delimiter=",", ndmin=2)


def save_matrix_market(path, mat, comment: str = "") -> None:
    """Write a dense matrix in MatrixMarket array format."""
    scipy.io.mmwrite(Path(path), np.atleast_2d(np.asarray(mat, dtype=float)), comment=comment)


def save_csv(path, arr) -> None:
    """Write a vector or matrix as comma-separated text, one row per line."""
    np.savetxt(Path(path), np.atleast_2d(np.asarray(arr, dtype=float)), delimiter=",", fmt="%.17e")


def load_csv_vector(path) -> np.ndarray:
    return np.loadtxt(Path(path), delimiter=",").reshape(-1)


def export_problem(problem: ProblemInstance, out_dir) -> dict[str, Path]:
    """Write a problem as operator.mtx, data.csv, solution.csv, metadata.txt.

    Returns the mapping from bundle member name to written path.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "operator": out_dir / "operator.mtx",
        "data": out_dir / "data.csv",
        "solution": out_dir / "solution.csv",
        "metadata": out_dir / "metadata.txt",
    }
    save_matrix_market(paths["operator"], problem.operator.entries, comment=problem.label)
    save_csv(paths["data"], problem.f)
    save_csv(paths["solution"], problem.y)
    lines = [
        f"label: {problem.label}",
        f"m: {problem.operator.m}",
        f"n: {problem.operator.n}",
        f"rank: {problem.fact.rank}",
        f"rank_tolerance: {problem.fact.rank_tolerance:.17e}",
        f"data_norm: {np.linalg.norm(problem.f):.17e}",
        f"solution_norm: {np.linalg.norm(problem.y):.17e}",
    ]
    if problem.source_gamma is not None:
        lines.append(f"source_gamma: {problem.source_gamma:.17e}")
        lines.append(f"source_v_norm: {problem.source_v_norm:.17e}")
    paths["metadata"].write_text("\n".join(lines) + "\n")
    return paths
