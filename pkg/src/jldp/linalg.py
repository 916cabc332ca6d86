"""Dense SVD, Moore-Penrose pseudo-inverse and pseudo-determinant.

Matrices are plain 2-d float64 numpy arrays. Every other module goes through
:func:`as_matrix` at its boundary so NaN/Inf never leak into a release.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IngestionError, InvalidMatrixError, SvdConvergenceError

# Singular values at or below max(RANK_RTOL * s_max, RANK_ATOL) count as zero.
RANK_RTOL = 1e-10
RANK_ATOL = 1e-12


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate and return ``m`` as a finite 2-d float64 array."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidMatrixError(f"{name} must be a non-empty 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrixError(f"{name} contains NaN or Inf")
    return a


def rank_tolerance(singular_values: np.ndarray) -> float:
    smax = float(singular_values[0]) if singular_values.size else 0.0
    return max(RANK_RTOL * smax, RANK_ATOL)


@dataclass(frozen=True)
class SvdFactors:
    """``m = u @ diag(singular_values) @ v.T`` with full square ``u`` and ``v``."""

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray
    numeric_rank: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape[0], self.v.shape[0]

    @property
    def nonzero(self) -> np.ndarray:
        return self.singular_values[: self.numeric_rank]

    def reconstruct(self) -> np.ndarray:
        m, n = self.shape
        k = len(self.singular_values)
        return (self.u[:, :k] * self.singular_values) @ self.v[:, :k].T


def _is_symmetric(a: np.ndarray) -> bool:
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(float(np.max(np.abs(a))), 1.0)
    return bool(np.allclose(a, a.T, rtol=0.0, atol=1e-14 * scale))


def svd(m) -> SvdFactors:
    """Full SVD with singular values sorted in descending order.

    Symmetric input goes through ``eigh``; the singular values are then the
    absolute eigenvalues and ``v`` carries the eigenvalue signs.
    """
    a = as_matrix(m)
    try:
        if _is_symmetric(a):
            sym = 0.5 * (a + a.T)
            evals, evecs = np.linalg.eigh(sym)
            order = np.argsort(-np.abs(evals), kind="stable")
            evals = evals[order]
            u = evecs[:, order]
            s = np.abs(evals)
            signs = np.where(evals < 0, -1.0, 1.0)
            v = u * signs
        else:
            u, s, vt = np.linalg.svd(a, full_matrices=True)
            v = vt.T
    except np.linalg.LinAlgError as exc:
        raise SvdConvergenceError(f"SVD did not converge: {exc}") from exc
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise SvdConvergenceError("SVD produced non-finite factors")
    tol = rank_tolerance(s)
    rank = int(np.count_nonzero(s > tol))
    return SvdFactors(u=u, singular_values=s, v=v, numeric_rank=rank)


def pseudo_inverse(f: SvdFactors) -> np.ndarray:
    """``V diag(1/s_i for nonzero s_i) U^T``; zero singular values stay zero."""
    k = f.numeric_rank
    if k == 0:
        m, n = f.shape
        return np.zeros((n, m))
    return (f.v[:, :k] / f.nonzero) @ f.u[:, :k].T


def log_pseudo_determinant(f: SvdFactors) -> float:
    """Natural log of the pseudo-determinant (0.0 for the zero matrix)."""
    return float(np.sum(np.log(f.nonzero)))


def pseudo_determinant(f: SvdFactors) -> float:
    """Product of nonzero singular values; 1 for the zero matrix.

    Overflows to ``inf`` for large spectra; use :func:`log_pseudo_determinant`
    in density computations.
    """
    return math.exp(log_pseudo_determinant(f))


def pinv(m) -> np.ndarray:
    return pseudo_inverse(svd(m))


def sym_eigvalsh(m) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, ascending."""
    a = as_matrix(m)
    return np.linalg.eigvalsh(0.5 * (a + a.T))


# -- CSV ------------------------------------------------------------------

def format_value(x: float) -> str:
    return f"{x:.17g}"


def matrix_to_csv(m, header: str | None = None) -> str:
    a = as_matrix(m)
    buf = io.StringIO()
    if header is not None:
        buf.write(f"# {header}\n")
    for row in a:
        buf.write(",".join(format_value(float(x)) for x in row))
        buf.write("\n")
    return buf.getvalue()


def write_matrix_csv(path, m, header: str | None = None) -> None:
    Path(path).write_text(matrix_to_csv(m, header=header))


def parse_matrix_csv(text: str) -> np.ndarray:
    """Parse comma-separated rows; ``#`` lines and blank lines are skipped."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise IngestionError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise IngestionError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise IngestionError("ragged CSV rows")
    try:
        return as_matrix(rows)
    except InvalidMatrixError as exc:
        raise IngestionError(str(exc)) from exc


def read_matrix_csv(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    return parse_matrix_csv(text)
