"""Private covariance release with a spectral shift, and directional-variance queries."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidQueryError, ParameterRangeError, UnsupportedShapeError
from .jl import GENERATOR_ID, jl_dim, make_rng, sample_sketch
from .laplacian import DEFAULT_MAX_BYTES, check_budget, check_privacy_inputs
from .linalg import as_matrix

UNIT_TOL = 1e-8


def covariance_noise_floor(eps: float, delta: float, r: int) -> float:
    """w = 16 sqrt(r ln(2/delta)) / eps * ln(16r/delta)."""
    return 16.0 * math.sqrt(r * math.log(2.0 / delta)) / eps * math.log(16.0 * r / delta)


@dataclass(frozen=True)
class CovarianceReleaseParams:
    eps: float
    delta: float
    eta: float
    nu: float
    r: int
    w: float

    @property
    def eps0(self) -> float:
        return self.eps / math.sqrt(4.0 * self.r * math.log(2.0 / self.delta))

    @property
    def delta0(self) -> float:
        return self.delta / (2.0 * self.r)

    @property
    def tau(self) -> float:
        """Additive error eta * w^2."""
        return self.eta * self.w**2


def compute_params_cov(eps: float, delta: float, eta: float, nu: float) -> CovarianceReleaseParams:
    check_privacy_inputs(eps, delta)
    r = jl_dim(eta, nu, allow_half=True).r
    w = covariance_noise_floor(eps, delta, r)
    if w <= 2.0:
        raise ParameterRangeError(f"w={w:.4g} <= 2: parameters too weak")
    return CovarianceReleaseParams(eps=float(eps), delta=float(delta), eta=float(eta), nu=float(nu), r=r, w=w)


def as_data_matrix(a) -> np.ndarray:
    """n x d data matrix (rows are individuals); requires n >= d."""
    m = as_matrix(a, "data matrix")
    n, d = m.shape
    if n < d:
        raise UnsupportedShapeError(f"need at least as many rows as columns, got {n} x {d}")
    return m


def center_rows(a) -> np.ndarray:
    m = as_matrix(a, "data matrix")
    return m - m.mean(axis=0, keepdims=True)


def spectral_shift(a, w: float) -> np.ndarray:
    """Replace each singular value s of ``a`` by sqrt(s^2 + w^2).

    The result B satisfies ``B^T B = A^T A + w^2 I``.
    """
    m = as_data_matrix(a)
    if w < 0:
        raise ParameterRangeError("shift must be nonnegative")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return (u * np.sqrt(s**2 + w**2)) @ vt


@dataclass(frozen=True)
class SanitizedCovariance:
    c_tilde: np.ndarray = field(repr=False)
    d: int
    params: CovarianceReleaseParams
    seed: int | None
    n: int | None = None
    generator: str = GENERATOR_ID

    def metadata(self) -> dict[str, object]:
        p = self.params
        return {
            "kind": "covariance",
            "eps": p.eps,
            "delta": p.delta,
            "eta": p.eta,
            "nu": p.nu,
            "r": p.r,
            "w": p.w,
            "n": self.n,
            "d": self.d,
            "seed": self.seed,
            "generator": self.generator,
        }


def shifted_matrix(a, params: CovarianceReleaseParams) -> np.ndarray:
    return spectral_shift(center_rows(as_data_matrix(a)), params.w)


def release_covariance(
    a, params: CovarianceReleaseParams, seed: int, *, max_bytes: int = DEFAULT_MAX_BYTES
) -> SanitizedCovariance:
    """Center, shift, sketch with an r x n Gaussian matrix, publish (1/r) B^T M^T M B."""
    m = as_data_matrix(a)
    n, d = m.shape
    check_budget(params.r, n, max_bytes)
    b = shifted_matrix(m, params)
    sketch = sample_sketch(params.r, n, seed)
    o = sketch.entries @ b
    c = (o.T @ o) / params.r
    c = 0.5 * (c + c.T)
    return SanitizedCovariance(c_tilde=c, d=d, params=params, seed=int(seed), n=n)


def check_unit(x, d: int) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64).reshape(-1)
    if v.shape[0] != d:
        raise DimensionMismatchError(f"direction has length {v.shape[0]}, expected {d}")
    if not np.all(np.isfinite(v)) or abs(float(np.linalg.norm(v)) - 1.0) > UNIT_TOL:
        raise InvalidQueryError(f"direction must have unit norm, got |x| = {np.linalg.norm(v):.12g}")
    return v


def answer_direction_query(sc: SanitizedCovariance, x) -> float:
    """R(x) = x^T C~ x - w^2."""
    v = check_unit(x, sc.d)
    return float(v @ sc.c_tilde @ v) - sc.params.w**2


def directional_variance(a, x) -> float:
    """Phi_A(x) = |A x|^2 on the row-centered matrix."""
    c = center_rows(a)
    v = check_unit(x, c.shape[1])
    y = c @ v
    return float(y @ y)


def mean_noise_variance(n: int, eps: float, delta: float) -> float:
    return 4.0 * math.log(1.0 / delta) / (n**2 * eps**2)


def release_mean(a, eps: float, delta: float, seed: int) -> np.ndarray:
    """Column means plus iid N(0, 4 ln(1/delta) / (n^2 eps^2)) noise."""
    check_privacy_inputs(eps, delta)
    m = as_matrix(a, "data matrix")
    n, d = m.shape
    mu = m.mean(axis=0)
    sd = math.sqrt(mean_noise_variance(n, eps, delta))
    return mu + sd * make_rng(seed).standard_normal(d)
