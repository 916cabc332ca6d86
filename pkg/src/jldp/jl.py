"""Seeded Gaussian sketches for the Johnson-Lindenstrauss transform.

All randomness in the package flows through :func:`make_rng`, so a 64-bit
seed pins every release. Per-trial seeds come from :func:`derive_seed`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, ParameterRangeError

GENERATOR_ID = f"numpy-{np.__version__}/PCG64/standard_normal"

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


def derive_seed(master_seed: int, index: int) -> int:
    """Independent 64-bit child seed for trial ``index`` (SeedSequence spawn key)."""
    ss = np.random.SeedSequence(entropy=int(master_seed) & SEED_MASK, spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _ceil_formula(x: float) -> int:
    # 8*ln(e^2) evaluates to 16.000000000000004; don't let that round up to 17.
    return max(1, math.ceil(x * (1.0 - 1e-12)))


@dataclass(frozen=True)
class JlParams:
    eta: float
    nu: float
    r: int


def jl_dim(eta: float, nu: float, *, allow_half: bool = False) -> JlParams:
    """Rows needed so that (1/r)|Mx|^2 is within (1 +- eta)|x|^2 w.p. >= 1 - nu.

    The concentration bound needs eta < 1/2. Release parameter derivation
    passes ``allow_half`` because there eta only sizes r; privacy does not
    depend on it.
    """
    if not (0.0 < eta < 0.5 or (allow_half and eta == 0.5)):
        raise ParameterRangeError(f"eta={eta} must be in (0, 1/2)")
    if not (0.0 < nu < 1.0):
        raise ParameterRangeError(f"nu={nu} must be in (0, 1)")
    return JlParams(eta=float(eta), nu=float(nu), r=_ceil_formula(8.0 * math.log(2.0 / nu) / eta**2))


def jl_failure_bound(eta: float, r: int) -> float:
    return 2.0 * math.exp(-(eta**2) * r / 8.0)


@dataclass(frozen=True)
class GaussianSketch:
    """An r x m matrix of iid N(0, 1) entries together with its seed."""

    r: int
    m: int
    entries: np.ndarray = field(repr=False)
    seed: int | None

    def __post_init__(self):
        if self.entries.shape != (self.r, self.m):
            raise DimensionMismatchError(f"entries shape {self.entries.shape} != ({self.r}, {self.m})")
        self.entries.flags.writeable = False

    @classmethod
    def from_entries(cls, entries) -> "GaussianSketch":
        """Wrap a fixed matrix (used by tests to force e.g. an identity sketch)."""
        e = np.array(entries, dtype=np.float64)
        return cls(r=e.shape[0], m=e.shape[1], entries=e, seed=None)


def sketch_nbytes(r: int, m: int) -> int:
    return 8 * int(r) * int(m)


def sample_sketch(r: int, m: int, seed: int) -> GaussianSketch:
    if r < 1 or m < 1:
        raise ParameterRangeError("sketch dimensions must be positive")
    rng = make_rng(seed)
    return GaussianSketch(r=r, m=m, entries=rng.standard_normal((r, m)), seed=int(seed))


def project(sketch: GaussianSketch, x) -> np.ndarray:
    """Return ``M x`` (no 1/r scaling)."""
    v = np.asarray(x, dtype=np.float64)
    if v.shape[0] != sketch.m:
        raise DimensionMismatchError(f"vector length {v.shape[0]} != sketch width {sketch.m}")
    return sketch.entries @ v


def scaled_norm_sq(sketch: GaussianSketch, x) -> float:
    y = project(sketch, x)
    return float(y @ y) / sketch.r
