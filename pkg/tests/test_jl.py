import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jldp.errors import DimensionMismatchError, ParameterRangeError
from jldp.jl import (
    GaussianSketch,
    derive_seed,
    jl_dim,
    jl_failure_bound,
    project,
    sample_sketch,
    scaled_norm_sq,
)


def test_jl_dim_examples():
    assert jl_dim(0.25, 2 * math.exp(-2)).r == 256
    assert jl_dim(0.25, 0.05).r == 473
    assert jl_dim(0.5, 2 * math.exp(-2), allow_half=True).r == 64
    assert jl_dim(0.5, 0.1, allow_half=True).r == 96


@pytest.mark.parametrize("eta,nu", [(0.5, 0.1), (0.0, 0.1), (0.6, 0.1), (0.2, 0.0), (0.2, 1.0)])
def test_jl_dim_range(eta, nu):
    with pytest.raises(ParameterRangeError):
        jl_dim(eta, nu)


@given(st.floats(0.01, 0.49), st.floats(1e-6, 0.5), st.floats(1e-6, 0.5))
def test_jl_dim_monotone_in_nu(eta, nu1, nu2):
    lo, hi = sorted((nu1, nu2))
    assert jl_dim(eta, lo).r >= jl_dim(eta, hi).r


def test_failure_bound_matches_nu_at_design_point():
    r = jl_dim(0.25, 0.05).r
    assert jl_failure_bound(0.25, r) <= 0.05


def test_sketch_determinism():
    a = sample_sketch(2, 3, 42)
    b = sample_sketch(2, 3, 42)
    assert a.entries.tobytes() == b.entries.tobytes()
    assert not np.array_equal(a.entries, sample_sketch(2, 3, 43).entries)


def test_sketch_frozen_value():
    # regression: PCG64 standard_normal stream for seed 42
    e = sample_sketch(2, 3, 42).entries
    np.testing.assert_array_equal(e, np.random.Generator(np.random.PCG64(42)).standard_normal((2, 3)))


def test_sketch_moments():
    e = sample_sketch(1000, 1000, 7).entries
    assert abs(e.mean()) < 0.01
    assert abs(e.var() - 1.0) < 0.02


def test_sketch_is_immutable():
    s = sample_sketch(2, 2, 1)
    with pytest.raises(ValueError):
        s.entries[0, 0] = 1.0


def test_project_zero_and_identity():
    s = sample_sketch(5, 4, 1)
    np.testing.assert_array_equal(project(s, np.zeros(4)), np.zeros(5))
    x = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(project(GaussianSketch.from_entries(np.eye(3)), x), x)
    with pytest.raises(DimensionMismatchError):
        project(s, np.zeros(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**63), st.floats(-5, 5), st.floats(-5, 5))
def test_linearity(seed, a, b):
    s = sample_sketch(6, 5, seed)
    rng = np.random.default_rng(seed % 1000)
    x, y = rng.standard_normal(5), rng.standard_normal(5)
    np.testing.assert_allclose(project(s, a * x + b * y), a * project(s, x) + b * project(s, y), atol=1e-10)


def test_derive_seed_independent_and_stable():
    seeds = [derive_seed(123, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert derive_seed(123, 5) == derive_seed(123, 5)
    assert derive_seed(123, 5) != derive_seed(124, 5)


def test_concentration_99():
    r = jl_dim(0.25, 0.01).r
    x = np.random.default_rng(0).standard_normal(30)
    nx = float(x @ x)
    fails = 0
    trials = 10_000
    for t in range(trials):
        v = scaled_norm_sq(sample_sketch(r, 30, derive_seed(99, t)), x)
        fails += not (0.75 * nx <= v <= 1.25 * nx)
    assert fails / trials <= 0.01
