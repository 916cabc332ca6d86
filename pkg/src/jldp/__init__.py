"""Differentially private graph Laplacian and covariance release via Gaussian sketches."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .graph import CutQuery, NeighborPair, WeightedGraph, cut_value, edge_matrix, laplacian
from .jl import GENERATOR_ID, GaussianSketch, derive_seed, jl_dim, make_rng, sample_sketch
from .laplacian import (
    LaplacianReleaseParams,
    SanitizedLaplacian,
    answer_cut_queries,
    answer_cut_query,
    compute_params,
    release_laplacian,
)
from .covariance import (
    CovarianceReleaseParams,
    SanitizedCovariance,
    answer_direction_query,
    compute_params_cov,
    release_covariance,
    release_mean,
)
