"""Private release of a graph Laplacian and cut queries against it.

The release lifts every pair weight to at least w/n, projects the edge matrix
with an r x C(n,2) Gaussian sketch and publishes ``L~ = (1/r) E^T M^T M E``.
Cut queries are answered from ``L~`` and the public ``(n, w)`` alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AllocationBudgetError, GraphTooSmallError, ParameterRangeError
from .graph import CutQuery, WeightedGraph, edge_matrix, num_pairs, translate_weights
from .jl import GENERATOR_ID, derive_seed, jl_dim, make_rng, sample_sketch, sketch_nbytes

DEFAULT_MAX_BYTES = 1 << 30


def check_privacy_inputs(eps: float, delta: float) -> None:
    if not (eps > 0 and math.isfinite(eps)):
        raise ParameterRangeError(f"eps={eps} must be positive and finite")
    if not (0.0 < delta < 1.0):
        raise ParameterRangeError(f"delta={delta} must be in (0, 1)")


def laplacian_noise_floor(eps: float, delta: float, r: int) -> float:
    """w = sqrt(32 r ln(2/delta)) / eps * ln(4r/delta)."""
    return math.sqrt(32.0 * r * math.log(2.0 / delta)) / eps * math.log(4.0 * r / delta)


@dataclass(frozen=True)
class LaplacianReleaseParams:
    eps: float
    delta: float
    eta: float
    nu: float
    r: int
    w: float

    @property
    def eps0(self) -> float:
        """Per-row budget eps / sqrt(4 r ln(2/delta))."""
        return self.eps / math.sqrt(4.0 * self.r * math.log(2.0 / self.delta))

    @property
    def delta0(self) -> float:
        return self.delta / (2.0 * self.r)

    def w_over_n(self, n: int) -> float:
        return self.w / n

    def tau(self, s: int) -> float:
        """Additive error 2 * eta * w * s for a cut of size s."""
        return 2.0 * self.eta * self.w * s

    def min_nodes(self) -> int:
        return math.floor(2.0 * self.w) + 1

    def check_graph_size(self, n: int) -> None:
        if self.w / n >= 0.5:
            raise GraphTooSmallError(
                f"w/n = {self.w / n:.4g} >= 1/2; need at least {self.min_nodes()} nodes for "
                f"eps={self.eps}, delta={self.delta}, eta={self.eta}, nu={self.nu}",
                min_n=self.min_nodes(),
            )


def derive_params(eps: float, delta: float, eta: float, nu: float) -> LaplacianReleaseParams:
    """Evaluate r and w without checking them against a graph size."""
    check_privacy_inputs(eps, delta)
    r = jl_dim(eta, nu, allow_half=True).r
    w = laplacian_noise_floor(eps, delta, r)
    if w <= 2.0:
        raise ParameterRangeError(f"w={w:.4g} <= 2: parameters too weak (need 1/w < 1/2)")
    return LaplacianReleaseParams(eps=float(eps), delta=float(delta), eta=float(eta), nu=float(nu), r=r, w=w)


def compute_params(eps: float, delta: float, eta: float, nu: float, n: int) -> LaplacianReleaseParams:
    params = derive_params(eps, delta, eta, nu)
    params.check_graph_size(n)
    return params


@dataclass(frozen=True)
class SanitizedLaplacian:
    l_tilde: np.ndarray = field(repr=False)
    n: int
    params: LaplacianReleaseParams
    seed: int | None
    generator: str = GENERATOR_ID
    projection: np.ndarray | None = field(default=None, repr=False)

    def metadata(self) -> dict[str, object]:
        p = self.params
        return {
            "kind": "laplacian",
            "eps": p.eps,
            "delta": p.delta,
            "eta": p.eta,
            "nu": p.nu,
            "r": p.r,
            "w": p.w,
            "n": self.n,
            "seed": self.seed,
            "generator": self.generator,
        }


def check_budget(r: int, m: int, max_bytes: int) -> None:
    need = sketch_nbytes(r, m)
    if need > max_bytes:
        raise AllocationBudgetError(f"sketch needs {need} bytes, budget is {max_bytes}")


def translated_graph(g: WeightedGraph, params: LaplacianReleaseParams) -> WeightedGraph:
    return translate_weights(g, params.w_over_n(g.n))


def release_laplacian(
    g: WeightedGraph,
    params: LaplacianReleaseParams,
    seed: int,
    *,
    max_bytes: int = DEFAULT_MAX_BYTES,
    keep_projection: bool = False,
) -> SanitizedLaplacian:
    """Publish ``(1/r) E_H^T M^T M E_H`` for the weight-translated graph H.

    ``keep_projection`` also stores ``O = M E_H``; it is meant for audits and is
    never written by the CLI.
    """
    params.check_graph_size(g.n)
    m = num_pairs(g.n)
    check_budget(params.r, m, max_bytes)
    e_h = edge_matrix(translated_graph(g, params))
    sketch = sample_sketch(params.r, m, seed)
    o = sketch.entries @ e_h
    l_tilde = (o.T @ o) / params.r
    l_tilde = 0.5 * (l_tilde + l_tilde.T)
    return SanitizedLaplacian(
        l_tilde=l_tilde,
        n=g.n,
        params=params,
        seed=int(seed),
        projection=o if keep_projection else None,
    )


def answer_cut_query(sl: SanitizedLaplacian, q: CutQuery) -> float:
    """R(S) = (1_S^T L~ 1_S - w s (n - s) / n) / (1 - w/n)."""
    n = sl.n
    ind = q.indicator(n)
    s = q.size
    f = sl.params.w / n
    quad = float(ind @ sl.l_tilde @ ind)
    return (quad - sl.params.w * s * (n - s) / n) / (1.0 - f)


def answer_cut_queries(sl: SanitizedLaplacian, queries) -> np.ndarray:
    n = sl.n
    if not queries:
        return np.zeros(0)
    ind = np.stack([q.indicator(n) for q in queries])
    s = ind.sum(axis=1)
    quad = np.einsum("ij,jk,ik->i", ind, sl.l_tilde, ind)
    f = sl.params.w / n
    return (quad - sl.params.w * s * (n - s) / n) / (1.0 - f)


# -- distributed protocol ----------------------------------------------------

class ProtocolNode:
    """One participant: draws fresh N(0,1) samples for its higher-indexed pairs."""

    def __init__(self, index: int, n: int, seed: int, coefficients: np.ndarray):
        self.index = index
        self.n = n
        self.rng = make_rng(derive_seed(seed, index))
        # coefficients[j] = sqrt(translated weight of {index, j}); entry at index unused
        self.coefficients = coefficients
        self.draws = 0
        self.inbox: dict[int, float] = {}

    def draw(self) -> np.ndarray:
        k = self.n - self.index - 1
        samples = self.rng.standard_normal(k)
        self.draws += k
        return samples

    def output(self, own: np.ndarray) -> float:
        i = self.index
        total = 0.0
        for j in range(self.n):
            if j == i:
                continue
            if j < i:
                total -= self.inbox[j] * self.coefficients[j]
            else:
                total += own[j - i - 1] * self.coefficients[j]
        return total


@dataclass
class ProtocolTranscript:
    outputs: np.ndarray  # rounds x n
    samples: np.ndarray  # rounds x C(n,2), lexicographic pair order
    draws: list[int]


def simulate_protocol(g: WeightedGraph, params: LaplacianReleaseParams, seed: int, rounds: int = 1) -> ProtocolTranscript:
    """Run the per-node protocol for ``rounds`` repetitions.

    Node i draws n-i-1 samples per round and sends the j-th one to node i+j.
    Node i's samples are exactly the lexicographic rows of pairs (i, i+1..n-1),
    so concatenating the draws in node order gives the centralized stream.
    """
    params.check_graph_size(g.n)
    n = g.n
    h = translated_graph(g, params).adjacency
    coeff = np.sqrt(h)
    nodes = [ProtocolNode(i, n, seed, coeff[i]) for i in range(n)]
    outputs = np.zeros((rounds, n))
    samples = np.zeros((rounds, num_pairs(n)))
    for t in range(rounds):
        drawn = [node.draw() for node in nodes]
        for i, node in enumerate(nodes):
            for j, x in enumerate(drawn[i], start=1):
                nodes[i + j].inbox[i] = float(x)
        for i, node in enumerate(nodes):
            outputs[t, i] = node.output(drawn[i])
        samples[t] = np.concatenate(drawn) if n > 1 else np.zeros(0)
    return ProtocolTranscript(outputs=outputs, samples=samples, draws=[node.draws for node in nodes])


def distributed_release_row(g: WeightedGraph, params: LaplacianReleaseParams, seed: int) -> np.ndarray:
    """The n node outputs of one protocol round (one row of O = M E_H)."""
    return simulate_protocol(g, params, seed, rounds=1).outputs[0]


def protocol_samples(n: int, seed: int, rounds: int = 1) -> np.ndarray:
    """Regenerate the protocol's sample stream in lexicographic pair order."""
    rngs = [make_rng(derive_seed(seed, i)) for i in range(n)]
    out = np.zeros((rounds, num_pairs(n)))
    for t in range(rounds):
        out[t] = np.concatenate([rng.standard_normal(n - i - 1) for i, rng in enumerate(rngs)])
    return out

