"""Weighted undirected graphs, edge matrices, Laplacians and cut values.

Node ids are dense 0-based integers. Every unordered pair ``u < v`` owns one
row of the edge matrix, in lexicographic order; :func:`pair_index` maps a pair
to that row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import IngestionError, InvalidGraphError, InvalidQueryError, ParameterRangeError


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints ``(us, vs)`` of all pairs ``u < v`` in lexicographic order."""
    return np.triu_indices(n, k=1)


def pair_index(u: int, v: int, n: int) -> int:
    if u > v:
        u, v = v, u
    if not (0 <= u < v < n):
        raise InvalidGraphError(f"invalid pair ({u}, {v}) for n={n}")
    # rows before u: sum_{k<u} (n-1-k)
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


class WeightedGraph:
    """Symmetric ``[0, 1]`` edge weights on ``n`` nodes; absent pairs weigh 0."""

    __slots__ = ("_n", "_w")

    def __init__(self, n: int, weights: Mapping[tuple[int, int], float] | None = None):
        n = int(n)
        if n < 1:
            raise InvalidGraphError("graph needs at least one node")
        w = np.zeros((n, n))
        for (u, v), x in (weights or {}).items():
            u, v = int(u), int(v)
            if u == v:
                raise InvalidGraphError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"pair ({u}, {v}) out of range for n={n}")
            x = float(x)
            if not (0.0 <= x <= 1.0) or math.isnan(x):
                raise InvalidGraphError(f"weight {x} on ({u}, {v}) outside [0, 1]")
            w[u, v] = w[v, u] = x
        w.flags.writeable = False
        self._n = n
        self._w = w

    @classmethod
    def from_adjacency(cls, adj) -> "WeightedGraph":
        a = np.asarray(adj, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidGraphError("adjacency must be square")
        if not np.allclose(a, a.T, rtol=0, atol=0):
            raise InvalidGraphError("adjacency must be symmetric")
        if np.any(np.diag(a) != 0):
            raise InvalidGraphError("adjacency has self-loops")
        n = a.shape[0]
        us, vs = pair_arrays(n)
        return cls(n, {(int(u), int(v)): float(a[u, v]) for u, v in zip(us, vs) if a[u, v] != 0})

    @classmethod
    def from_pair_weights(cls, n: int, values) -> "WeightedGraph":
        """Build from a length-C(n,2) vector in lexicographic pair order."""
        vals = np.asarray(values, dtype=np.float64)
        if vals.shape != (num_pairs(n),):
            raise InvalidGraphError(f"expected {num_pairs(n)} pair weights, got {vals.shape}")
        us, vs = pair_arrays(n)
        return cls(n, {(int(u), int(v)): float(x) for u, v, x in zip(us, vs, vals) if x != 0})

    @property
    def n(self) -> int:
        return self._n

    @property
    def adjacency(self) -> np.ndarray:
        return self._w

    @property
    def weights(self) -> dict[tuple[int, int], float]:
        us, vs = pair_arrays(self._n)
        return {(int(u), int(v)): float(self._w[u, v]) for u, v in zip(us, vs) if self._w[u, v] != 0}

    def pair_weights(self) -> np.ndarray:
        us, vs = pair_arrays(self._n)
        return self._w[us, vs].copy()

    def weight(self, u: int, v: int) -> float:
        return float(self._w[u, v])

    def with_weight(self, u: int, v: int, x: float) -> "WeightedGraph":
        w = self.weights
        key = (min(u, v), max(u, v))
        w[key] = x
        return WeightedGraph(self._n, w)

    def total_weight(self) -> float:
        return float(np.sum(np.triu(self._w, 1)))

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightedGraph) and self._n == other._n and np.array_equal(self._w, other._w)

    def __hash__(self):
        return hash((self._n, self._w.tobytes()))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self._n}, edges={int(np.count_nonzero(np.triu(self._w, 1)))})"


@dataclass(frozen=True)
class CutQuery:
    """Proper nonempty node subset S."""

    members: frozenset[int]

    def __init__(self, members: Iterable[int]):
        object.__setattr__(self, "members", frozenset(int(x) for x in members))

    @property
    def size(self) -> int:
        return len(self.members)

    def validate(self, n: int) -> None:
        if not self.members:
            raise InvalidQueryError("cut set is empty")
        if any(x < 0 or x >= n for x in self.members):
            raise InvalidQueryError(f"cut set has nodes outside 0..{n - 1}")
        if len(self.members) >= n:
            raise InvalidQueryError("cut set covers every node")

    def indicator(self, n: int) -> np.ndarray:
        self.validate(n)
        ind = np.zeros(n)
        ind[list(self.members)] = 1.0
        return ind

    def complement(self, n: int) -> "CutQuery":
        return CutQuery(set(range(n)) - self.members)


@dataclass(frozen=True)
class NeighborPair:
    """Two graphs that differ only on the weight of ``edge``; ``delta = w'(edge) - w(edge)``."""

    g: WeightedGraph
    g_prime: WeightedGraph
    edge: tuple[int, int]
    delta: float

    def __post_init__(self):
        if self.g.n != self.g_prime.n:
            raise InvalidGraphError("neighbor graphs have different node counts")
        a, b = self.edge
        diff = self.g_prime.adjacency - self.g.adjacency
        mask = np.ones_like(diff, dtype=bool)
        mask[a, b] = mask[b, a] = False
        if np.any(diff[mask] != 0):
            raise InvalidGraphError("graphs differ outside the designated edge")
        if abs(self.delta) > 1 or not np.isclose(diff[a, b], self.delta, rtol=0, atol=1e-15):
            raise InvalidGraphError("delta does not match the weight gap or exceeds 1")


def edge_matrix(g: WeightedGraph) -> np.ndarray:
    """C(n,2) x n matrix; row {u,v} has +sqrt(w) at u and -sqrt(w) at v."""
    if g.n < 2:
        raise InvalidGraphError("edge matrix needs n >= 2")
    return edge_matrix_from_pairs(g.n, g.pair_weights())


def edge_matrix_from_pairs(n: int, pair_weights) -> np.ndarray:
    """Edge matrix for arbitrary nonnegative pair weights (lexicographic order)."""
    us, vs = pair_arrays(n)
    root = np.sqrt(np.asarray(pair_weights, dtype=np.float64))
    rows = np.arange(len(us))
    e = np.zeros((len(us), n))
    e[rows, us] = root
    e[rows, vs] = -root
    return e


def laplacian(g: WeightedGraph) -> np.ndarray:
    return laplacian_from_adjacency(g.adjacency)


def laplacian_from_adjacency(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    return np.diag(w.sum(axis=1)) - w


def cut_value(g: WeightedGraph, q: CutQuery) -> float:
    """Total weight crossing (S, complement of S)."""
    q.validate(g.n)
    inside = sorted(q.members)
    outside = sorted(set(range(g.n)) - q.members)
    return float(g.adjacency[np.ix_(inside, outside)].sum())


def translate_weights(g: WeightedGraph, w_over_n: float) -> WeightedGraph:
    """Map every pair weight x to ``w/n + (1 - w/n) x`` so no pair is left at 0."""
    f = float(w_over_n)
    if not (0.0 < f < 0.5):
        raise ParameterRangeError(
            f"w/n = {f:.6g} must lie in (0, 1/2); the graph is too small for these privacy parameters"
        )
    x = g.pair_weights()
    # clip only absorbs rounding at the fixed point x = 1
    return WeightedGraph.from_pair_weights(g.n, np.clip(f + (1.0 - f) * x, f, 1.0))


def complete_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    return WeightedGraph.from_pair_weights(n, np.full(num_pairs(n), weight))


def perfect_matching(half: int) -> WeightedGraph:
    """2*half nodes with node i matched to node half + i.

    A stress case for the sketch: in any single projection the cut separating
    the positively and negatively assigned endpoints is overestimated by a
    factor growing with n.
    """
    n = 2 * half
    return WeightedGraph(n, {(i, half + i): 1.0 for i in range(half)})


def erdos_renyi(n: int, p: float, rng: np.random.Generator) -> WeightedGraph:
    """G(n, p) with unit weights."""
    mask = rng.random(num_pairs(n)) < p
    return WeightedGraph.from_pair_weights(n, mask.astype(np.float64))


def random_weighted_graph(n: int, rng: np.random.Generator, density: float = 1.0) -> WeightedGraph:
    vals = rng.random(num_pairs(n))
    if density < 1.0:
        vals = np.where(rng.random(num_pairs(n)) < density, vals, 0.0)
    return WeightedGraph.from_pair_weights(n, vals)


def random_cut(n: int, size: int, rng: np.random.Generator) -> CutQuery:
    if not (0 < size < n):
        raise InvalidQueryError(f"cut size {size} must be in 1..{n - 1}")
    return CutQuery(rng.choice(n, size=size, replace=False).tolist())


def random_neighbor_pair(g: WeightedGraph, rng: np.random.Generator) -> NeighborPair:
    """Pick a uniform pair (a, b); g' raises its weight by a uniform amount, capped at 1."""
    n = g.n
    us, vs = pair_arrays(n)
    k = int(rng.integers(len(us)))
    a, b = int(us[k]), int(vs[k])
    x = g.weight(a, b)
    gap = float(rng.random())
    x_new = min(x + gap, 1.0)
    return NeighborPair(g, g.with_weight(a, b, x_new), (a, b), x_new - x)


def extreme_neighbor_pair(g: WeightedGraph, a: int, b: int) -> NeighborPair:
    """Edge (a, b) absent in g and at full weight 1 in g'."""
    base = g.with_weight(a, b, 0.0)
    return NeighborPair(base, g.with_weight(a, b, 1.0), (min(a, b), max(a, b)), 1.0)


# -- edge-list files ---------------------------------------------------------

def parse_edge_list(text: str, allow_signed: bool = False) -> tuple[int, dict[tuple[int, int], float]]:
    """Parse ``n <count>`` followed by ``u v weight`` lines (u < v)."""
    n = None
    weights: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if n is None:
            if len(toks) != 2 or toks[0] != "n":
                raise IngestionError(f"line {lineno}: expected 'n <node_count>' header")
            try:
                n = int(toks[1])
            except ValueError as exc:
                raise IngestionError(f"line {lineno}: bad node count") from exc
            if n < 1:
                raise IngestionError(f"line {lineno}: node count must be positive")
            continue
        if len(toks) != 3:
            raise IngestionError(f"line {lineno}: expected 'u v weight'")
        try:
            u, v, x = int(toks[0]), int(toks[1]), float(toks[2])
        except ValueError as exc:
            raise IngestionError(f"line {lineno}: {exc}") from exc
        if not (0 <= u < v < n):
            raise IngestionError(f"line {lineno}: need 0 <= u < v < n, got ({u}, {v})")
        if (u, v) in weights:
            raise IngestionError(f"line {lineno}: duplicate pair ({u}, {v})")
        lo = -1.0 if allow_signed else 0.0
        if not (lo <= x <= 1.0):
            raise IngestionError(f"line {lineno}: weight {x} out of range")
        weights[(u, v)] = x
    if n is None:
        raise IngestionError("missing 'n <node_count>' header")
    return n, weights


def read_edge_list(path) -> WeightedGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    n, weights = parse_edge_list(text)
    try:
        return WeightedGraph(n, weights)
    except InvalidGraphError as exc:
        raise IngestionError(str(exc)) from exc


def format_edge_list(n: int, pairs: Iterable[tuple[int, int, float]], header: str | None = None) -> str:
    lines = []
    if header is not None:
        lines.append(f"# {header}")
    lines.append(f"n {n}")
    for u, v, x in pairs:
        lines.append(f"{u} {v} {x:.17g}")
    return "\n".join(lines) + "\n"


def graph_to_edge_list(g: WeightedGraph, header: str | None = None) -> str:
    return format_edge_list(g.n, ((u, v, x) for (u, v), x in sorted(g.weights.items())), header)
