"""Reference mechanisms for cut queries: Laplace noise and randomized response."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidQueryError, ParameterRangeError
from .graph import CutQuery, WeightedGraph, cut_value, format_edge_list, num_pairs, pair_arrays
from .jl import make_rng


def laplace_cut(g: WeightedGraph, q: CutQuery, eps: float, seed: int) -> float:
    """Phi_G(S) + Lap(1/eps); cut queries have sensitivity 1."""
    if not eps > 0:
        raise ParameterRangeError("eps must be positive")
    phi = cut_value(g, q)
    return phi + float(make_rng(seed).laplace(0.0, 1.0 / eps))


@dataclass(frozen=True)
class RrGraph:
    """Randomized-response output: one +-1 sign per unordered pair (lexicographic order)."""

    n: int
    signs: np.ndarray = field(repr=False)
    eps: float

    def __post_init__(self):
        if self.signs.shape != (num_pairs(self.n),):
            raise ValueError("one sign per pair required")
        if not np.all(np.abs(self.signs) == 1):
            raise ValueError("signs must be +-1")
        self.signs.flags.writeable = False

    def sign(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        k = u * (2 * self.n - u - 1) // 2 + (v - u - 1)
        return int(self.signs[k])

    def sign_matrix(self) -> np.ndarray:
        s = np.zeros((self.n, self.n))
        us, vs = pair_arrays(self.n)
        s[us, vs] = self.signs
        s[vs, us] = self.signs
        return s

    def nonnegative_weights(self) -> np.ndarray:
        """Affine map {-1, 1} -> {0, 1}, for consumers that need nonnegative weights."""
        return (self.signs + 1.0) / 2.0

    def to_edge_list(self, header: str | None = None, nonnegative: bool = False) -> str:
        us, vs = pair_arrays(self.n)
        vals = self.nonnegative_weights() if nonnegative else self.signs
        return format_edge_list(self.n, ((int(u), int(v), float(x)) for u, v, x in zip(us, vs, vals)), header)


def randomized_response_release(g: WeightedGraph, eps: float, seed: int) -> RrGraph:
    """Each pair independently reports +1 w.p. (1 + eps w)/2, else -1."""
    if not (0.0 < eps <= 1.0):
        raise ParameterRangeError(f"randomized response needs 0 < eps <= 1, got {eps}")
    p_plus = (1.0 + eps * g.pair_weights()) / 2.0
    u = make_rng(seed).random(p_plus.shape[0])
    signs = np.where(u < p_plus, 1.0, -1.0)
    return RrGraph(n=g.n, signs=signs, eps=float(eps))


def rr_cut_estimate(h: RrGraph, q: CutQuery) -> float:
    """(1/eps) * sum of released signs across the cut; unbiased for Phi_G(S)."""
    q.validate(h.n)
    inside = sorted(q.members)
    outside = sorted(set(range(h.n)) - q.members)
    s = h.sign_matrix()
    return float(s[np.ix_(inside, outside)].sum()) / h.eps


def rr_error_bound(n: int, s: int, eps: float, nu: float) -> float:
    """|estimate - Phi| <= sqrt(2 ln(1/nu) s (n - s)) / eps except w.p. 2 nu."""
    return math.sqrt(2.0 * math.log(1.0 / nu) * s * (n - s)) / eps


def noisy_edge_total(g: WeightedGraph, eps: float, seed: int) -> float:
    """Total edge weight plus Lap(1/eps)."""
    if not eps > 0:
        raise ParameterRangeError("eps must be positive")
    return g.total_weight() + float(make_rng(seed).laplace(0.0, 1.0 / eps))


def expected_cut_guess(m_noisy: float, n: int, q: CutQuery) -> float:
    """(m / C(n,2)) * s * (n - s): the cut a uniformly spread edge set would have."""
    if n < 2:
        raise InvalidQueryError("need n >= 2")
    q.validate(n)
    s = q.size
    return m_noisy / num_pairs(n) * s * (n - s)
