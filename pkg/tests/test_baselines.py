import math

import numpy as np
import pytest

from jldp.baselines import (
    RrGraph,
    expected_cut_guess,
    laplace_cut,
    noisy_edge_total,
    randomized_response_release,
    rr_cut_estimate,
    rr_error_bound,
)
from jldp.errors import InvalidQueryError, ParameterRangeError
from jldp.graph import CutQuery, WeightedGraph, complete_graph, cut_value, erdos_renyi, num_pairs, random_cut
from jldp.jl import derive_seed, make_rng


def test_laplace_vanishing_noise():
    g = complete_graph(5)
    q = CutQuery({0, 1})
    assert laplace_cut(g, q, 1e9, 1) == pytest.approx(cut_value(g, q), abs=1e-6)


def test_laplace_unbiased_and_median():
    g = erdos_renyi(10, 0.5, make_rng(0))
    q = CutQuery({0, 1, 2})
    phi = cut_value(g, q)
    eps = 0.5
    draws = np.array([laplace_cut(g, q, eps, derive_seed(1, t)) for t in range(10_000)])
    se = math.sqrt(2 / eps**2 / 10_000)
    assert abs(draws.mean() - phi) <= 3 * se
    big = np.array([laplace_cut(g, q, eps, derive_seed(2, t)) for t in range(100_000)]) - phi
    assert np.median(np.abs(big)) == pytest.approx(math.log(2) / eps, rel=0.1)


def test_laplace_rejects_bad_eps():
    with pytest.raises(ParameterRangeError):
        laplace_cut(complete_graph(3), CutQuery({0}), 0.0, 1)


def test_rr_probabilities():
    empty = WeightedGraph(2)
    plus = np.mean([randomized_response_release(empty, 0.5, t).signs[0] > 0 for t in range(20_000)])
    assert plus == pytest.approx(0.5, abs=0.01)
    half = WeightedGraph.from_pair_weights(50, np.full(num_pairs(50), 0.5))
    signs = np.concatenate([randomized_response_release(half, 0.8, t).signs for t in range(100)])
    assert signs.size > 100_000
    assert np.mean(signs > 0) == pytest.approx(0.7, abs=0.01)
    full = randomized_response_release(complete_graph(20), 1.0, 3)
    assert np.all(full.signs == 1)


@pytest.mark.parametrize("eps", [0.0, 1.01, 2.0])
def test_rr_eps_range(eps):
    with pytest.raises(ParameterRangeError):
        randomized_response_release(complete_graph(3), eps, 1)


def test_rr_graph_accessors():
    h = randomized_response_release(erdos_renyi(6, 0.5, make_rng(1)), 0.5, 2)
    m = h.sign_matrix()
    assert h.sign(4, 1) == m[1, 4] == m[4, 1]
    np.testing.assert_array_equal(np.diag(m), 0)
    assert set(np.unique(h.nonnegative_weights())) <= {0.0, 1.0}
    assert h.to_edge_list().splitlines()[0] == "n 6"
    with pytest.raises(ValueError):
        RrGraph(3, np.array([1.0, 0.0, 1.0]), 0.5)


def test_rr_unbiased_and_symmetric():
    g = erdos_renyi(20, 0.3, make_rng(5))
    q = CutQuery({0, 3, 7, 9})
    phi = cut_value(g, q)
    ests = np.array([rr_cut_estimate(randomized_response_release(g, 0.5, derive_seed(3, t)), q) for t in range(10_000)])
    assert abs(ests.mean() - phi) <= 3 * ests.std() / 100
    h = randomized_response_release(g, 0.5, 1)
    assert rr_cut_estimate(h, q) == rr_cut_estimate(h, q.complement(20))


def test_rr_variance_matches_exact():
    # Var = sum over crossing pairs of (1 - eps^2 w^2) / eps^2
    g = erdos_renyi(30, 0.1, make_rng(6))
    q = CutQuery(range(8))
    eps = 0.5
    inside, outside = list(range(8)), list(range(8, 30))
    w = g.adjacency[np.ix_(inside, outside)]
    exact = float(np.sum(1 - eps**2 * w**2)) / eps**2
    ests = np.array([rr_cut_estimate(randomized_response_release(g, eps, derive_seed(4, t)), q) for t in range(5000)])
    assert ests.var() / exact == pytest.approx(1.0, rel=0.2)


def test_rr_error_bound_frequency():
    g = erdos_renyi(40, 0.3, make_rng(7))
    q = random_cut(40, 6, make_rng(8))
    phi = cut_value(g, q)
    bound = rr_error_bound(40, 6, 0.5, 0.05)
    assert bound == pytest.approx(math.sqrt(2 * math.log(20) * 6 * 34) / 0.5)
    hits = [abs(rr_cut_estimate(randomized_response_release(g, 0.5, derive_seed(9, t)), q) - phi) <= bound
            for t in range(1000)]
    assert np.mean(hits) >= 1 - 2 * 0.05


def test_expected_cut_guess():
    n = 10
    q = CutQuery({0, 1, 2})
    assert expected_cut_guess(num_pairs(n), n, q) == 3 * 7
    assert expected_cut_guess(0.0, n, q) == 0.0
    with pytest.raises(InvalidQueryError):
        expected_cut_guess(5.0, n, CutQuery([]))


def test_expected_cut_guess_on_gnp():
    hits = 0
    for k in range(100):
        rng = make_rng(derive_seed(10, k))
        g = erdos_renyi(50, 0.5, rng)
        q = random_cut(50, 10, rng)
        m = noisy_edge_total(g, 1.0, derive_seed(11, k))
        hits += abs(expected_cut_guess(m, 50, q) - cut_value(g, q)) <= 0.15 * cut_value(g, q)
    assert hits >= 80
