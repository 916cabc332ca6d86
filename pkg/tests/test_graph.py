import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jldp.errors import IngestionError, InvalidGraphError, InvalidQueryError, ParameterRangeError
from jldp.graph import (
    CutQuery,
    NeighborPair,
    WeightedGraph,
    complete_graph,
    cut_value,
    edge_matrix,
    extreme_neighbor_pair,
    graph_to_edge_list,
    laplacian,
    num_pairs,
    pair_arrays,
    pair_index,
    parse_edge_list,
    perfect_matching,
    random_cut,
    random_neighbor_pair,
    random_weighted_graph,
    translate_weights,
)


@st.composite
def graphs(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    vals = draw(st.lists(st.floats(0, 1), min_size=num_pairs(n), max_size=num_pairs(n)))
    return WeightedGraph.from_pair_weights(n, vals)


@st.composite
def graph_and_cut(draw):
    g = draw(graphs(min_n=2))
    members = draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n - 1))
    return g, CutQuery(members)


# -- edge matrix and Laplacian -----------------------------------------------

def test_edge_matrix_unit_edge():
    np.testing.assert_array_equal(edge_matrix(WeightedGraph(2, {(0, 1): 1.0})), [[1.0, -1.0]])


def test_edge_matrix_quarter_weight():
    np.testing.assert_array_equal(edge_matrix(WeightedGraph(2, {(0, 1): 0.25})), [[0.5, -0.5]])


def test_edge_matrix_needs_two_nodes():
    with pytest.raises(InvalidGraphError):
        edge_matrix(WeightedGraph(1))


def test_k3_laplacian():
    l = laplacian(complete_graph(3))
    np.testing.assert_array_equal(l, [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    e = edge_matrix(complete_graph(3))
    assert e.shape == (3, 3)
    np.testing.assert_array_equal(e.T @ e, l)


def test_empty_laplacian():
    np.testing.assert_array_equal(laplacian(WeightedGraph(3)), np.zeros((3, 3)))


def test_row_order_is_lexicographic():
    us, vs = pair_arrays(4)
    assert list(zip(us.tolist(), vs.tolist())) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for k, (u, v) in enumerate(zip(us, vs)):
        assert pair_index(int(u), int(v), 4) == k
        assert pair_index(int(v), int(u), 4) == k


def test_laplacian_is_gram_of_edge_matrix_random():
    g = random_weighted_graph(6, np.random.default_rng(5))
    e = edge_matrix(g)
    np.testing.assert_allclose(e.T @ e, laplacian(g), atol=1e-12)


# -- cut values --------------------------------------------------------------

def test_cut_k3():
    assert cut_value(complete_graph(3), CutQuery({0})) == 2.0


def test_cut_single_edge():
    assert cut_value(WeightedGraph(3, {(0, 1): 0.5}), CutQuery({0})) == 0.5


def test_cut_rejects_empty_and_full():
    g = complete_graph(4)
    with pytest.raises(InvalidQueryError):
        cut_value(g, CutQuery([]))
    with pytest.raises(InvalidQueryError):
        cut_value(g, CutQuery(range(4)))
    with pytest.raises(InvalidQueryError):
        cut_value(g, CutQuery([7]))


@settings(max_examples=80, deadline=None)
@given(graph_and_cut())
def test_cut_equals_quadratic_form_and_is_symmetric(gq):
    g, q = gq
    ind = q.indicator(g.n)
    phi = cut_value(g, q)
    assert phi == pytest.approx(ind @ laplacian(g) @ ind, abs=1e-12)
    assert phi == pytest.approx(np.sum((edge_matrix(g) @ ind) ** 2), abs=1e-12)
    assert phi == pytest.approx(cut_value(g, q.complement(g.n)), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.integers(0, 10_000))
def test_laplacian_psd_kernel_and_monotone(g, seed):
    l = laplacian(g)
    np.testing.assert_allclose(l, l.T)
    np.testing.assert_allclose(l @ np.ones(g.n), 0, atol=1e-12)
    assert np.linalg.eigvalsh(l).min() >= -1e-12
    rng = np.random.default_rng(seed)
    pair = random_neighbor_pair(g, rng)
    lp = laplacian(pair.g_prime)
    x = rng.standard_normal((20, g.n))
    assert np.all(np.einsum("ij,jk,ik->i", x, lp - l, x) >= -1e-12)


# -- translation -------------------------------------------------------------

def test_translate_examples():
    g = WeightedGraph(3, {(0, 1): 0.5, (1, 2): 1.0})
    h = translate_weights(g, 0.2)
    assert h.weight(0, 1) == pytest.approx(0.6)
    assert h.weight(1, 2) == 1.0
    assert h.weight(0, 2) == pytest.approx(0.2)
    assert translate_weights(WeightedGraph(2), 0.1).weight(0, 1) == pytest.approx(0.1)


@pytest.mark.parametrize("f", [0.0, 0.5, 0.7, -0.1])
def test_translate_range(f):
    with pytest.raises(ParameterRangeError):
        translate_weights(complete_graph(3), f)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=3), st.floats(0.01, 0.49))
def test_translated_spectrum_floor(g, f):
    h = translate_weights(g, f)
    pw = h.pair_weights()
    assert np.all(pw >= f - 1e-15) and np.all(pw <= 1.0)
    ev = np.linalg.eigvalsh(laplacian(h))
    w = f * g.n
    assert abs(ev[0]) < 1e-10
    # n-1 nonzero eigenvalues are at least w, so the kernel is exactly span{1}
    assert ev[1] >= w * (1 - 1e-12)


# -- neighbors and generators ------------------------------------------------

def test_neighbor_pair_validation():
    g = complete_graph(4, 0.5)
    with pytest.raises(InvalidGraphError):
        NeighborPair(g, g.with_weight(0, 1, 1.0).with_weight(2, 3, 0.0), (0, 1), 0.5)
    pair = NeighborPair(g, g.with_weight(0, 1, 1.0), (0, 1), 0.5)
    assert pair.delta == 0.5


def test_extreme_pair():
    pair = extreme_neighbor_pair(complete_graph(5, 0.3), 3, 1)
    assert pair.edge == (1, 3)
    assert pair.g.weight(1, 3) == 0.0 and pair.g_prime.weight(1, 3) == 1.0


def test_random_cut_size():
    q = random_cut(10, 4, np.random.default_rng(0))
    assert q.size == 4
    with pytest.raises(InvalidQueryError):
        random_cut(10, 10, np.random.default_rng(0))


def test_perfect_matching():
    g = perfect_matching(4)
    assert g.n == 8
    assert g.weights == {(0, 4): 1.0, (1, 5): 1.0, (2, 6): 1.0, (3, 7): 1.0}


# -- edge-list files ---------------------------------------------------------

def test_edge_list_roundtrip():
    g = random_weighted_graph(6, np.random.default_rng(9), density=0.5)
    n, w = parse_edge_list(graph_to_edge_list(g, header="x=1"))
    assert WeightedGraph(n, w) == g


@pytest.mark.parametrize(
    "text",
    [
        "0 1 0.5\n",
        "n 3\n0 1 0.5\n0 1 0.2\n",
        "n 3\n1 0 0.5\n",
        "n 3\n0 1 1.5\n",
        "n 3\n0 1\n",
        "n 3\n0 5 0.1\n",
        "n x\n",
    ],
)
def test_edge_list_rejects(text):
    with pytest.raises(IngestionError):
        parse_edge_list(text)


def test_weights_validated():
    with pytest.raises(InvalidGraphError):
        WeightedGraph(3, {(0, 0): 0.5})
    with pytest.raises(InvalidGraphError):
        WeightedGraph(3, {(0, 1): -0.1})
