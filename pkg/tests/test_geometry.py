import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mapperci.errors import InputError
from mapperci.geometry import (
    DistanceMatrix,
    NeighborhoodGraph,
    PointCloud,
    connected_components,
    hausdorff,
    pairwise_distances,
    rips_graph,
    subsample,
)


def test_pairwise_345():
    dm = pairwise_distances(PointCloud([[0, 0], [3, 4]]))
    assert dm.d[0, 1] == 5.0 and dm.d[1, 0] == 5.0


def test_pairwise_single_point():
    dm = pairwise_distances(PointCloud([[1.5, 2.0]]))
    assert dm.d.shape == (1, 1) and dm.d[0, 0] == 0.0


def test_pairwise_line(line3):
    _, dm = line3
    assert dm.d[0, 2] == 3.0 and dm.d[1, 2] == 2.0


@pytest.mark.parametrize("bad", [[[0.0, np.nan]], [[np.inf, 1.0]]])
def test_non_finite_rejected(bad):
    with pytest.raises(InputError):
        PointCloud(bad)


def test_distance_matrix_validation():
    with pytest.raises(InputError):
        DistanceMatrix([[0, 1], [2, 0]])
    with pytest.raises(InputError):
        DistanceMatrix([[1, 0], [0, 0]])


def test_triangle_inequality_random_triples():
    rng = np.random.default_rng(5)
    dm = pairwise_distances(PointCloud(rng.normal(size=(40, 3))))
    d = dm.d
    assert np.array_equal(d, d.T) and np.all(np.diag(d) == 0)
    for _ in range(500):
        i, j, k = rng.integers(0, 40, 3)
        assert d[i, k] <= d[i, j] + d[j, k] + 1e-12


def test_hausdorff_examples(line3):
    _, dm = line3
    assert hausdorff([0, 1], [0, 1], dm) == 0.0
    assert hausdorff([0], [1], dm) == 1.0
    dm2 = pairwise_distances(PointCloud([[0.0], [10.0]]))
    assert hausdorff([0, 1], [0], dm2) == 10.0
    with pytest.raises(InputError):
        hausdorff([], [0], dm)


def test_hausdorff_pseudometric():
    rng = np.random.default_rng(2)
    dm = pairwise_distances(PointCloud(rng.normal(size=(25, 2))))
    for _ in range(100):
        A, B, C = (rng.choice(25, size=rng.integers(1, 10), replace=False) for _ in range(3))
        assert hausdorff(A, B, dm) == hausdorff(B, A, dm)
        assert hausdorff(A, A, dm) == 0
        assert hausdorff(A, C, dm) <= hausdorff(A, B, dm) + hausdorff(B, C, dm) + 1e-12


def test_rips_examples(line3):
    _, dm = line3
    assert len(rips_graph(dm, 0.0).edges) == 0
    assert rips_graph(dm, 3.0).edge_set() == {(0, 1), (0, 2), (1, 2)}
    assert rips_graph(dm, 1.5).edge_set() == {(0, 1)}
    with pytest.raises(InputError):
        rips_graph(dm, -1.0)


def test_rips_closed_ball_and_monotone():
    rng = np.random.default_rng(3)
    dm = pairwise_distances(PointCloud(rng.uniform(size=(30, 2))))
    prev = set()
    for delta in np.linspace(0, 1.5, 16):
        g = rips_graph(dm, delta)
        edges = g.edge_set()
        assert prev <= edges
        expected = {(i, j) for i in range(30) for j in range(i + 1, 30) if dm.d[i, j] <= delta}
        assert edges == expected
        prev = edges


def _graph(n, edges):
    return NeighborhoodGraph(n, np.array(edges, dtype=np.intp).reshape(-1, 2), 0.0)


def test_components_examples():
    assert connected_components(_graph(4, []), [0, 2, 3]) == [[0], [2], [3]]
    assert connected_components(_graph(4, [(0, 1), (1, 2), (2, 3)]), range(4)) == [[0, 1, 2, 3]]
    square = _graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert connected_components(square, [0, 2]) == [[0], [2]]
    assert connected_components(square, []) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20),
    st.sets(st.integers(0, n - 1)))))
def test_components_form_partition(data):
    n, raw_edges, subset = data
    edges = sorted({tuple(sorted(e)) for e in raw_edges if e[0] != e[1]})
    blocks = connected_components(_graph(n, edges), sorted(subset))
    flat = [v for b in blocks for v in b]
    assert sorted(flat) == sorted(subset) and len(flat) == len(set(flat))
    where = {v: k for k, b in enumerate(blocks) for v in b}
    induced = [(u, v) for u, v in edges if u in subset and v in subset]
    for u, v in induced:
        assert where[u] == where[v]  # maximality
    for b in blocks:  # connectivity: BFS inside the block
        seen, todo = {b[0]}, [b[0]]
        while todo:
            x = todo.pop()
            for u, v in induced:
                for a, c in ((u, v), (v, u)):
                    if a == x and c not in seen:
                        seen.add(c)
                        todo.append(c)
        assert seen == set(b)


def test_subsample_contract():
    assert list(subsample(5, 5, 0)) == [0, 1, 2, 3, 4]
    assert list(subsample(1, 1, 0)) == [0]
    a, b = subsample(100, 10, 42), subsample(100, 10, 42)
    assert np.array_equal(a, b) and len(set(a)) == 10
    for m in (0, 6):
        with pytest.raises(InputError):
            subsample(5, m, 0)
