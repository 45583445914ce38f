import numpy as np
import pytest
import scipy.sparse as sp

from sbm_mf import (
    AdjacencyMatrix,
    BlockParams,
    HardAssignment,
    InputError,
    PriorConfig,
    SoftAssignment,
    assignment_from_labels,
    harden,
    labels_from_assignment,
    sample_assignment,
    sample_sbm,
)
from sbm_mf.model import _triangle_pairs, balanced_sizes


def test_adjacency_validation():
    with pytest.raises(InputError):
        AdjacencyMatrix(np.array([[0, 1], [0, 0]]))
    with pytest.raises(InputError):
        AdjacencyMatrix(np.array([[1, 0], [0, 0]]))
    with pytest.raises(InputError):
        AdjacencyMatrix(np.array([[0, 2], [2, 0]]))
    with pytest.raises(InputError):
        AdjacencyMatrix(np.zeros((2, 3)))


def test_from_edges_and_roundtrip():
    A = AdjacencyMatrix.from_edges(4, [(0, 1), (2, 1), (3, 0)])
    assert A.n_edges == 3
    assert A.edges().tolist() == [[0, 1], [0, 3], [1, 2]]
    assert A.degrees().tolist() == [2, 2, 1, 1]
    assert AdjacencyMatrix(A.dense()) == A
    with pytest.raises(InputError):
        AdjacencyMatrix.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(InputError):
        AdjacencyMatrix.from_edges(3, [(1, 1)])
    with pytest.raises(InputError):
        AdjacencyMatrix.from_edges(3, [(0, 3)])
    assert AdjacencyMatrix.from_edges(3, []).n_edges == 0


def test_triangle_index_inverse():
    n = 300
    u, v = np.triu_indices(n, k=1)
    # enumerate pairs in (v, u) order to match idx = v(v-1)/2 + u
    order = np.lexsort((u, v))
    idx = np.arange(u.size)
    uu, vv = _triangle_pairs(idx)
    assert np.array_equal(uu, u[order]) and np.array_equal(vv, v[order])


def test_assignment_types():
    z = HardAssignment([0, 2, 1, 2], 3)
    assert z.sizes.tolist() == [1, 1, 2]
    assert z.nbar_min == 1.0
    assert np.array_equal(z.matrix.argmax(axis=1), z.labels)
    with pytest.raises(ValueError):
        z.labels[0] = 1
    with pytest.raises(InputError):
        HardAssignment([0, 3], 3)
    with pytest.raises(InputError):
        SoftAssignment([[0.5, 0.6]])
    assert assignment_from_labels(labels_from_assignment(z), 3) == z


def test_harden_ties_smallest_index():
    pi = SoftAssignment([[0.5, 0.5], [0.2, 0.8], [0.25, 0.75]])
    assert harden(pi).labels.tolist() == [0, 1, 1]


def test_sample_assignment_sizes_and_errors():
    z = sample_assignment(10, 3, [3, 3, 4], 1)
    assert sorted(z.sizes.tolist()) == [3, 3, 4]
    assert sample_assignment(10, 3, [3, 3, 4], 1) == z
    for bad in ([5, 5], [0, 5, 5], [3, 3, 3]):
        with pytest.raises(InputError):
            sample_assignment(10, 3, bad, 1)
    with pytest.raises(InputError):
        sample_assignment(10, 1, [10], 1)
    assert balanced_sizes(10, 3) == [4, 3, 3]


def test_sample_sbm_extremes():
    z = sample_assignment(30, 3, [10, 10, 10], 0)
    A = sample_sbm(BlockParams(1.0, 0.0, 3), z, 0)
    same = z.labels[:, None] == z.labels[None, :]
    np.fill_diagonal(same, False)
    assert np.array_equal(A.dense(), same)
    assert sample_sbm(BlockParams(0.0, 0.0, 3), z, 0).n_edges == 0


def test_sample_sbm_edge_frequencies():
    z = sample_assignment(200, 2, [100, 100], 3)
    p, q = 0.3, 0.05
    within = cross = 0
    within_pairs = 2 * 100 * 99 // 2
    cross_pairs = 100 * 100
    reps = 20
    for s in range(reps):
        D = sample_sbm(BlockParams(p, q, 2), z, s).dense()
        same = z.labels[:, None] == z.labels[None, :]
        within += np.triu(D & same, 1).sum()
        cross += np.triu(D & ~same, 1).sum()
    for count, pairs, prob in ((within, within_pairs, p), (cross, cross_pairs, q)):
        n_tot = reps * pairs
        assert abs(count - n_tot * prob) <= 4 * np.sqrt(n_tot * prob * (1 - prob))


def test_sample_sbm_deterministic():
    z = sample_assignment(50, 2, [25, 25], 0)
    a = sample_sbm(BlockParams(0.2, 0.1, 2), z, np.random.SeedSequence(9))
    b = sample_sbm(BlockParams(0.2, 0.1, 2), z, np.random.SeedSequence(9))
    assert a == b


def test_prior_config():
    pr = PriorConfig(np.tile([0.2, 0.8], (3, 1)))
    assert pr.w == pytest.approx(4.0)
    assert PriorConfig.uniform(3, 2).w == 1.0
    with pytest.raises(InputError):
        PriorConfig(np.tile([0.0, 1.0], (3, 1)))
    with pytest.raises(InputError):
        PriorConfig.uniform(3, 2, alpha_p=0.0)


def test_block_params():
    assert BlockParams(0.3, 0.1, 2).assortative
    assert not BlockParams(0.1, 0.3, 2).assortative
    assert np.allclose(BlockParams(0.3, 0.1, 2).matrix(), [[0.3, 0.1], [0.1, 0.3]])
    with pytest.raises(InputError):
        BlockParams(1.2, 0.1, 2)
