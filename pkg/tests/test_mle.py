import numpy as np
import pytest

from sbm_mf import (
    AdjacencyMatrix,
    DegeneratePartitionError,
    HardAssignment,
    PriorConfig,
    h_prime,
    h_update,
    harden,
    iterative_mle,
    misclustered_count,
)
from sbm_mf.mle import estimate_pq

from conftest import desk_instance


def test_h_prime_hand_case():
    A = AdjacencyMatrix.from_edges(3, [(0, 1)])
    out = h_prime(HardAssignment([0, 0, 1], 2), 0.5, A)
    assert out.labels[2] == 1


def test_h_prime_complete_graph_ties():
    n = 6
    A = AdjacencyMatrix(np.ones((n, n)) - np.eye(n))
    out = h_prime(HardAssignment([0, 1, 0, 1, 0, 1], 2), 1.0, A)
    assert out.labels.tolist() == [0] * n


def test_h_prime_negative_lambda_joins_largest():
    rng = np.random.default_rng(0)
    n = 30
    upper = np.triu(rng.random((n, n)) < 0.2, 1)
    A = AdjacencyMatrix(upper | upper.T)
    z = HardAssignment([0] * 8 + [1] * 14 + [2] * 8, 3)
    out = h_prime(z, -100.0, A)
    assert np.all(out.labels == 1)


def test_h_prime_fixes_one_misplaced_node():
    # edges 0-1 and 2-3; node 1 starts in the wrong community
    A = AdjacencyMatrix.from_edges(4, [(0, 1), (2, 3)])
    z = HardAssignment([0, 1, 1, 1], 2)
    truth = HardAssignment([0, 0, 1, 1], 2)
    assert h_prime(z, 0.4, A) == truth


def test_h_prime_matches_hardened_h_update():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n, k = int(rng.integers(3, 30)), int(rng.integers(2, 5))
        upper = np.triu(rng.random((n, n)) < rng.uniform(0.05, 0.6), 1)
        A = AdjacencyMatrix(upper | upper.T)
        z = HardAssignment(rng.integers(0, k, n), k)
        t, lam = rng.uniform(0.01, 3.0), rng.uniform(-0.5, 1.0)
        soft = h_update(z, t, lam, PriorConfig.uniform(n, k), A)
        assert harden(soft) == h_prime(z, lam, A)


def test_estimate_pq():
    A = AdjacencyMatrix.from_edges(4, [(0, 1), (0, 2)])
    z = HardAssignment([0, 0, 1, 1], 2)
    p_hat, q_hat = estimate_pq(z, A)
    assert (p_hat, q_hat) == (0.5, 0.25)
    p_lit, q_lit = estimate_pq(z, A, estimator="literal")
    assert (p_lit, q_lit) == (1 - 1 / 16, 1.0 / 3.0)  # 1/1 clamped
    full = AdjacencyMatrix.from_edges(4, [(0, 1), (2, 3)])
    p_hat, q_hat = estimate_pq(z, full)
    assert p_hat == 1 - 1 / 16 and q_hat == 1 / 16


def test_iterative_mle_perfect_separation(separated_graph):
    truth, A, pi0 = separated_graph
    z, p_hat, q_hat, trace = iterative_mle(A, 2, harden(pi0), 2, truth=truth)
    assert misclustered_count(z, truth) == 0
    assert p_hat == 1 - 1 / A.n ** 2
    z2, p2, q2, _ = iterative_mle(A, 2, z, 1)
    assert (p2, q2) == (1 - 1 / A.n ** 2, 1 / A.n ** 2)


def test_iterative_mle_truth_init_stays():
    ok = 0
    for seed in range(20):
        truth, A, _, _ = desk_instance(seed)
        _, _, _, trace = iterative_mle(A, 2, truth, 6, truth=truth)
        ok += all(r.misclustered == 0 for r in trace)
    assert ok >= 19


def test_iterative_mle_empty_community():
    A = AdjacencyMatrix.from_edges(4, [(0, 1)])
    with pytest.raises(DegeneratePartitionError) as info:
        iterative_mle(A, 2, HardAssignment([0, 0, 0, 0], 2), 2)
    assert info.value.iteration == 0


def test_iterative_mle_deterministic(separated_graph):
    truth, A, pi0 = separated_graph
    a = iterative_mle(A, 2, harden(pi0), 3, truth=truth)[3].to_jsonl()
    b = iterative_mle(A, 2, harden(pi0), 3, truth=truth)[3].to_jsonl()
    assert a == b
