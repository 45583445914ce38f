import numpy as np
import pytest

from sbm_mf import BlockParams, PriorConfig, corrupt_truth, sample_assignment, sample_sbm

DESK = dict(n=400, k=2, p=0.1, q=0.02)


def desk_instance(seed, n=DESK["n"], k=DESK["k"], p=DESK["p"], q=DESK["q"], fraction=0.15):
    """Truth, graph and corrupted initializer for one seeded replication."""
    truth_ss, graph_ss, init_ss, algo_ss = np.random.SeedSequence(seed).spawn(4)
    sizes = [n // k + (1 if a < n % k else 0) for a in range(k)]
    truth = sample_assignment(n, k, sizes, truth_ss)
    A = sample_sbm(BlockParams(p, q, k), truth, graph_ss)
    pi0 = corrupt_truth(truth, fraction, init_ss)
    return truth, A, pi0, algo_ss


@pytest.fixture
def separated_graph():
    """n=60, k=2, p=1, q=0: two disjoint cliques."""
    truth, A, pi0, _ = desk_instance(11, n=60, k=2, p=1.0, q=0.0, fraction=0.1)
    return truth, A, pi0


@pytest.fixture
def uniform_prior():
    return PriorConfig.uniform
