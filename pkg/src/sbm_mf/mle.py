"""Iterative maximum likelihood: plug-in (p, q) estimates alternated with hard reassignment."""

import time

import numpy as np

from .exceptions import DegenerateSeparationError, DegeneratePartitionError, InputError
from .gibbs import log_odds_t_lambda
from .loss import l1_loss, misclustered_count
from .model import HardAssignment
from .trace import IterationRecord, IterationTrace
from .variational import neighbor_scores, pair_sums

ESTIMATORS = ("proportion", "literal")


def h_prime(z, lam, A):
    """Move every node to the community with the largest score sum_{j != i} Z_jb (A_ij - lam).

    All rows are scored against the input ``z``; ties go to the smallest index.
    """
    if z.n != A.n:
        raise InputError(f"assignment has n={z.n} but graph has n={A.n}")
    scores = neighbor_scores(A, z.matrix, lam)
    return HardAssignment(np.argmax(scores, axis=1), z.k)


def estimate_pq(z, A, estimator="proportion"):
    """Within/cross edge frequencies, clamped to [1/n^2, 1 - 1/n^2].

    ``estimator="literal"`` returns edges / non-edges instead of edges / pairs.
    """
    s = pair_sums(z, A)
    cross_edges = s.edges - s.within_edges
    cross_pairs = s.pairs - s.within_pairs
    if estimator == "proportion":
        denom_p, denom_q = s.within_pairs, cross_pairs
    elif estimator == "literal":
        denom_p, denom_q = s.within_pairs - s.within_edges, cross_pairs - cross_edges
    else:
        raise InputError(f"estimator must be one of {ESTIMATORS}, got {estimator!r}")
    if denom_p <= 0 or denom_q <= 0:
        raise DegeneratePartitionError("no within- or cross-community pairs to estimate from")
    eps = 1.0 / A.n ** 2
    p_hat = min(max(s.within_edges / denom_p, eps), 1.0 - eps)
    q_hat = min(max(cross_edges / denom_q, eps), 1.0 - eps)
    return p_hat, q_hat


def iterative_mle(A, k, z0, iterations, truth=None, estimator="proportion"):
    """Alternate (p, q) estimation and ``h_prime``. Returns ``(z, p_hat, q_hat, trace)``."""
    if iterations is None or iterations < 1:
        raise InputError(f"iterations must be >= 1, got {iterations}")
    if z0.k != k or z0.n != A.n:
        raise InputError("dimensions of graph and initializer disagree")
    if np.any(z0.sizes == 0):
        raise DegeneratePartitionError(iteration=0)

    z = z0
    trace = IterationTrace()
    first = IterationRecord(0)
    if truth is not None:
        first.loss, _ = l1_loss(z, truth)
        first.misclustered = misclustered_count(z, truth)
    trace.append(first)

    p_hat = q_hat = None
    for s in range(1, iterations + 1):
        start = time.perf_counter()
        try:
            p_hat, q_hat = estimate_pq(z, A, estimator)
            t, lam = log_odds_t_lambda(p_hat, q_hat)
        except DegeneratePartitionError as exc:
            raise DegeneratePartitionError(iteration=s) from exc
        except DegenerateSeparationError as exc:
            raise DegenerateSeparationError("estimated p equals estimated q", iteration=s) from exc
        z = h_prime(z, lam, A)
        if np.any(z.sizes == 0):
            raise DegeneratePartitionError(iteration=s)
        record = IterationRecord(s, t=t, lam=lam, p_est=p_hat, q_est=q_hat, anti_assortative=t < 0)
        if truth is not None:
            record.loss, _ = l1_loss(z, truth)
            record.misclustered = misclustered_count(z, truth)
        record.seconds = time.perf_counter() - start
        trace.append(record)
    return z, p_hat, q_hat, trace
