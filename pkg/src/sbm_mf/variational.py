"""Mean-field variational inference for the two-parameter SBM.

Batch coordinate ascent (all rows of pi updated from the previous iterate),
sequential coordinate ascent, and the evidence lower bound they increase.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSeparationError, InputError, NumericalError
from .loss import l1_loss, misclustered_count
from .model import HardAssignment, SoftAssignment, as_probs, harden
from .numerics import BetaParams, digamma, kl_beta, kl_categorical_rows
from .trace import IterationRecord, IterationTrace

VARIANTS = ("digamma", "log")


@dataclass(frozen=True)
class VariationalState:
    """Mean-field parameters after an update.

    ``lam`` is None only when ``t == 0``, which sequential CAVI tolerates.
    """

    pi: SoftAssignment
    p_params: BetaParams
    q_params: BetaParams
    t: float
    lam: float | None


@dataclass(frozen=True)
class PairSums:
    """Pair statistics of a soft assignment against a graph (all over i < j)."""

    within_edges: float  # sum_a pi_ia pi_ja A_ij
    within_pairs: float  # sum_a pi_ia pi_ja
    edges: float  # A_ij
    pairs: float  # 1


def pair_sums(pi, A):
    probs = as_probs(pi)
    if probs.shape[0] != A.n:
        raise InputError(f"assignment has n={probs.shape[0]} but graph has n={A.n}")
    n = A.n
    within_edges = 0.5 * float(np.sum(probs * A.matmul(probs)))
    colsum = probs.sum(axis=0)
    within_pairs = 0.5 * float(np.sum(colsum * colsum) - np.sum(probs * probs))
    return PairSums(within_edges, within_pairs, float(A.n_edges), n * (n - 1) / 2.0)


def _check_dims(probs, priors, A):
    if probs.shape[0] != A.n or priors.n != A.n:
        raise InputError(f"node counts disagree: pi {probs.shape[0]}, priors {priors.n}, graph {A.n}")
    if probs.shape[1] != priors.k:
        raise InputError(f"community counts disagree: pi {probs.shape[1]}, priors {priors.k}")


def beta_params_from_sums(s, priors):
    p_params = BetaParams(
        priors.alpha_p + s.within_edges,
        priors.beta_p + (s.within_pairs - s.within_edges),
    )
    q_params = BetaParams(
        priors.alpha_q + (s.edges - s.within_edges),
        priors.beta_q + (s.pairs - s.edges - s.within_pairs + s.within_edges),
    )
    return p_params, q_params


def update_beta_params(pi, A, priors):
    """Conjugate Beta updates for p (same-community pairs) and q (cross pairs)."""
    _check_dims(as_probs(pi), priors, A)
    return beta_params_from_sums(pair_sums(pi, A), priors)


def expected_log_odds(p_params, q_params):
    """Return (2t, 2t*lambda) from digamma expectations; both finite even when t == 0."""
    elog_p, elog_1mp = p_params.expected_log()
    elog_q, elog_1mq = q_params.expected_log()
    return (elog_p - elog_1mp) - (elog_q - elog_1mq), elog_1mq - elog_1mp


def t_lambda_digamma(p_params, q_params):
    two_t, two_t_lam = expected_log_odds(p_params, q_params)
    if two_t == 0.0:
        raise DegenerateSeparationError()
    return 0.5 * two_t, two_t_lam / two_t


def t_lambda_log(p_params, q_params):
    """t and lambda with log(x) in place of psi(x)."""
    ap, bp, aq, bq = p_params.alpha, p_params.beta, q_params.alpha, q_params.beta
    two_t = math.log(ap) + math.log(bq) - math.log(bp) - math.log(aq)
    if two_t == 0.0:
        raise DegenerateSeparationError()
    num = math.log(bq) + math.log(ap + bp) - math.log(aq + bq) - math.log(bp)
    return 0.5 * two_t, num / two_t


def neighbor_scores(A, probs, lam):
    """S[i, a] = sum_{j != i} probs[j, a] * (A_ij - lam)."""
    colsum = probs.sum(axis=0)
    return A.matmul(probs) - lam * (colsum[None, :] - probs)


def _normalize_logits(logits):
    if not np.all(np.isfinite(logits)):
        raise NumericalError("non-finite logit in assignment update")
    logits = logits - logits.max(axis=1, keepdims=True)
    w = np.exp(logits)
    return w / w.sum(axis=1, keepdims=True)


def h_update(pi, t, lam, priors, A):
    """Batch map pi -> h_{t,lambda}(pi), every row computed from the input pi.

    Row i is proportional to pi_pri[i] * exp(2t * sum_{j != i} pi[j] (A_ij - lam)),
    evaluated in log space with the row maximum subtracted.
    """
    probs = as_probs(pi)
    _check_dims(probs, priors, A)
    logits = np.log(priors.pi_pri.probs) + 2.0 * t * neighbor_scores(A, probs, lam)
    return SoftAssignment(_normalize_logits(logits))


def elbo(state, priors, A):
    """E_q[log p(A | Z, p, q)] - KL(q(Z, p, q) || prior); larger is better.

    Uses digamma expectations regardless of the variant used to produce the
    state, so it is the exact mean-field objective.
    """
    probs = state.pi.probs
    _check_dims(probs, priors, A)
    s = pair_sums(state.pi, A)
    return _elbo_from_sums(s, probs, state.p_params, state.q_params, priors)


def _elbo_from_sums(s, probs, p_params, q_params, priors):
    two_t, two_t_lam = expected_log_odds(p_params, q_params)
    elog_q, elog_1mq = q_params.expected_log()
    # t<A - lam 11^T + lam I, pi pi^T> = 2t * sum_{i<j} sum_a pi_ia pi_ja (A_ij - lam)
    value = two_t * s.within_edges - two_t_lam * s.within_pairs
    value += (elog_q - elog_1mq) * s.edges + elog_1mq * s.pairs
    value -= kl_categorical_rows(probs, priors.pi_pri.probs)
    value -= kl_beta(p_params, BetaParams(priors.alpha_p, priors.beta_p))
    value -= kl_beta(q_params, BetaParams(priors.alpha_q, priors.beta_q))
    return float(value)


def default_iterations(n):
    """ceil(log n) iterations, at least one."""
    return max(1, math.ceil(math.log(max(n, 2))))


def _validate_run(A, k, priors, pi0, iterations, name="iterations"):
    if iterations is not None and iterations < 1:
        raise InputError(f"{name} must be >= 1, got {iterations}")
    probs = as_probs(pi0)
    if probs.shape[1] != k or priors.k != k:
        raise InputError(f"k={k} disagrees with initializer ({probs.shape[1]}) or prior ({priors.k})")
    _check_dims(probs, priors, A)
    return probs


def _score(record, pi, truth):
    if truth is not None:
        record.loss, _ = l1_loss(pi, truth)
        record.misclustered = misclustered_count(harden(pi), truth)


def bcavi(A, k, priors, pi0, iterations=None, variant="digamma", truth=None):
    """Batch coordinate ascent variational inference.

    Each iteration updates the Beta parameters from the previous pi, forms
    (t, lambda) with the chosen variant, then applies ``h_update`` to all rows
    at once. Returns ``(state, trace)``.
    """
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}, got {variant!r}")
    _validate_run(A, k, priors, pi0, iterations)
    if iterations is None:
        iterations = default_iterations(A.n)
    t_lambda = t_lambda_digamma if variant == "digamma" else t_lambda_log

    pi = pi0 if isinstance(pi0, SoftAssignment) else pi0.to_soft()
    trace = IterationTrace()
    first = IterationRecord(0)
    _score(first, pi, truth)
    trace.append(first)

    state = None
    for s in range(1, iterations + 1):
        start = time.perf_counter()
        p_params, q_params = update_beta_params(pi, A, priors)
        try:
            t, lam = t_lambda(p_params, q_params)
        except DegenerateSeparationError as exc:
            raise DegenerateSeparationError(iteration=s) from exc
        pi = h_update(pi, t, lam, priors, A)
        state = VariationalState(pi, p_params, q_params, t, lam)
        record = IterationRecord(
            s,
            elbo=elbo(state, priors, A),
            t=t,
            lam=lam,
            p_est=p_params.mean,
            q_est=q_params.mean,
            anti_assortative=t < 0,
        )
        _score(record, pi, truth)
        record.seconds = time.perf_counter() - start
        trace.append(record)
    return state, trace


def cavi_sequential(A, k, priors, pi0, sweeps=1, truth=None, track_elbo=True):
    """Sequential coordinate ascent.

    Each sweep updates q(p) and q(q), then every row of pi in index order using
    the freshest values of all other rows. The row update uses 2t and 2t*lambda
    directly, so it stays defined when t == 0. With ``track_elbo`` the ELBO after
    every coordinate block is appended to ``trace.elbo_path``.
    """
    probs = _validate_run(A, k, priors, pi0, sweeps, name="sweeps").copy()
    log_prior = np.log(priors.pi_pri.probs)
    indptr, indices = A.csr.indptr, A.csr.indices

    trace = IterationTrace()
    first = IterationRecord(0)
    _score(first, SoftAssignment(probs), truth)
    trace.append(first)

    for s in range(1, sweeps + 1):
        start = time.perf_counter()
        p_params, q_params = beta_params_from_sums(pair_sums(probs, A), priors)
        if track_elbo:
            trace.elbo_path.append(_elbo_from_sums(pair_sums(probs, A), probs, p_params, q_params, priors))
        two_t, two_t_lam = expected_log_odds(p_params, q_params)
        colsum = probs.sum(axis=0)
        for i in range(A.n):
            nbrs = indices[indptr[i]:indptr[i + 1]]
            others = colsum - probs[i]
            logits = log_prior[i] + two_t * probs[nbrs].sum(axis=0) - two_t_lam * others
            row = _normalize_logits(logits[None, :])[0]
            colsum = others + row
            probs[i] = row
            if track_elbo:
                trace.elbo_path.append(_elbo_from_sums(pair_sums(probs, A), probs, p_params, q_params, priors))
        pi = SoftAssignment(probs)
        t = 0.5 * two_t
        record = IterationRecord(
            s,
            elbo=_elbo_from_sums(pair_sums(probs, A), probs, p_params, q_params, priors),
            t=t,
            lam=two_t_lam / two_t if two_t != 0.0 else None,
            p_est=p_params.mean,
            q_est=q_params.mean,
            anti_assortative=t < 0,
        )
        _score(record, pi, truth)
        record.seconds = time.perf_counter() - start
        trace.append(record)

    two_t, two_t_lam = expected_log_odds(p_params, q_params)
    lam = two_t_lam / two_t if two_t != 0.0 else None
    return VariationalState(SoftAssignment(probs), p_params, q_params, 0.5 * two_t, lam), trace
