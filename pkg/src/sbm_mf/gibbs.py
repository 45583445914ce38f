"""Batched Gibbs sampler: draw (p, q) from their Beta conditionals, then all rows of Z at once."""

import math
import time
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSeparationError, InputError
from .model import HardAssignment, SoftAssignment, as_probs, make_rng
from .trace import IterationRecord, IterationTrace
from .loss import l1_loss, misclustered_count
from .variational import h_update, update_beta_params


def sample_beta(params, rng):
    """One Beta(alpha, beta) draw as X / (X + Y), X ~ Gamma(alpha), Y ~ Gamma(beta).

    Consumes exactly two standard-gamma variates (alpha first). The result is
    clamped into the open interval (0, 1) so downstream log-odds stay finite.
    """
    x = rng.standard_gamma(params.alpha)
    y = rng.standard_gamma(params.beta)
    draw = x / (x + y)
    tiny = np.finfo(float).tiny
    return float(min(max(draw, tiny), np.nextafter(1.0, 0.0)))


def _inverse_cdf(cdf, u):
    # first index whose cumulative mass exceeds u; rounding of the last cdf entry
    # is absorbed by falling back to the last category with positive mass
    idx = np.sum(cdf <= u[:, None], axis=1)
    overflow = idx >= cdf.shape[1]
    if np.any(overflow):
        increments = np.diff(cdf, axis=1, prepend=0.0)
        last_pos = cdf.shape[1] - 1 - np.argmax(increments[:, ::-1] > 0, axis=1)
        idx[overflow] = last_pos[overflow]
    return idx


def sample_categorical(probs, rng):
    """Index drawn with P(index = a) = probs[a], by inverse CDF on one uniform."""
    probs = np.asarray(probs, dtype=float)
    u = np.array([rng.random()])
    return int(_inverse_cdf(np.cumsum(probs)[None, :], u)[0])


def sample_rows(pi, rng):
    """Draw every row of a hard assignment independently from the rows of pi.

    One uniform per row, consumed in row order.
    """
    probs = as_probs(pi)
    u = rng.random(probs.shape[0])
    return HardAssignment(_inverse_cdf(np.cumsum(probs, axis=1), u), probs.shape[1])


def log_odds_t_lambda(p, q):
    """Plug-in t and lambda from point values of p and q."""
    two_t = math.log(p) + math.log1p(-q) - math.log1p(-p) - math.log(q)
    if two_t == 0.0:
        raise DegenerateSeparationError()
    return 0.5 * two_t, (math.log1p(-q) - math.log1p(-p)) / two_t


@dataclass(frozen=True)
class ChainState:
    z: HardAssignment
    p: float
    q: float


def gibbs(A, k, priors, z0, iterations, seed, truth=None):
    """Run the batched Gibbs sampler for ``iterations`` sweeps.

    Returns ``(chain, trace)``; ``chain[s]`` is the state after sweep s+1.
    In the trace, ``loss`` is the loss of the conditional probabilities pi^(s)
    and ``sample_loss`` the loss of the drawn Z^(s).
    """
    if iterations is None or iterations < 1:
        raise InputError(f"iterations must be >= 1, got {iterations}")
    if not isinstance(z0, HardAssignment):
        raise InputError("Gibbs sampling needs a hard initial assignment")
    if z0.k != k or priors.k != k or z0.n != A.n or priors.n != A.n:
        raise InputError("dimensions of graph, prior and initializer disagree")
    rng = make_rng(seed)

    z = z0
    trace = IterationTrace()
    first = IterationRecord(0)
    if truth is not None:
        first.loss, _ = l1_loss(z, truth)
        first.sample_loss = first.loss
        first.misclustered = misclustered_count(z, truth)
    trace.append(first)

    chain = []
    for s in range(1, iterations + 1):
        start = time.perf_counter()
        p_params, q_params = update_beta_params(z, A, priors)
        p = sample_beta(p_params, rng)
        q = sample_beta(q_params, rng)
        try:
            t, lam = log_odds_t_lambda(p, q)
        except DegenerateSeparationError as exc:
            raise DegenerateSeparationError("sampled p equals sampled q", iteration=s) from exc
        pi = h_update(z, t, lam, priors, A)
        z = sample_rows(pi, rng)
        chain.append(ChainState(z, p, q))
        record = IterationRecord(s, t=t, lam=lam, p_est=p, q_est=q, anti_assortative=t < 0)
        if truth is not None:
            record.loss, _ = l1_loss(pi, truth)
            record.sample_loss, _ = l1_loss(z, truth)
            record.misclustered = misclustered_count(z, truth)
        record.seconds = time.perf_counter() - start
        trace.append(record)
    return chain, trace
