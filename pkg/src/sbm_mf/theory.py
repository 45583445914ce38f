"""Closed-form rate quantities for the two-parameter SBM.

The minimax curve drops the o(1) terms of its exponent; treat it as a
reference curve, not a certified bound.
"""

import math
from dataclasses import asdict, dataclass

from .exceptions import DomainError, RegimeError


def _check_open_unit(**values):
    for name, v in values.items():
        if not 0.0 < v < 1.0:
            raise DomainError(f"{name} must lie in (0, 1), got {v}")


def renyi_I(p, q):
    """Order-1/2 Renyi divergence between Ber(p) and Ber(q)."""
    _check_open_unit(p=p, q=q)
    return -2.0 * math.log(math.sqrt(p * q) + math.sqrt((1.0 - p) * (1.0 - q)))


def t_lambda_star(p, q):
    """Population log-odds t* and threshold lambda* for 0 < q < p < 1."""
    _check_open_unit(p=p, q=q)
    if q >= p:
        raise DomainError(f"need q < p, got p={p}, q={q}")
    log_ratio = math.log1p(-q) - math.log1p(-p)
    two_t = math.log(p) - math.log(q) + log_ratio
    return 0.5 * two_t, log_ratio / two_t


def minimax_bound(n, k, rho, I):
    """n exp(-rho n I / k) for k >= 3 and n exp(-n I / 2) for k = 2."""
    if k == 2:
        return n * math.exp(-n * I / 2.0)
    return n * math.exp(-rho * n * I / k)


def effective_snr(n, k, I, w, nbar_min):
    """n I / (w k (n / nbar_min)^2)."""
    return n * I / (w * k * (n / nbar_min) ** 2)


def contraction_and_budget(n, k, I, w, nbar_min):
    """Per-iteration contraction factor c_n and iteration budget s0."""
    snr = effective_snr(n, k, I, w, nbar_min)
    if not snr > 1.0:
        raise RegimeError(f"n I / (w k (n/nbar_min)^2) = {snr:.4g} must exceed 1")
    return snr ** -0.5, (n * I / k) / math.log(snr)


def chernoff_identity_check(p, q):
    """Max residual of the two exact identities tying t*, lambda* and I.

    With X ~ Ber(q), Y ~ Ber(p):
        exp(t lam) = sqrt(E exp(tX) / E exp(-tY))
        E exp(tX) * E exp(-tY) = exp(-I)
    """
    t, lam = t_lambda_star(p, q)
    I = renyi_I(p, q)
    mgf_x = q * math.exp(t) + 1.0 - q
    mgf_y = p * math.exp(-t) + 1.0 - p
    r1 = abs(math.exp(t * lam) - math.sqrt(mgf_x / mgf_y))
    r2 = abs(mgf_x * mgf_y - math.exp(-I))
    return max(r1, r2)


@dataclass(frozen=True)
class RateReport:
    I: float
    t_star: float
    lambda_star: float
    nbar_min: float
    w: float
    rho: float
    minimax_bound: float
    c_n: float | None
    s0: float | None

    def to_dict(self):
        return asdict(self)


def rate_report(n, k, p, q, nbar_min, w=1.0, rho=1.0):
    """All diagnostics at once; c_n and s0 are None outside the contraction regime."""
    I = renyi_I(p, q)
    t, lam = t_lambda_star(p, q)
    try:
        c_n, s0 = contraction_and_budget(n, k, I, w, nbar_min)
    except RegimeError:
        c_n = s0 = None
    return RateReport(I, t, lam, float(nbar_min), float(w), float(rho), minimax_bound(n, k, rho, I), c_n, s0)
