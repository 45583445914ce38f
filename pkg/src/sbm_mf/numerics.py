"""Special functions and divergences used by the variational updates."""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DivergenceError, DomainError, InputError

# Coefficients B_2k / (2k) of the asymptotic series psi(x) ~ log x - 1/(2x) - sum c_k x^(-2k)
_PSI_SERIES = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_PSI_SHIFT = 6.0


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters of a Beta distribution."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise InputError(f"Beta parameters must be positive, got ({self.alpha}, {self.beta})")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InputError(f"Beta parameters must be finite, got ({self.alpha}, {self.beta})")

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)

    def expected_log(self):
        """Return (E log x, E log(1 - x)) under Beta(alpha, beta)."""
        total = digamma(self.alpha + self.beta)
        return digamma(self.alpha) - total, digamma(self.beta) - total


def digamma(x):
    """Logarithmic derivative of the Gamma function for positive arguments.

    Uses the recurrence psi(x) = psi(x + 1) - 1/x to shift every argument to
    x >= 6, then the Bernoulli asymptotic series truncated after x^-14. The
    truncation error at x = 6 is below 2e-13.

    Accepts scalars or arrays; returns a float for scalar input.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("digamma is only defined here for x > 0")
    if np.any(~np.isfinite(arr)):
        raise DomainError("digamma argument must be finite")

    shifted = arr.copy()
    acc = np.zeros_like(arr)
    small = shifted < _PSI_SHIFT
    while np.any(small):
        acc[small] -= 1.0 / shifted[small]
        shifted[small] += 1.0
        small = shifted < _PSI_SHIFT

    inv2 = 1.0 / (shifted * shifted)
    series = np.zeros_like(arr)
    for coef in reversed(_PSI_SERIES):
        series = (series + coef) * inv2
    out = acc + np.log(shifted) - 0.5 / shifted - series
    if out.ndim == 0:
        return float(out)
    return out


def log_gamma(x):
    """log Gamma(x) for x > 0 (delegates to the C library lgamma)."""
    x = float(x)
    if not x > 0:
        raise DomainError("log_gamma is only defined here for x > 0")
    return math.lgamma(x)


def log_beta_fn(a, b):
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def kl_categorical(p, q):
    """KL(Categorical(p) || Categorical(q)) with the convention 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise InputError(f"probability vectors must have the same length, got {p.shape} and {q.shape}")
    support = p > 0
    if np.any(q[support] <= 0):
        raise DivergenceError("q has zero mass where p is positive")
    ps = p[support]
    value = float(np.sum(ps * (np.log(ps) - np.log(q[support]))))
    return max(value, 0.0)


def kl_categorical_rows(p, q):
    """Row-wise sum of categorical KLs between two row-stochastic matrices."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise InputError(f"shape mismatch {p.shape} vs {q.shape}")
    support = p > 0
    if np.any(q[support] <= 0):
        raise DivergenceError("q has zero mass where p is positive")
    terms = np.zeros_like(p)
    terms[support] = p[support] * (np.log(p[support]) - np.log(q[support]))
    return float(terms.sum())


def kl_beta(a, b):
    """KL(Beta(a.alpha, a.beta) || Beta(b.alpha, b.beta)) in closed form."""
    if a == b:
        return 0.0
    s = a.alpha + a.beta
    psi_s = digamma(s)
    value = (
        log_beta_fn(b.alpha, b.beta)
        - log_beta_fn(a.alpha, a.beta)
        + (a.alpha - b.alpha) * (digamma(a.alpha) - psi_s)
        + (a.beta - b.beta) * (digamma(a.beta) - psi_s)
    )
    return max(float(value), 0.0)
