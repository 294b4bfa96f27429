"""Character-sum evaluation of atom probabilities and the error budget.

Over Z_q the indicator of M a = v expands into characters, and averaging
over the random signs turns each pair (i, j) into a cosine factor at the
pair form l_i a_j + l_j a_i (diagonal entries contribute cosines at
l_i a_i).  The zero frequency contributes exactly q**-n; everything else
is the error term, which the exhaustive evaluators below compute
directly.  Each nonzero cosine argument m satisfies
|cos(pi m / q)| <= exp(-2 / q**2), so a frequency vector with N
surviving pair forms is damped by exp(-2 N / q**2); the analytic bound
sums that damping over the two support regimes in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GuardError
from .matrices import ResidueVector, validate_modulus
from .structure import default_threshold

FOURIER_TERM_LIMIT = 10**7
_LSE_CHUNK = 1 << 20


def _check_fourier_guard(n: int, q: int) -> int:
    terms = q**n
    if terms > FOURIER_TERM_LIMIT:
        raise GuardError(
            f"character sum needs q**n = {terms} terms; the guard allows {FOURIER_TERM_LIMIT}"
        )
    return terms


@dataclass(frozen=True)
class CharacterSumResult:
    """Atom probability computed by full character-sum evaluation."""

    n: int
    q: int
    probability: float
    imaginary_residual: float
    term_count: int


def prob_fourier(a: ResidueVector, v: ResidueVector) -> CharacterSumResult:
    """Pr[M a = v mod q] by summing all q**n character terms.

    The imaginary parts cancel in exact arithmetic; the residual that
    floating point leaves behind is reported so callers can assert it is
    numerically zero.
    """
    if a.q != v.q:
        raise ValueError("vectors must share one modulus")
    if a.n != v.n:
        raise ValueError("vectors must share one length")
    terms = _check_fourier_guard(a.n, a.q)
    re, im = _kernels.fourier_sum(a.as_array(), v.as_array(), a.q, 0, terms)
    return CharacterSumResult(
        n=a.n,
        q=a.q,
        probability=re / terms,
        imaginary_residual=abs(im) / terms,
        term_count=terms,
    )


@dataclass(frozen=True)
class ErrorTermResult:
    """Exhaustive error-term mass for one target vector a.

    ``value`` is the sum over nonzero frequencies of the absolute pair
    cosine products (diagonal factors dropped, so it dominates the true
    error contribution); ``exp_bound`` replaces each term by
    exp(-2 N / q**2) and therefore dominates ``value`` term by term.
    """

    n: int
    q: int
    value: float
    exp_bound: float


def error_term(a: ResidueVector) -> ErrorTermResult:
    """Sum the error budget over all q**n - 1 nonzero frequency vectors."""
    terms = _check_fourier_guard(a.n, a.q)
    value, bound = _kernels.error_sums(a.as_array(), a.q, 0, terms)
    return ErrorTermResult(n=a.n, q=a.q, value=value, exp_bound=bound)


def cos_decay_check(q: int) -> bool:
    """True when |cos(pi m / q)| <= exp(-2 / q**2) for every m in [1, q)."""
    validate_modulus(q)
    limit = math.exp(-2.0 / (q * q))
    return all(abs(math.cos(math.pi * m / q)) <= limit for m in range(1, q))


class _OnlineLogSumExp:
    """Streaming logsumexp so huge grids never materialise in memory."""

    def __init__(self) -> None:
        self.max = -math.inf
        self.acc = 0.0

    def add(self, terms: np.ndarray) -> None:
        if terms.size == 0:
            return
        m = float(terms.max())
        if m == -math.inf:
            return
        if m > self.max:
            self.acc = self.acc * math.exp(self.max - m) + float(np.exp(terms - m).sum())
            self.max = m
        else:
            self.acc += float(np.exp(terms - self.max).sum())

    @property
    def value(self) -> float:
        if self.max == -math.inf:
            return -math.inf
        return self.max + math.log(self.acc)


@dataclass(frozen=True)
class AnalyticBoundResult:
    """Log-space pieces of the analytic error bound at dimension n."""

    n: int
    q: int
    tau: float
    log_small_support: float
    log_large_support: float
    log_total: float


def analytic_error_bound(n: int, q: int, tau: float | None = None, log_base: float = math.e) -> AnalyticBoundResult:
    """Closed-form upper bound on the total error mass, evaluated in log space.

    Small-support piece: sum over s = 1..n of C(n, s) q**s
    exp(-s tau / q**2), bounding frequencies whose support is below tau
    through the linear pair-count regime.  Large-support piece: sum over
    s = ceil(tau)..n of C(n, s) (q-1)**s exp(-s**2 / (20 q**2)) through
    the quadratic regime.  Both sums run entirely in log space (streamed
    logsumexp over chunks of the binomial recurrence), so n up to 10**7
    and beyond evaluates in seconds without overflow.
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    validate_modulus(q)
    if tau is None:
        tau = default_threshold(n, log_base)
    if not tau > 0:
        raise ValueError(f"threshold must be positive, got {tau}")
    log_q = math.log(q)
    log_qm1 = math.log(q - 1)
    damp_small = tau / (q * q)
    s_large = max(1, math.ceil(tau))
    small = _OnlineLogSumExp()
    large = _OnlineLogSumExp()
    log_binom_carry = 0.0  # log C(n, lo-1) at each chunk boundary
    for lo in range(1, n + 1, _LSE_CHUNK):
        hi = min(lo + _LSE_CHUNK - 1, n)
        s = np.arange(lo, hi + 1, dtype=np.float64)
        log_binom = np.cumsum(np.log((n - s + 1.0) / s)) + log_binom_carry
        log_binom_carry = float(log_binom[-1])
        small.add(log_binom + s * (log_q - damp_small))
        if hi >= s_large:
            mask = s >= s_large
            sl = s[mask]
            large.add(log_binom[mask] + sl * log_qm1 - sl * sl / (20.0 * q * q))
    log_s = small.value
    log_l = large.value
    return AnalyticBoundResult(
        n=n,
        q=q,
        tau=tau,
        log_small_support=log_s,
        log_large_support=log_l,
        log_total=float(np.logaddexp(log_s, log_l)),
    )


def structured_family_log_weight(n: int, q: int, tau: float | None = None, log_base: float = math.e) -> float:
    """Log of C(n, ceil(tau)) q**(ceil(tau)+1) 2**-n, the near-constant family cost.

    This is the trivial-bound budget spent on the near-constant vectors;
    it decays super-polynomially once tau log q stays well below n.
    Returns +inf when ceil(tau) exceeds n (the family is everything and
    the budget is vacuous).
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    validate_modulus(q)
    if tau is None:
        tau = default_threshold(n, log_base)
    k = math.ceil(tau)
    if k > n:
        return math.inf
    log_binom = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    return log_binom + (k + 1) * math.log(q) - n * math.log(2.0)
