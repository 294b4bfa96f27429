"""Experiment drivers: enumeration studies, sampling campaigns, bound tables.

Every driver is deterministic for a fixed (seed, parameters) tuple, and
the determinism survives threading: work is cut into fixed-size chunks
whose results are exact integers (histogram counts) or per-chunk floats,
reduced in chunk order regardless of which thread finished first.  The
kernels release the GIL (compiled) or spend their time inside numpy
(fallback), so a thread pool gives real parallelism without any
cross-process plumbing.

The expected kernel size E[K] is the bridge between counting and
probability: K = q**nullity sums, over the kernel of M, the indicator
of each vector, so E[K] has a second, independent evaluation as the sum
over all vectors a of Pr[M a = 0].  Exact mode computes both and checks
they agree.  Markov's inequality then turns E[K] into the singularity
bound p'(n) <= E[K] / q, and the sampled analogue holds pointwise: every
singular draw contributes q to the K average, so the estimated bound
can never undercut the estimated probability on the same sample.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from ._bits import packed_length
from .errors import RejectionSamplingError
from .fourier import (
    AnalyticBoundResult,
    analytic_error_bound,
    error_term,
    prob_fourier,
    structured_family_log_weight,
)
from .matrices import (
    ResidueVector,
    exact_event_probability,
    next_valid_modulus,
    validate_modulus,
    _check_dimension,
    _check_enumerable,
)
from .structure import batch_pair_stats, default_threshold, level_set_profile

DEFAULT_SEED = 0xFE12
DEFAULT_SAMPLES = 10_000
DEFAULT_TRIALS = 1_000

_SCAN_CHUNK = 1 << 14
_MC_CHUNK = 4096
_CAMPAIGN_CHUNK = 512
_REJECTION_LIMIT = 10_000
_CROSS_CHECK_LIMIT = 10_000


def _ranges(start: int, stop: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, stop)) for lo in range(start, stop, chunk)]


def _map_chunks(fn: Callable, ranges: Sequence, threads: int) -> list:
    """Apply fn to each range; results come back in submission order."""
    if threads <= 1 or len(ranges) <= 1:
        return [fn(r) for r in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, ranges))


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # One Philox stream per trial index: draws are independent of how
    # trials are batched across threads.
    return np.random.Generator(np.random.Philox(key=[seed & ((1 << 64) - 1), trial]))


@dataclass(frozen=True)
class ExactEnumerationResult:
    """Full-enumeration singularity counts at one (n, q)."""

    n: int
    q: int
    total: int
    rational_singular: int
    mod_q_singular: int
    oracle_mismatches: int
    implication_failures: int
    nullity_histogram: dict[int, int]

    @property
    def p_rational(self) -> float:
        return self.rational_singular / self.total

    @property
    def p_mod_q(self) -> float:
        return self.mod_q_singular / self.total


def run_exact_p(n: int, q: int, threads: int = 1) -> ExactEnumerationResult:
    """Enumerate all symmetric sign matrices; count both singularity events.

    Also cross-checks, matrix by matrix, that the integer determinant
    vanishes mod q exactly when the rank mod q drops, and that rational
    singularity implies mod-q singularity.
    """
    _check_dimension(n)
    _check_enumerable(n)
    validate_modulus(q)
    total = 1 << packed_length(n)
    parts = _map_chunks(
        lambda r: _kernels.enum_scan(n, q, r[0], r[1]),
        _ranges(0, total, _SCAN_CHUNK),
        threads,
    )
    hist = np.zeros(n + 1, dtype=np.int64)
    det_zero = mismatches = implication = 0
    for h, dz, mm, imp in parts:
        hist += h
        det_zero += dz
        mismatches += mm
        implication += imp
    mod_singular = total - int(hist[0])
    return ExactEnumerationResult(
        n=n,
        q=q,
        total=total,
        rational_singular=det_zero,
        mod_q_singular=mod_singular,
        oracle_mismatches=mismatches,
        implication_failures=implication,
        nullity_histogram={k: int(c) for k, c in enumerate(hist) if c},
    )


@dataclass(frozen=True)
class KernelStats:
    """Kernel-size statistics from enumeration or sampling.

    ``e_k`` is the mean of K = q**nullity, ``p_prime_hat`` the fraction
    of singular-mod-q draws, ``markov_bound`` = e_k / q.  In exact mode
    the exact fraction of e_k is attached; in sampled mode plug-in
    standard errors are.
    """

    n: int
    q: int
    mode: str
    samples: int
    nullity_histogram: dict[int, int]
    singular_count: int
    e_k: float
    p_prime_hat: float
    markov_bound: float
    p_stderr: float | None = None
    e_k_stderr: float | None = None
    e_k_numerator: int | None = None
    e_k_denominator: int | None = None
    vectorwise_numerator: int | None = None
    routes_agree: bool | None = None

    @property
    def markov_consistent(self) -> bool:
        """p_prime_hat <= markov_bound, which holds pointwise by construction."""
        return self.p_prime_hat <= self.markov_bound + 1e-15


def _stats_from_hist(n: int, q: int, mode: str, hist: np.ndarray, samples: int, **extra) -> KernelStats:
    singular = samples - int(hist[0])
    # Exact integer moments of K = q**nullity, floats only at the end.
    num = sum(int(c) * q**k for k, c in enumerate(hist))
    sq = sum(int(c) * q ** (2 * k) for k, c in enumerate(hist))
    e_k = num / samples
    p_hat = singular / samples
    if mode == "monte-carlo" and samples > 1:
        var = (sq / samples - e_k * e_k) * samples / (samples - 1)
        extra.setdefault("e_k_stderr", math.sqrt(max(var, 0.0) / samples))
        extra.setdefault("p_stderr", math.sqrt(p_hat * (1.0 - p_hat) / samples))
    return KernelStats(
        n=n,
        q=q,
        mode=mode,
        samples=samples,
        nullity_histogram={k: int(c) for k, c in enumerate(hist) if c},
        singular_count=singular,
        e_k=e_k,
        p_prime_hat=p_hat,
        markov_bound=e_k / q,
        **extra,
    )


def run_mc_p(n: int, q: int, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, threads: int = 1) -> KernelStats:
    """Sample ``samples`` matrices counter-based and estimate p'(n) and E[K]."""
    _check_dimension(n)
    validate_modulus(q)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    parts = _map_chunks(
        lambda r: _kernels.mc_nullity_hist(n, q, seed, r[0], r[1] - r[0]),
        _ranges(0, samples, _MC_CHUNK),
        threads,
    )
    hist = np.zeros(n + 1, dtype=np.int64)
    for h in parts:
        hist += h
    return _stats_from_hist(n, q, "monte-carlo", hist, samples)


def run_expected_kernel(
    n: int,
    q: int,
    mode: str = "exact",
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
) -> KernelStats:
    """E[K] by enumeration (exact fraction) or sampling.

    Exact mode also recomputes the numerator vector-wise, as the sum over
    all q**n target vectors a of #{M : M a = 0 mod q}, and records
    whether the two routes agree; this second route is skipped (fields
    left None) once q**n exceeds 10**4 because it multiplies the scan
    cost by q**n.
    """
    if mode == "mc":
        mode = "monte-carlo"
    if mode == "monte-carlo":
        return run_mc_p(n, q, samples, seed, threads)
    if mode != "exact":
        raise ValueError(f"mode must be 'exact' or 'monte-carlo', got {mode!r}")
    base = run_exact_p(n, q, threads)
    hist = np.zeros(n + 1, dtype=np.int64)
    for k, c in base.nullity_histogram.items():
        hist[k] = c
    extra: dict = {
        "e_k_numerator": sum(c * q**k for k, c in base.nullity_histogram.items()),
        "e_k_denominator": base.total,
    }
    if q**n <= _CROSS_CHECK_LIMIT:
        zero = np.zeros(n, dtype=np.int64)
        total = base.total

        def _count_for(code: int) -> int:
            digits = np.array([(code // q**p) % q for p in range(n - 1, -1, -1)], dtype=np.int64)
            return _kernels.matvec_match_count(n, q, 0, total, digits, zero)

        counts = _map_chunks(
            lambda r: sum(_count_for(c) for c in range(r[0], r[1])),
            _ranges(0, q**n, 64),
            threads,
        )
        extra["vectorwise_numerator"] = int(sum(counts))
        extra["routes_agree"] = extra["vectorwise_numerator"] == extra["e_k_numerator"]
    return _stats_from_hist(n, q, "exact", hist, base.total, **extra)


@dataclass(frozen=True)
class MarkovReport:
    """Sampled E[K] at the dimension-matched modulus, and the Markov bound."""

    n: int
    q: int
    exponent: float
    stats: KernelStats
    consistent: bool


def run_markov_report(
    n: int,
    exponent: float = 2.0,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    q: int | None = None,
) -> MarkovReport:
    """Estimate E[K] and p'(n) at q = next_valid_modulus(n, exponent)."""
    if q is None:
        q = next_valid_modulus(n, exponent)
    stats = run_mc_p(n, q, samples, seed, threads)
    return MarkovReport(n=n, q=q, exponent=exponent, stats=stats, consistent=stats.markov_consistent)


@dataclass(frozen=True)
class LemmaTrialRow:
    """One verified (a, v) pair in the deviation campaign."""

    trial: int
    a: tuple[int, ...]
    v: tuple[int, ...]
    p_enum_numerator: int
    p_enum_denominator: int
    p_fourier: float
    imaginary_residual: float
    error_value: float
    deviation: float
    rel_deviation: float


@dataclass(frozen=True)
class LemmaReport:
    """Campaign verdict for the atom-probability deviation bound."""

    n: int
    q: int
    tau: float
    trials: int
    max_fourier_gap: float
    max_imaginary_residual: float
    max_rel_deviation: float
    violations: list[dict] = field(default_factory=list)
    rows: list[LemmaTrialRow] = field(default_factory=list)


def run_verify_lemma(
    n: int,
    q: int,
    trials: int = DEFAULT_TRIALS,
    tau: float | None = None,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    log_base: float = math.e,
) -> LemmaReport:
    """Check |Pr[M a = v] - q**-n| <= q**-n * error(a) on random (a, v).

    Target vectors a are drawn uniformly and rejected while near-constant
    (the bound is only claimed outside the structured family); after
    10**4 consecutive rejections the campaign aborts with an explicit
    error rather than silently thinning.  For each accepted pair the
    probability is computed twice (enumeration and character sum) and the
    two must agree to 1e-9 before the deviation test runs.
    """
    _check_dimension(n)
    _check_enumerable(n)
    validate_modulus(q)
    if tau is None:
        tau = default_threshold(n, log_base)

    def _one(trial: int) -> LemmaTrialRow:
        rng = _trial_rng(seed, trial)
        for _ in range(_REJECTION_LIMIT):
            a = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
            if not level_set_profile(a, tau, log_base).near_constant:
                break
        else:
            raise RejectionSamplingError(
                f"no vector outside the near-constant family in {_REJECTION_LIMIT} draws "
                f"(n={n}, q={q}, tau={tau:g})",
                _REJECTION_LIMIT,
            )
        v = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
        exact = exact_event_probability(n, q, a, v)
        four = prob_fourier(a, v)
        err = error_term(a)
        center = q ** (-n)
        dev = abs(exact.probability - center)
        return LemmaTrialRow(
            trial=trial,
            a=a.entries,
            v=v.entries,
            p_enum_numerator=exact.numerator,
            p_enum_denominator=exact.denominator,
            p_fourier=four.probability,
            imaginary_residual=four.imaginary_residual,
            error_value=err.value,
            deviation=dev,
            rel_deviation=dev / center,
        )

    rows = [row for part in _map_chunks(
        lambda r: [_one(t) for t in range(r[0], r[1])],
        _ranges(0, trials, _CAMPAIGN_CHUNK),
        threads,
    ) for row in part]
    violations = []
    center = q ** (-n)
    for row in rows:
        gap = abs(row.p_fourier - row.p_enum_numerator / row.p_enum_denominator)
        if gap > 1e-9 or row.imaginary_residual > 1e-9:
            violations.append({"kind": "fourier-mismatch", "trial": row.trial, "a": list(row.a), "v": list(row.v), "gap": gap})
        if row.deviation > center * row.error_value + 1e-12:
            violations.append(
                {
                    "kind": "deviation-bound",
                    "trial": row.trial,
                    "a": list(row.a),
                    "v": list(row.v),
                    "deviation": row.deviation,
                    "allowed": center * row.error_value,
                }
            )
    return LemmaReport(
        n=n,
        q=q,
        tau=tau,
        trials=trials,
        max_fourier_gap=max((abs(r.p_fourier - r.p_enum_numerator / r.p_enum_denominator) for r in rows), default=0.0),
        max_imaginary_residual=max((r.imaginary_residual for r in rows), default=0.0),
        max_rel_deviation=max((r.rel_deviation for r in rows), default=0.0),
        violations=violations,
        rows=rows,
    )


@dataclass(frozen=True)
class PropsReport:
    """Campaign verdict for the pair-count bounds and graph invariants."""

    n: int
    q: int
    tau: float
    trials: int
    checked_main: int
    failures_main: int
    failures_inner: int
    failures_triangle: int
    failures_mantel: int
    counterexamples: list[dict] = field(default_factory=list)


def run_verify_props(
    n: int,
    q: int,
    trials: int = DEFAULT_TRIALS,
    tau: float | None = None,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    nonzero_entries: bool = False,
    log_base: float = math.e,
) -> PropsReport:
    """Random campaign over (a, l) pairs for the surviving-pair bounds.

    Checks, per draw: the regime bound on N (only when a is outside the
    near-constant family and l is nonzero, the hypotheses of the claim),
    the cross-support bound N >= s (|supp a| - s) when s <= |supp a|,
    triangle-freeness of the cancellation graph, and Mantel's edge cap.
    ``nonzero_entries`` draws coordinates from [1, q) instead of [0, q),
    the worst case for the graph invariants since every coordinate is a
    vertex.
    """
    validate_modulus(q)
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if tau is None:
        tau = default_threshold(n, log_base)
    low = 1 if nonzero_entries else 0

    denom = 2.0 * (math.log(n, log_base) ** 2)

    def _chunk(r: tuple[int, int]) -> tuple[int, int, int, int, int, list[dict]]:
        lo, hi = r
        a_rows = np.empty((hi - lo, n), dtype=np.int64)
        l_rows = np.empty((hi - lo, n), dtype=np.int64)
        for t in range(lo, hi):
            rng = _trial_rng(seed, t)
            a_rows[t - lo] = rng.integers(low, q, n)
            l_rows[t - lo] = rng.integers(low, q, n)
        stats = batch_pair_stats(a_rows, l_rows, q)
        s = stats["s"]
        N = stats["N"]
        hyp = (stats["max_level"] < n - tau) & (s >= 1)
        small = s < tau / 2.0
        claimed = np.where(small, s * n / denom, np.minimum(s * s / 20.0, s * n / denom))
        main_fail = hyp & (N < claimed)
        inner_applicable = s <= stats["supp_a"]
        inner_fail = inner_applicable & (N < s * (stats["supp_a"] - s))
        tri_fail = ~stats["triangle_free"]
        vc = stats["vertices"]
        mantel_fail = stats["edges"] > vc * vc // 4
        examples: list[dict] = []
        for t in np.nonzero(main_fail | inner_fail | tri_fail | mantel_fail)[0]:
            kinds = [
                kind
                for kind, flag in (
                    ("pair-bound", main_fail[t]),
                    ("cross-support", inner_fail[t]),
                    ("triangle", tri_fail[t]),
                    ("mantel", mantel_fail[t]),
                )
                if flag
            ]
            examples.append(
                {
                    "kinds": kinds,
                    "trial": int(lo + t),
                    "n": n,
                    "q": q,
                    "a": [int(x) for x in a_rows[t]],
                    "l": [int(x) for x in l_rows[t]],
                    "N": int(N[t]),
                    "claimed_bound": float(claimed[t]),
                    "regime": "small-support" if small[t] else "large-support",
                }
            )
        return (
            int(hyp.sum()),
            int(main_fail.sum()),
            int(inner_fail.sum()),
            int(tri_fail.sum()),
            int(mantel_fail.sum()),
            examples,
        )

    parts = _map_chunks(_chunk, _ranges(0, trials, _CAMPAIGN_CHUNK), threads)
    checked = sum(p[0] for p in parts)
    fails = [sum(p[i] for p in parts) for i in (1, 2, 3, 4)]
    examples = [e for p in parts for e in p[5]]
    return PropsReport(
        n=n,
        q=q,
        tau=tau,
        trials=trials,
        checked_main=checked,
        failures_main=fails[0],
        failures_inner=fails[1],
        failures_triangle=fails[2],
        failures_mantel=fails[3],
        counterexamples=examples,
    )


@dataclass(frozen=True)
class ErrorBoundRow:
    """One dimension of the analytic bound table."""

    n: int
    q: int
    tau: float
    log_small_support: float
    log_large_support: float
    log_total: float
    log_structured_weight: float


@dataclass(frozen=True)
class ErrorBoundTable:
    """Analytic bound across a dimension grid, with a monotonicity verdict."""

    exponent: float
    rows: list[ErrorBoundRow]
    monotone_decreasing: bool
    violations: list[dict] = field(default_factory=list)


def run_error_bound_table(
    n_values: Sequence[int],
    exponent: float = 2.0,
    q: int | None = None,
    tau: float | None = None,
    log_base: float = math.e,
) -> ErrorBoundTable:
    """Evaluate the analytic bound on a dimension grid and check decrease.

    Each row gets q = next_valid_modulus(n, exponent) unless a fixed q is
    supplied.  The verdict asserts log_total strictly decreases along
    increasing n; any adjacent non-decrease is reported as a violation.
    """
    rows: list[ErrorBoundRow] = []
    for n in n_values:
        qn = q if q is not None else next_valid_modulus(n, exponent)
        res = analytic_error_bound(n, qn, tau, log_base)
        rows.append(
            ErrorBoundRow(
                n=n,
                q=qn,
                tau=res.tau,
                log_small_support=res.log_small_support,
                log_large_support=res.log_large_support,
                log_total=res.log_total,
                log_structured_weight=structured_family_log_weight(n, qn, tau, log_base),
            )
        )
    violations = []
    for prev, cur in zip(rows, rows[1:]):
        if not cur.log_total < prev.log_total:
            violations.append(
                {
                    "kind": "monotonicity",
                    "n_prev": prev.n,
                    "n": cur.n,
                    "log_total_prev": prev.log_total,
                    "log_total": cur.log_total,
                }
            )
    return ErrorBoundTable(
        exponent=exponent,
        rows=rows,
        monotone_decreasing=not violations,
        violations=violations,
    )
