"""Character sums, error terms, the analytic log-space bound."""

import math

import numpy as np
import pytest

from symsing import (
    GuardError,
    ResidueVector,
    analytic_error_bound,
    cos_decay_check,
    error_term,
    exact_event_probability,
    prob_fourier,
    structured_family_log_weight,
)
from symsing import _kernels
from symsing.structure import default_threshold


def test_prob_fourier_hand_values():
    # n=1, q=3, a=(1): M a is never 0, is a with prob 1/2.
    a = ResidueVector.of([1], 3)
    assert prob_fourier(a, ResidueVector.zero(1, 3)).probability == pytest.approx(0.0, abs=1e-12)
    assert prob_fourier(a, a).probability == pytest.approx(0.5, abs=1e-12)


def test_prob_fourier_matches_enumeration_exhaustively():
    n, q = 2, 3
    for acode in range(q**n):
        for vcode in range(q**n):
            a = ResidueVector.of([acode // q, acode % q], q)
            v = ResidueVector.of([vcode // q, vcode % q], q)
            four = prob_fourier(a, v)
            exact = exact_event_probability(n, q, a, v)
            assert four.probability == pytest.approx(exact.probability, abs=1e-9)
            assert four.imaginary_residual < 1e-9


def test_prob_fourier_random_pairs_n3():
    rng = np.random.default_rng(61)
    n, q = 3, 5
    for _ in range(20):
        a = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
        v = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
        four = prob_fourier(a, v)
        exact = exact_event_probability(n, q, a, v)
        assert four.probability == pytest.approx(exact.probability, abs=1e-9)


def test_fourier_sum_is_partition_invariant():
    a = np.array([1, 2, 0, 1], dtype=np.int64)
    v = np.array([0, 1, 2, 2], dtype=np.int64)
    q = 3
    total = q**4
    full = _kernels.fourier_sum(a, v, q, 0, total)
    cut = 17
    lo = _kernels.fourier_sum(a, v, q, 0, cut)
    hi = _kernels.fourier_sum(a, v, q, cut, total)
    assert full[0] == pytest.approx(lo[0] + hi[0], abs=1e-12)
    assert full[1] == pytest.approx(lo[1] + hi[1], abs=1e-12)


def test_error_term_n1_and_n2():
    # n=1: one pairless nonzero frequency per residue, every factor empty.
    a = ResidueVector.of([1], 3)
    res = error_term(a)
    assert res.value == pytest.approx(2.0, abs=1e-12)
    assert res.exp_bound == pytest.approx(2.0, abs=1e-12)
    # n=2, a=(1,2): cancelling frequencies (1,1) and (2,2) contribute 1,
    # the other six contribute cos(2 pi / 3) in absolute value.
    a = ResidueVector.of([1, 2], 3)
    res = error_term(a)
    assert res.value == pytest.approx(2.0 + 6 * 0.5, abs=1e-12)
    assert res.exp_bound == pytest.approx(2.0 + 6 * math.exp(-2.0 / 9.0), abs=1e-12)


def test_error_bound_dominates_value():
    rng = np.random.default_rng(67)
    for _ in range(15):
        n = int(rng.integers(2, 7))
        q = int(rng.choice([3, 5]))
        a = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
        res = error_term(a)
        assert res.value <= res.exp_bound + 1e-12


def test_deviation_bound_holds_for_every_target():
    # |Pr[M a = v] - q**-n| <= q**-n * error(a), any a, any v.
    rng = np.random.default_rng(71)
    n, q = 3, 3
    center = q**-n
    for _ in range(12):
        a = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
        err = error_term(a).value
        for _ in range(4):
            v = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
            p = exact_event_probability(n, q, a, v).probability
            assert abs(p - center) <= center * err + 1e-12


def test_fourier_guard():
    with pytest.raises(GuardError):
        prob_fourier(ResidueVector.zero(30, 3), ResidueVector.zero(30, 3))
    with pytest.raises(GuardError):
        error_term(ResidueVector.zero(30, 3))


def test_vector_validation():
    with pytest.raises(ValueError):
        prob_fourier(ResidueVector.of([1], 3), ResidueVector.of([1], 5))
    with pytest.raises(ValueError):
        prob_fourier(ResidueVector.of([1], 3), ResidueVector.of([1, 1], 3))


def test_cos_decay_for_small_primes():
    for q in (3, 5, 7, 11, 13, 101):
        assert cos_decay_check(q)


def test_cos_decay_is_tight_at_the_edge():
    # Residues nearest 0 and q come closest to the bound.
    q = 7
    worst = max(abs(math.cos(math.pi * m / q)) for m in range(1, q))
    assert worst <= math.exp(-2.0 / q**2)
    assert worst > math.exp(-2.0 / q**2) * 0.9


def _log_sum(log_terms: list[float]) -> float:
    if not log_terms:
        return -math.inf
    shift = max(log_terms)
    return shift + math.log(math.fsum(math.exp(t - shift) for t in log_terms))


def _direct_bound_logs(n: int, q: int, tau: float) -> tuple[float, float, float]:
    # Independent oracle: exact integer binomials, one global max shift.
    # The sums themselves exceed float range already at n=300, q=11, so
    # the oracle has to stay in logs too; it still differs from the
    # implementation (no running recurrence, no streaming accumulator).
    ls1 = _log_sum(
        [math.log(math.comb(n, s)) + s * (math.log(q) - tau / q**2) for s in range(1, n + 1)]
    )
    ls2 = _log_sum(
        [
            math.log(math.comb(n, s)) + s * math.log(q - 1) - s * s / (20 * q**2)
            for s in range(math.ceil(tau), n + 1)
        ]
    )
    return ls1, ls2, _log_sum([ls1, ls2])


@pytest.mark.parametrize("n,q", [(20, 3), (50, 5), (300, 11)])
def test_analytic_bound_matches_direct_summation(n, q):
    # Absolute agreement of logs is relative agreement of the sums.
    res = analytic_error_bound(n, q)
    ls1, ls2, ltot = _direct_bound_logs(n, q, default_threshold(n))
    assert res.log_small_support == pytest.approx(ls1, abs=1e-9)
    assert res.log_large_support == pytest.approx(ls2, abs=1e-9)
    assert res.log_total == pytest.approx(ltot, abs=1e-9)


def test_analytic_bound_respects_explicit_tau():
    res = analytic_error_bound(40, 3, tau=40.0)
    ls1, ls2, _ = _direct_bound_logs(40, 3, 40.0)
    assert res.log_small_support == pytest.approx(ls1, abs=1e-9)
    assert res.log_large_support == pytest.approx(ls2, abs=1e-9)


def test_analytic_bound_empty_large_support_sum():
    # tau above n empties the quadratic-regime sum.
    res = analytic_error_bound(10, 3, tau=11.0)
    assert res.log_large_support == -math.inf
    assert res.log_total == res.log_small_support


def test_analytic_bound_large_n_runs_in_log_space():
    # Would overflow instantly outside log space: C(10**6, 5*10**5) alone
    # has ~300000 digits.
    res = analytic_error_bound(10**6, 3)
    assert math.isfinite(res.log_total)


def test_analytic_bound_validation():
    with pytest.raises(ValueError):
        analytic_error_bound(1, 3)
    with pytest.raises(ValueError):
        analytic_error_bound(100, 4)
    with pytest.raises(ValueError):
        analytic_error_bound(100, 3, tau=0.0)


def test_structured_family_log_weight_matches_direct():
    n, q = 200, 3
    tau = default_threshold(n)
    k = math.ceil(tau)
    direct = math.log(math.comb(n, k)) + (k + 1) * math.log(q) - n * math.log(2)
    assert structured_family_log_weight(n, q) == pytest.approx(direct, rel=1e-12)
    assert math.isinf(structured_family_log_weight(5, 3, tau=6.0))


def test_structured_family_weight_decays_in_n():
    vals = [structured_family_log_weight(n, 3) for n in (100, 1000, 10000)]
    assert vals[0] > vals[1] > vals[2]
