"""Acceptance gate: one test per headline property, one PASS/FAIL line each.

Every test times itself against a runtime budget and prints a single
verdict line; conftest replays the full scorecard after the run summary
so it survives output capture.  Tolerances are pinned here and nowhere
else; a failing criterion stays red rather than being loosened.
"""

import json
import math
import os
import subprocess
import sys
import time

import conftest
import numpy as np
import pytest

from symsing import (
    ResidueVector,
    cos_decay_check,
    error_term,
    exact_event_probability,
    is_odd_prime,
    next_valid_modulus,
    prob_fourier,
    run_error_bound_table,
    run_exact_p,
    run_expected_kernel,
    run_mc_p,
    run_verify_props,
)
from symsing.fourier import analytic_error_bound
from symsing.structure import default_threshold


def _verdict(name: str, limit: float, t0: float, ok: bool, detail: str = "") -> None:
    elapsed = time.perf_counter() - t0
    in_time = elapsed < limit
    status = "PASS" if (ok and in_time) else "FAIL"
    line = f"[acceptance] {name}: {status} ({elapsed:.2f}s / limit {limit:.0f}s)"
    if detail:
        line += f" {detail}"
    print(line)
    conftest.VERDICT_LINES.append(line)
    assert ok, f"{name}: {detail}"
    assert in_time, f"{name}: runtime {elapsed:.2f}s over the {limit:.0f}s budget"


def _vectors(n: int, q: int):
    for code in range(q**n):
        yield ResidueVector.of([(code // q**p) % q for p in range(n - 1, -1, -1)], q)


def test_01_character_sum_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    n, q = 2, 3
    for a in _vectors(n, q):
        for v in _vectors(n, q):
            gap = abs(prob_fourier(a, v).probability - exact_event_probability(n, q, a, v).probability)
            worst = max(worst, gap)
    rng = np.random.default_rng(0xFE12)
    n = 3
    for _ in range(50):
        a = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
        v = ResidueVector.of([int(x) for x in rng.integers(0, q, n)], q)
        gap = abs(prob_fourier(a, v).probability - exact_event_probability(n, q, a, v).probability)
        worst = max(worst, gap)
    _verdict("01-character-sum-exactness", 5, t0, worst <= 1e-9, f"max_gap={worst:.2e}")


def test_02_halfspace_bound_for_nonzero_targets():
    # Pr[M a = 0] <= 2**-n for every nonzero a: exact integer comparison
    # numerator <= 2**(m - n) with m the packed length.
    t0 = time.perf_counter()
    q = 3
    failures = 0
    checked = 0
    for n in (1, 2, 3, 4):
        cap = 1 << (n * (n + 1) // 2 - n)
        zero = ResidueVector.zero(n, q)
        for a in _vectors(n, q):
            if a.is_zero:
                continue
            checked += 1
            if exact_event_probability(n, q, a, zero).numerator > cap:
                failures += 1
    _verdict(
        "02-halfspace-bound",
        30,
        t0,
        failures == 0,
        f"checked={checked} over_cap={failures}",
    )


def test_03_small_n_ground_truth_and_oracle_agreement():
    t0 = time.perf_counter()
    r1 = run_exact_p(1, 3)
    r2 = run_exact_p(2, 3)
    ok = (r1.rational_singular, r1.total) == (0, 2) and (r2.rational_singular, r2.total) == (4, 8)
    detail = [f"p(1)={r1.rational_singular}/{r1.total}", f"p(2)={r2.rational_singular}/{r2.total}"]
    mismatches = 0
    implications = 0
    for n in (1, 2, 3, 4, 5):
        for q in (3, 5):
            r = run_exact_p(n, q, threads=4)
            mismatches += r.oracle_mismatches
            implications += r.implication_failures
    ok = ok and mismatches == 0 and implications == 0
    detail.append(f"oracle_mismatches={mismatches} containment_failures={implications}")
    _verdict("03-small-n-ground-truth", 120, t0, ok, " ".join(detail))


def test_04_triangle_free_cancellation_graphs():
    t0 = time.perf_counter()
    tri = mantel = 0
    for q in (3, 5, 7, 11):
        rep = run_verify_props(30, q, trials=10_000, seed=0xFE12, threads=4, nonzero_entries=True)
        tri += rep.failures_triangle
        mantel += rep.failures_mantel
    _verdict(
        "04-triangle-free-graphs",
        60,
        t0,
        tri == 0 and mantel == 0,
        f"trials=40000 triangle_failures={tri} mantel_failures={mantel}",
    )


def test_05_cross_support_pair_bound():
    t0 = time.perf_counter()
    rep = run_verify_props(100, 5, trials=10_000, seed=0xFE12, threads=4)
    _verdict(
        "05-cross-support-bound",
        30,
        t0,
        rep.failures_inner == 0,
        f"trials={rep.trials} failures={rep.failures_inner}",
    )


def test_06_deviation_bound_exhaustive_small_case():
    # All 72 pairs: the 8 nonzero targets a over Z_3^2 (the vectors the
    # near-constant family is meant to exclude) against all 9 right-hand
    # sides v.
    t0 = time.perf_counter()
    n, q = 2, 3
    center = q**-n
    checked = 0
    violations = 0
    worst = 0.0
    for a in _vectors(n, q):
        if a.is_zero:
            continue
        budget = center * error_term(a).value + 1e-12
        for v in _vectors(n, q):
            checked += 1
            dev = abs(exact_event_probability(n, q, a, v).probability - center)
            worst = max(worst, dev - budget)
            if dev > budget:
                violations += 1
    _verdict(
        "06-deviation-bound",
        10,
        t0,
        checked == 72 and violations == 0,
        f"checked={checked} violations={violations} worst_slack={worst:.2e}",
    )


def test_07_cosine_decay_all_small_primes():
    t0 = time.perf_counter()
    primes = [q for q in range(3, 102) if is_odd_prime(q)]
    bad = [q for q in primes if not cos_decay_check(q)]
    _verdict("07-cosine-decay", 1, t0, not bad, f"primes={len(primes)} failing={bad}")


def test_08_expected_kernel_size_witnesses():
    t0 = time.perf_counter()
    detail = []
    ek22 = run_expected_kernel(2, 3)
    ok = ek22.e_k == 2.0 and (ek22.e_k_numerator, ek22.e_k_denominator) == (16, 8)
    detail.append(f"exact_ek(2,3)={ek22.e_k_numerator}/{ek22.e_k_denominator}")
    routes_ok = True
    for n in (1, 2, 3, 4):
        for q in (3, 5):
            ek = run_expected_kernel(n, q, threads=4)
            routes_ok = routes_ok and ek.routes_agree is True
    ok = ok and routes_ok
    detail.append(f"routes_agree={routes_ok}")
    mc = run_mc_p(50, 5, samples=20_000, seed=42, threads=4)
    in_band = 1.5 <= mc.e_k <= 2.5
    ok = ok and in_band
    detail.append(f"mc_ek={mc.e_k:.4f} band=[1.5,2.5]")
    _verdict("08-expected-kernel-size", 300, t0, ok, " ".join(detail))


def test_09_analytic_bound_fidelity_and_decay():
    t0 = time.perf_counter()
    n, q = 20, 3
    res = analytic_error_bound(n, q)
    tau = default_threshold(n)
    s1 = sum(math.comb(n, s) * q**s * math.exp(-s * tau / q**2) for s in range(1, n + 1))
    s2 = sum(
        math.comb(n, s) * (q - 1) ** s * math.exp(-(s * s) / (20 * q**2))
        for s in range(math.ceil(tau), n + 1)
    )
    fid_gap = max(
        abs(res.log_small_support - math.log(s1)),
        abs(res.log_large_support - math.log(s2)),
        abs(res.log_total - math.log(s1 + s2)),
    )
    fidelity_ok = fid_gap <= 1e-9
    grid = [10**4, 10**5, 10**6, 10**7]
    table = run_error_bound_table(grid, exponent=2.0)
    totals = [r.log_total for r in table.rows]
    decay_ok = table.monotone_decreasing
    detail = (
        f"fidelity_gap={fid_gap:.2e} "
        f"log_totals={['%.1f' % t for t in totals]} "
        f"violations={table.violations}"
    )
    _verdict("09-analytic-bound", 10, t0, fidelity_ok and decay_ok, detail)


def _cli(args, out_path):
    env = dict(os.environ)
    env.pop("SYMSING_SEED", None)
    proc = subprocess.run(
        [sys.executable, "-m", "symsing", *args, "--out", str(out_path)],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0, proc.stderr
    with open(out_path, "rb") as fh:
        return fh.read()


def test_10_cli_determinism_across_threads(tmp_path):
    t0 = time.perf_counter()
    ok = True
    detail = []
    for label, args in (
        ("mc-p", ["mc-p", "--n", "20", "--q", "5", "--samples", "4000", "--seed", "123"]),
        ("ek-mc", ["ek", "--n", "15", "--q", "3", "--mode", "mc", "--samples", "4000", "--seed", "321"]),
    ):
        blobs = [
            _cli(args + ["--threads", str(t)], tmp_path / f"{label}-{t}-{run}.json")
            for t in (1, 8)
            for run in (1, 2)
        ]
        same = all(b == blobs[0] for b in blobs)
        ok = ok and same
        detail.append(f"{label}:{'identical' if same else 'DIVERGENT'}")
    _verdict("10-cli-determinism", 60, t0, ok, " ".join(detail))
