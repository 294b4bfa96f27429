"""Timing comparison of the compiled and pure-Python kernel backends.

Both backends are imported directly (bypassing the import-time
selection) and run on identical workloads, so the reported outputs can
be compared for equality as well as speed.  Run from the repository
root after building the extension in place:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 5 --json results.json
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from symsing._bits import sample_words
from symsing._kernels import _pure

try:
    from symsing._kernels import _core
except ImportError:
    _core = None


def _sampled_words(seed: int, index: int, n: int) -> np.ndarray:
    return np.array(sample_words(seed, index, n), dtype=np.uint64)


def _workloads() -> list[tuple[str, str, tuple]]:
    a7 = np.arange(1, 8, dtype=np.int64) % 7
    v7 = np.array([3, 1, 4, 1, 5, 2, 6], dtype=np.int64)
    a8 = np.array([1, 2, 3, 4, 0, 1, 2, 3], dtype=np.int64)
    return [
        ("enum_scan", "n=5 q=3, all 2^15 codes", (5, 3, 0, 1 << 15)),
        ("mc_nullity_hist", "n=40 q=3, 4000 samples", (40, 3, 2024, 0, 4000)),
        ("fourier_sum", "n=7 q=7, 7^7 frequency codes", (a7, v7, 7, 0, 7**7)),
        ("error_sums", "n=8 q=5, 5^8 frequency codes", (a8, 5, 0, 5**8)),
    ]


def _loop_workloads() -> list[tuple[str, str, list[tuple]]]:
    # Per-matrix kernels are too fast to time singly; loop over a batch.
    rank_args = [(_sampled_words(7, i, 60), 60, 5) for i in range(300)]
    det_args = [(_sampled_words(11, i, 12), 12) for i in range(300)]
    return [
        ("rank_mod", "n=60 q=5, 300 matrices", rank_args),
        ("det_bareiss", "n=12, 300 matrices", det_args),
    ]


def _best_of(repeat: int, fn) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _matches(a, b) -> bool:
    # Float accumulators differ across backends by summation order only;
    # integer outputs must agree exactly.
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(_matches(x, y) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return bool(np.isclose(a, b, rtol=1e-12, atol=1e-12))
    return a == b


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timings per kernel, best kept")
    parser.add_argument("--json", help="also write results as JSON to this path")
    args = parser.parse_args(argv)

    if _core is None:
        print("compiled backend not built; run pip install -e . first", file=sys.stderr)
        return 1

    rows = []
    for name, label, call_args in _workloads():
        t_c, out_c = _best_of(args.repeat, lambda: getattr(_core, name)(*call_args))
        t_p, out_p = _best_of(args.repeat, lambda: getattr(_pure, name)(*call_args))
        rows.append((name, label, t_c, t_p, _matches(out_c, out_p)))
    for name, label, arg_list in _loop_workloads():
        fn_c = getattr(_core, name)
        fn_p = getattr(_pure, name)
        t_c, out_c = _best_of(args.repeat, lambda: [fn_c(*a) for a in arg_list])
        t_p, out_p = _best_of(args.repeat, lambda: [fn_p(*a) for a in arg_list])
        rows.append((name, label, t_c, t_p, out_c == out_p))

    width = max(len(f"{name}  {label}") for name, label, *_ in rows)
    print(f"{'kernel / workload':<{width}}  {'compiled':>10}  {'pure':>10}  {'speedup':>8}  match")
    for name, label, t_c, t_p, agree in rows:
        head = f"{name}  {label}"
        print(
            f"{head:<{width}}  {t_c * 1e3:>8.2f}ms  {t_p * 1e3:>8.2f}ms"
            f"  {t_p / t_c:>7.1f}x  {'yes' if agree else 'NO'}"
        )

    if args.json:
        payload = [
            {"kernel": name, "workload": label, "compiled_s": t_c, "pure_s": t_p,
             "speedup": t_p / t_c, "outputs_match": agree}
            for name, label, t_c, t_p, agree in rows
        ]
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")

    if any(not agree for *_, agree in rows):
        print("backend outputs disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
