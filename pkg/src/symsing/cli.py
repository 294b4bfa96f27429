"""Command-line front end.

One subcommand per experiment.  Results go to stdout (or ``--out``) as
JSON or CSV; the process exits 0 when every checked property held, 1
when any violation was recorded, and 2 on usage or guard errors.  For a
fixed parameter set the emitted bytes are identical run to run and do
not depend on ``--threads``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys

from . import _kernels, __version__
from .errors import GuardError, RejectionSamplingError
from .experiments import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    run_error_bound_table,
    run_exact_p,
    run_expected_kernel,
    run_markov_report,
    run_mc_p,
    run_verify_lemma,
    run_verify_props,
)
from .matrices import next_valid_modulus


def _parse_int(text: str) -> int:
    # Accept 0x-prefixed seeds.
    return int(text, 0)


def _add_common(sp: argparse.ArgumentParser, *, samples: bool = False, trials: bool = False, tau: bool = False) -> None:
    sp.add_argument("--threads", type=int, default=1, help="worker threads (never changes the output)")
    sp.add_argument("--format", choices=("json", "csv"), default="json", help="output format")
    sp.add_argument("--out", type=str, default=None, help="write output here instead of stdout")
    if samples:
        sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="number of sampled matrices")
        sp.add_argument("--seed", type=_parse_int, default=None, help="stream seed (default: SYMSING_SEED or 0xFE12)")
    if trials:
        sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="number of random trials")
        sp.add_argument("--seed", type=_parse_int, default=None, help="campaign seed (default: SYMSING_SEED or 0xFE12)")
    if tau:
        sp.add_argument("--tau", type=float, default=None, help="near-constancy threshold (default n / log(n)**2)")
        sp.add_argument("--log-base", type=float, default=math.e, help="base of the logarithm in thresholds and bounds")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="symsing",
        description="Exact and Monte-Carlo studies of singularity for random symmetric sign matrices over Z_q.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("exact-p", help="enumerate all matrices at one dimension, count singular ones")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=None, help="odd prime modulus (default: matched to n via --c)")
    sp.add_argument("--c", type=float, default=2.0, help="log exponent used when deriving q from n")
    _add_common(sp)

    sp = sub.add_parser("mc-p", help="sample matrices, estimate singularity probability mod q")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--c", type=float, default=2.0)
    _add_common(sp, samples=True)

    sp = sub.add_parser("ek", help="expected kernel size E[K], exact or sampled")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--c", type=float, default=2.0)
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    _add_common(sp, samples=True)

    sp = sub.add_parser("markov", help="sampled E[K] at the n-matched modulus and the bound E[K]/q")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=None, help="override the derived modulus")
    sp.add_argument("--c", type=float, default=2.0)
    _add_common(sp, samples=True)

    sp = sub.add_parser("verify-lemma", help="random campaign for the atom-probability deviation bound")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--c", type=float, default=2.0)
    _add_common(sp, trials=True, tau=True)

    sp = sub.add_parser("verify-props", help="random campaign for pair-count bounds and graph invariants")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--c", type=float, default=2.0)
    sp.add_argument("--nonzero-entries", action="store_true", help="draw coordinates from [1, q) instead of [0, q)")
    _add_common(sp, trials=True, tau=True)

    sp = sub.add_parser("error-bound", help="analytic error bound across a dimension grid")
    sp.add_argument("--n", type=int, nargs="+", required=True, help="dimension grid (one or more values)")
    sp.add_argument("--q", type=int, default=None, help="fixed modulus for every row (default: matched per n)")
    sp.add_argument("--c", type=float, default=2.0)
    sp.add_argument("--tau", type=float, default=None)
    sp.add_argument("--log-base", type=float, default=math.e)
    _add_common(sp)

    return p


def _resolve_seed(args: argparse.Namespace) -> int | None:
    seed = getattr(args, "seed", None)
    if seed is not None:
        return seed
    env = os.environ.get("SYMSING_SEED")
    if env:
        return int(env, 0)
    return DEFAULT_SEED


def _resolve_q(args: argparse.Namespace) -> int:
    if args.q is not None:
        return args.q
    n = args.n if isinstance(args.n, int) else args.n[0]
    return next_valid_modulus(n, args.c)


def _asdict(obj) -> dict:
    return dataclasses.asdict(obj)


def _run(args: argparse.Namespace) -> tuple[dict, list[dict], list[dict], dict]:
    """Dispatch one subcommand; returns (config, rows, violations, summary)."""
    cmd = args.command
    if cmd == "exact-p":
        q = _resolve_q(args)
        res = run_exact_p(args.n, q, threads=args.threads)
        config = {"n": args.n, "q": q}
        row = _asdict(res)
        row["p_rational"] = res.p_rational
        row["p_mod_q"] = res.p_mod_q
        violations = []
        if res.oracle_mismatches:
            violations.append({"kind": "oracle-mismatch", "count": res.oracle_mismatches})
        if res.implication_failures:
            violations.append({"kind": "containment", "count": res.implication_failures})
        return config, [row], violations, {}

    if cmd == "mc-p" or (cmd == "ek" and args.mode == "mc"):
        q = _resolve_q(args)
        seed = _resolve_seed(args)
        stats = run_mc_p(args.n, q, samples=args.samples, seed=seed, threads=args.threads)
        config = {"n": args.n, "q": q, "samples": args.samples, "seed": seed}
        row = _asdict(stats)
        row["markov_consistent"] = stats.markov_consistent
        violations = [] if stats.markov_consistent else [{"kind": "markov-consistency"}]
        return config, [row], violations, {}

    if cmd == "ek":
        q = _resolve_q(args)
        seed = _resolve_seed(args)
        stats = run_expected_kernel(args.n, q, mode=args.mode, samples=args.samples, seed=seed, threads=args.threads)
        config = {"n": args.n, "q": q, "mode": args.mode}
        row = _asdict(stats)
        violations = []
        if stats.routes_agree is False:
            violations.append(
                {
                    "kind": "route-disagreement",
                    "matrixwise": stats.e_k_numerator,
                    "vectorwise": stats.vectorwise_numerator,
                }
            )
        return config, [row], violations, {}

    if cmd == "markov":
        seed = _resolve_seed(args)
        rep = run_markov_report(
            args.n, exponent=args.c, samples=args.samples, seed=seed, threads=args.threads, q=args.q
        )
        config = {"n": args.n, "q": rep.q, "c": args.c, "samples": args.samples, "seed": seed}
        row = _asdict(rep.stats)
        row["consistent"] = rep.consistent
        violations = [] if rep.consistent else [{"kind": "markov-consistency"}]
        return config, [row], violations, {}

    if cmd == "verify-lemma":
        q = _resolve_q(args)
        seed = _resolve_seed(args)
        rep = run_verify_lemma(
            args.n, q, trials=args.trials, tau=args.tau, seed=seed, threads=args.threads, log_base=args.log_base
        )
        config = {"n": args.n, "q": q, "trials": args.trials, "tau": rep.tau, "seed": seed, "log_base": args.log_base}
        rows = [_asdict(r) for r in rep.rows]
        summary = {
            "max_fourier_gap": rep.max_fourier_gap,
            "max_imaginary_residual": rep.max_imaginary_residual,
            "max_rel_deviation": rep.max_rel_deviation,
        }
        return config, rows, list(rep.violations), summary

    if cmd == "verify-props":
        q = _resolve_q(args)
        seed = _resolve_seed(args)
        rep = run_verify_props(
            args.n,
            q,
            trials=args.trials,
            tau=args.tau,
            seed=seed,
            threads=args.threads,
            nonzero_entries=args.nonzero_entries,
            log_base=args.log_base,
        )
        config = {
            "n": args.n,
            "q": q,
            "trials": args.trials,
            "tau": rep.tau,
            "seed": seed,
            "nonzero_entries": args.nonzero_entries,
            "log_base": args.log_base,
        }
        row = {
            "n": rep.n,
            "q": rep.q,
            "tau": rep.tau,
            "trials": rep.trials,
            "checked_main": rep.checked_main,
            "failures_main": rep.failures_main,
            "failures_inner": rep.failures_inner,
            "failures_triangle": rep.failures_triangle,
            "failures_mantel": rep.failures_mantel,
        }
        return config, [row], list(rep.counterexamples), {}

    if cmd == "error-bound":
        table = run_error_bound_table(args.n, exponent=args.c, q=args.q, tau=args.tau, log_base=args.log_base)
        config = {"n": args.n, "q": args.q, "c": args.c, "tau": args.tau, "log_base": args.log_base}
        rows = [_asdict(r) for r in table.rows]
        summary = {"monotone_decreasing": table.monotone_decreasing}
        return config, rows, list(table.violations), summary

    raise ValueError(f"unknown command {cmd!r}")


def _csv_cell(value) -> str:
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True)
    return "" if value is None else str(value)


def _render(command: str, config: dict, rows: list[dict], violations: list[dict], summary: dict, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "command": command,
            "backend": _kernels.BACKEND,
            "config": config,
        }
        if summary:
            payload["summary"] = summary
        payload["results"] = rows
        payload["violations"] = violations
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config, rows, violations, summary = _run(args)
    except (GuardError, RejectionSamplingError, ValueError) as exc:
        print(f"symsing: error: {exc}", file=sys.stderr)
        return 2
    text = _render(args.command, config, rows, violations, summary, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if violations and args.format == "csv":
        # CSV keeps the result table clean; violations still reach the user.
        print(json.dumps({"violations": violations}), file=sys.stderr)
    return 1 if violations else 0


if __name__ == "__main__":
    sys.exit(main())
