"""Command-line interface: the only I/O layer.

Data goes to --out or stdout; diagnostics go to stderr.  Exit codes:
0 success (and, for verify, every gating check passed), 1 a gating check
failed, 2 invalid input, unwritable output, or a corrupt cache.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import RSpinError
from .correlator import extract_correlators
from .serialize import (
    TauCache,
    records_to_csv,
    records_to_json,
    reports_to_json,
    serialize_tau,
)
from .solver import compute_tau
from .verify import (
    check_commutators,
    check_exponential_agreement,
    check_gradings,
    check_selection,
    check_string_dilaton,
    check_w_constraints,
)

CACHE_ENV = "RSPIN_CACHE_DIR"

CHECKS = ("wconstraints", "string_dilaton", "grading", "selection")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rspin",
        description=(
            "Exact computation of r-spin intersection numbers: solve the "
            "W-constraints degree by degree, extract correlators, and verify "
            "every checkable identity in exact arithmetic."
        ),
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-q", "--quiet", action="store_true", help="suppress progress output")
    verbosity.add_argument("-v", "--verbose", action="store_true", help="report timings on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--r", type=int, required=True, help="branching index r >= 2")
        p.add_argument("--degree", type=int, required=True, help="maximal graded degree >= 0")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument(
            "--cache-dir",
            default=os.environ.get(CACHE_ENV),
            help=f"piece cache directory (default: ${CACHE_ENV})",
        )
        p.add_argument("--workers", type=int, default=1, help="worker threads per degree")

    p = sub.add_parser("compute", help="compute the graded tau expansion")
    common(p)

    p = sub.add_parser("correlators", help="extract exact correlators")
    common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="run exact identity checks")
    common(p)
    p.add_argument(
        "--checks",
        default=",".join(CHECKS),
        help=f"comma-separated subset of {{{','.join(CHECKS)}}}",
    )
    p.add_argument("--m-max", type=int, default=None, help="largest constraint mode index")

    p = sub.add_parser("commutator", help="commutator and exponential-formula diagnostics")
    common(p)
    return parser


def _validate(args) -> None:
    if args.r < 2:
        raise RSpinError(f"--r must be >= 2, got {args.r}")
    if args.degree < 0:
        raise RSpinError(f"--degree must be >= 0, got {args.degree}")
    if args.workers < 1:
        raise RSpinError(f"--workers must be >= 1, got {args.workers}")


def _write(args, data: bytes) -> None:
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _note(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _cache(args) -> TauCache | None:
    return TauCache(args.cache_dir) if args.cache_dir else None


def _run_compute(args) -> int:
    tau = compute_tau(args.r, args.degree, cache=_cache(args), workers=args.workers)
    _write(args, serialize_tau(tau))
    return 0


def _run_correlators(args) -> int:
    tau = compute_tau(args.r, args.degree, cache=_cache(args), workers=args.workers)
    records = extract_correlators(tau)
    payload = records_to_csv(records) if args.format == "csv" else records_to_json(records)
    _write(args, payload)
    return 0


def _run_verify(args) -> int:
    wanted = [name.strip() for name in args.checks.split(",") if name.strip()]
    unknown = [name for name in wanted if name not in CHECKS]
    if unknown:
        raise RSpinError(f"unknown checks: {', '.join(unknown)}; valid: {', '.join(CHECKS)}")
    tau = compute_tau(args.r, args.degree, cache=_cache(args), workers=args.workers)
    reports = []
    for name in CHECKS:  # canonical order, independent of flag order
        if name not in wanted:
            continue
        if name == "wconstraints":
            reports.append(check_w_constraints(tau, m_max=args.m_max))
        elif name == "string_dilaton":
            reports.append(check_string_dilaton(tau))
        elif name == "grading":
            reports.append(check_gradings(tau))
        elif name == "selection":
            reports.append(check_selection(tau))
    _write(args, reports_to_json(reports))
    failed = [rep.check_name for rep in reports if not rep.passed]
    for rep in reports:
        if args.verbose:
            _note(args, f"{rep.check_name}: {rep.status} ({rep.timing_ms:.1f} ms)")
        else:
            _note(args, f"{rep.check_name}: {rep.status}")
    return 1 if failed else 0


def _run_commutator(args) -> int:
    tau = compute_tau(args.r, args.degree, cache=_cache(args), workers=args.workers)
    commutator = check_commutators(args.r, args.degree, tau=tau)
    agreement = check_exponential_agreement(args.r, args.degree, tau=tau)
    _write(args, reports_to_json([commutator, agreement]))
    if commutator.residuals:
        print(
            "WARNING: nonzero commutator residual detected; the degree raisers "
            "do not commute at this depth:",
            file=sys.stderr,
        )
        for label, _ in commutator.residuals:
            print(f"  {label}", file=sys.stderr)
    else:
        _note(args, "commutator residuals: all zero")
    if agreement.residuals:
        print(
            "WARNING: exponential-formula output differs from the recursion "
            "(expected when the raisers do not commute); the recursion is authoritative:",
            file=sys.stderr,
        )
        for label, _ in agreement.residuals:
            print(f"  {label}", file=sys.stderr)
    else:
        _note(args, "exponential formula agrees with the recursion")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        if args.command == "compute":
            return _run_compute(args)
        if args.command == "correlators":
            return _run_correlators(args)
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "commutator":
            return _run_commutator(args)
        raise RSpinError(f"unknown command {args.command!r}")
    except RSpinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
