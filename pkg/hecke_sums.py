#!/usr/bin/env python3
"""
Command-line front end: tau cache, exponential sums, Farey dissections,
Piatetski-Shapiro reports and the verification suites.

Tables go to stdout (or --output) as CSV or JSON; progress and errors go to
stderr.
"""

import argparse
import sys
from typing import Dict, List, Optional

import config
import eigenforms
import expsum
import farey
import piatetski
import verify_suites
from amplitude import PowerAmplitude
from eigenforms import COEFFICIENT_KINDS, CoefficientSequence, TauTable
from errors import (BudgetExceededError, CacheFormatError, ConsistencyError, DegeneratePhaseError,
                    FloorAmbiguityError, HeckeSumsError, InvalidArgumentError, NoSolutionError,
                    OutOfRangeError, ResourceLimitError)
from results_output import output_results

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

EXPSUM_COLUMNS = ["N", "N_prime", "gamma", "j", "kind", "prime_only", "method", "Q", "n_terms",
                  "value_re", "value_im", "abs_value", "abs_sum", "bound_ratio"]
ARC_COLUMNS = ["q", "l", "x0", "m1", "m2", "subsum_re", "subsum_im", "residual_norms"]
FAREY_COLUMNS = ["q", "l", "x0", "m1", "m2", "M1", "M2", "clipped", "lo", "hi", "count"]
PS_SUMMARY_COLUMNS = ["N", "c", "ps_count", "interior_primes", "max_interior_discrepancy",
                      "boundary_primes"]


def _count(text: str) -> int:
    """Integers written plainly or as 1e4."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _header(args: argparse.Namespace) -> Dict:
    skip = {"func", "output", "format", "cache_dir"}
    return {"subcommand": args.command,
            **{k: v for k, v in sorted(vars(args).items()) if k not in skip and k != "command"}}


def _emit(args: argparse.Namespace, rows: List[Dict], columns: List[str]) -> None:
    output_results(rows, args.format, args.output, header=_header(args), columns=columns)


def _table(args: argparse.Namespace, n_max: int) -> TauTable:
    """Cache-backed tau table, built when missing."""
    table, status = eigenforms.cached_tau_table(n_max, args.cache_dir, force=getattr(args, "force", False),
                                                workers=args.threads)
    _status({"hit": "cache hit", "miss": "cache miss", "rebuilt": "rebuilding"}[status])
    return table


def _existing_table(args: argparse.Namespace, n_hi: int) -> TauTable:
    table = eigenforms.load_cached_table(n_hi, args.cache_dir)
    _status("cache hit")
    return table


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_tau(args: argparse.Namespace) -> int:
    _status(f"Building tau table up to {args.n_max}...")
    table = _table(args, args.n_max)
    _emit(args, [{"n_max": table.n_max, "tau_n_max": table[table.n_max],
                  "path": str(eigenforms.cache_path(args.cache_dir))}],
          ["n_max", "tau_n_max", "path"])
    return EXIT_OK


def _coefficients(args: argparse.Namespace, n_hi: int) -> CoefficientSequence:
    if args.kind == "unit":
        return CoefficientSequence("unit")
    return CoefficientSequence(args.kind, _existing_table(args, max(n_hi, 1)))


def cmd_expsum(args: argparse.Namespace) -> int:
    N_prime = args.N_prime if args.N_prime is not None else 2 * args.N
    f = PowerAmplitude(j=args.j, gamma=args.gamma)
    req = expsum.SumRequest(coeff=_coefficients(args, N_prime), f=f, N=args.N, N_prime=N_prime,
                            prime_only=args.prime_only, Q=args.Q)
    methods = ("direct", "farey") if args.method == "both" else (args.method,)
    rows = []
    arc_rows = []
    for method in methods:
        _status(f"Processing {method} sum over ({args.N}, {N_prime}]...")
        if method == "direct":
            result = expsum.direct_sum(req, workers=args.threads)
        else:
            result = expsum.farey_decomposed_sum(req, factorized=args.factorized,
                                                 diagnostics=args.arcs, workers=args.threads)
            for part in result.per_arc or ():
                iv = part.interval
                arc_rows.append({"q": iv.arc.q, "l": iv.arc.l, "x0": iv.x0, "m1": iv.m1, "m2": iv.m2,
                                 "subsum_re": part.value.real, "subsum_im": part.value.imag,
                                 "residual_norms": ";".join(repr(v) for v in part.residual_norms)})
        rows.append({"N": args.N, "N_prime": N_prime, "gamma": args.gamma, "j": args.j,
                     "kind": args.kind, "prime_only": args.prime_only, "method": method,
                     "Q": req.resolved_Q if method == "farey" else None, "n_terms": result.n_terms,
                     "value_re": result.value.real, "value_im": result.value.imag,
                     "abs_value": abs(result.value), "abs_sum": result.abs_sum,
                     "bound_ratio": result.bound_ratio})
    if args.arcs:
        _emit(args, arc_rows, ARC_COLUMNS)
    else:
        _emit(args, rows, EXPSUM_COLUMNS)
    return EXIT_OK


def cmd_farey(args: argparse.Namespace) -> int:
    N_prime = args.N_prime if args.N_prime is not None else 2 * args.N
    f = PowerAmplitude(j=args.j, gamma=args.gamma)
    Q = args.Q if args.Q is not None else expsum.default_Q(args.N, abs(float(f(float(args.N)))))
    intervals = farey.dissect_and_project(f, args.N, N_prime, Q, workers=args.threads)
    farey.partition_check(intervals, args.N, N_prime)
    rows = [{"q": iv.arc.q, "l": iv.arc.l, "x0": iv.x0, "m1": iv.m1, "m2": iv.m2,
             "M1": iv.arc.M1, "M2": iv.arc.M2, "clipped": iv.arc.clipped,
             "lo": iv.lo, "hi": iv.hi, "count": iv.count()} for iv in intervals]
    _emit(args, rows, FAREY_COLUMNS)
    return EXIT_OK


def cmd_ps(args: argparse.Namespace) -> int:
    cfg = piatetski.PSConfig(c=args.c, N=args.N, diagnostic=args.diagnostic)
    if args.records:
        rows = [{"n": r.n, "p": r.p} for r in piatetski.ps_enumerate(cfg, workers=args.threads)]
        _emit(args, rows, ["n", "p"])
        return EXIT_OK
    _status(f"Processing counting identity for c={cfg.c}, N={cfg.N}...")
    report = piatetski.counting_identity_report(cfg, workers=args.threads)
    row = {"N": cfg.N, "c": cfg.c, "ps_count": report.hits, "interior_primes": report.interior_primes,
           "max_interior_discrepancy": report.max_interior_discrepancy,
           "boundary_primes": ";".join(str(b.p) for b in report.boundary)}
    columns = list(PS_SUMMARY_COLUMNS)
    if args.lambda_square:
        squares = piatetski.lambda_square_report(cfg, _existing_table(args, cfg.p_max), workers=args.threads)
        row.update({k: v for k, v in squares.row().items() if k not in row})
        columns += [c for c in piatetski.PS_COLUMNS if c not in columns]
    _emit(args, [row], columns)
    return EXIT_OK if report.max_interior_discrepancy == 0 else EXIT_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    n_max = args.n_max or verify_suites.required_n_max(args.suite, N=args.N, c=args.c, grid=args.grid)
    table = _table(args, n_max)
    _status(f"Running {args.suite} suite...")
    result = verify_suites.run_suite(args.suite, table, seed=args.seed, N=args.N, c=args.c,
                                     grid=args.grid, workers=args.threads)
    _emit(args, result.rows(), verify_suites.CHECK_COLUMNS)
    for check in result.checks:
        if not check.passed:
            _status(f"FAILED {args.suite}.{check.name}: {check.value:.6g} (limit {check.limit:.6g})")
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_report(args: argparse.Namespace) -> int:
    if args.kind == "bounds":
        n_max = verify_suites.required_n_max("bounds", grid=args.grid)
        rows = verify_suites.bounds_rows(_table(args, n_max), args.grid, workers=args.threads)
        _emit(args, rows, expsum.GRID_COLUMNS)
        return EXIT_OK
    Ns = sorted(args.Ns or config.PS_GRID)
    table = _table(args, verify_suites.required_n_max("ps", N=Ns[-1], c=args.c))
    _status(f"Processing N in {', '.join(str(n) for n in Ns)}...")
    reports = piatetski.lambda_square_grid(args.c, Ns, table, workers=args.threads)
    _emit(args, [r.row() for r in reports], piatetski.PS_COLUMNS)
    ok, deviations = piatetski.ratio_trend(reports)
    if not ok:
        _status("FAILED ps.lambda_square_trend: |ratio - 1| = "
                + ", ".join(f"{d:.4g}" for d in deviations))
        return EXIT_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-f", "--format", choices=["csv", "json"], default="csv",
                   help="Output format (default: csv)")
    p.add_argument("-o", "--output", help="Save output to file")
    p.add_argument("--cache-dir", default=None,
                   help=f"tau cache directory (default: $HECKE_CACHE_DIR or {config.CACHE_DIR})")
    p.add_argument("--threads", type=int, default=config.THREADS,
                   help="Worker threads (default: $HECKE_THREADS or CPU count)")


def _add_amplitude(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=_count, required=True, help="Lower end of the range (N, N']")
    p.add_argument("--N-prime", dest="N_prime", type=_count, help="Upper end (default: 2N)")
    p.add_argument("--gamma", type=float, default=0.95, help="Exponent of f(x) = j x^gamma (default: 0.95)")
    p.add_argument("--j", type=float, default=1.0, help="Multiplier of f (default: 1)")
    p.add_argument("--Q", type=float, help="Farey level (default: N^(1/2) / f(N)^(1/3))")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hecke_sums.py",
        description="Exponential sums with Hecke eigenvalue coefficients and their verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s tau --n-max 1000000                      # Build the tau cache
  %(prog)s expsum --kind hecke --N 1e4 --prime-only  # One sum, CSV row
  %(prog)s expsum --kind unit --N 1e4 --method farey --arcs   # Per-arc CSV
  %(prog)s farey --N 1e4                             # Dissection table
  %(prog)s ps --c 1.05 --N 1e4 --lambda-square            # Piatetski-Shapiro summary
  %(prog)s verify identities                         # Exit 1 on any failed check
  %(prog)s report --kind bounds --grid full -f json

CSV columns:
  expsum : N, N_prime, gamma, j, kind, prime_only, method, Q, n_terms,
           value_re, value_im, abs_value, abs_sum, bound_ratio
  --arcs : q, l, x0, m1, m2, subsum_re, subsum_im, residual_norms
  farey  : q, l, x0, m1, m2, M1, M2, clipped, lo, hi, count
  ps     : N, c, ps_count, interior_primes, max_interior_discrepancy,
           boundary_primes (+ sum_lambda_sq, main_term, ratio, diff_over_N)
  verify : suite, check, passed, value, limit, detail
  report : bounds -> N, gamma, j, kind, prime_only, n_terms, value_re,
           value_im, abs_value, bound_ratio; ps -> N, c, ps_count,
           sum_lambda_sq, main_term, ratio, diff_over_N
Every CSV body starts with '# key: value' lines holding the run config.
An empty bound_ratio means f(N) is outside the admissible window.

report --kind ps exits 1 when |ratio - 1| grows from one N to the next.

Exit codes: 0 success, 1 verification failure, 2 usage, 3 resource/format.
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", help="Build or reuse the tau cache")
    p.add_argument("--n-max", dest="n_max", type=_count, required=True)
    p.add_argument("--force", action="store_true", help="Rebuild a corrupt cache instead of failing")
    _add_common(p)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("expsum", help="Evaluate sum a_n e(f(n)) over (N, N']")
    p.add_argument("--kind", choices=COEFFICIENT_KINDS, default="hecke")
    p.add_argument("--prime-only", action="store_true")
    p.add_argument("--method", choices=["direct", "farey", "both"], default="direct")
    p.add_argument("--factorized", action="store_true",
                   help="Evaluate arcs through e(C) e(nl/q) n^(-iT) e(f - g)")
    p.add_argument("--arcs", action="store_true", help="Emit per-arc diagnostics (farey method)")
    _add_amplitude(p)
    _add_common(p)
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("farey", help="Farey dissection and projected intervals")
    _add_amplitude(p)
    _add_common(p)
    p.set_defaults(func=cmd_farey)

    p = sub.add_parser("ps", help="Piatetski-Shapiro enumeration and counting identity")
    p.add_argument("--c", type=float, default=1.05)
    p.add_argument("--N", type=_count, required=True)
    p.add_argument("--diagnostic", action="store_true", help="Allow c = 1")
    p.add_argument("--records", action="store_true", help="List every (n, [n^c]) hit")
    p.add_argument("--lambda-square", action="store_true", help="Add lambda(p)^2 sums (needs the tau cache)")
    _add_common(p)
    p.set_defaults(func=cmd_ps)

    p = sub.add_parser("verify", help="Run a verification suite")
    p.add_argument("suite", choices=verify_suites.SUITES)
    p.add_argument("--c", type=float, default=1.05)
    p.add_argument("--N", "--n", dest="N", type=_count, default=10_000)
    p.add_argument("--grid", choices=sorted(verify_suites.GRIDS), default="small")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", dest="n_max", type=_count, help="tau table size (default: what the suite needs)")
    p.add_argument("--force", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="Trend tables")
    p.add_argument("--kind", choices=["bounds", "ps"], required=True)
    p.add_argument("--grid", choices=sorted(verify_suites.GRIDS), default="small")
    p.add_argument("--c", type=float, default=1.05)
    p.add_argument("--Ns", type=_count, nargs="+")
    _add_common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CacheFormatError as e:
        print(f"Error: {e}; rerun with --force to rebuild", file=sys.stderr)
        return EXIT_RESOURCE
    except FileNotFoundError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OutOfRangeError, ResourceLimitError, BudgetExceededError, FloorAmbiguityError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConsistencyError as e:
        print(f"Error: internal consistency check failed: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (InvalidArgumentError, NoSolutionError, DegeneratePhaseError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HeckeSumsError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
