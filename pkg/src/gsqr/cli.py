"""Command-line interface: factor matrices from files, run the two built-in
experiments, and sweep randomized bound audits.

Exit codes are a stable contract: 0 success, 2 numerical breakdown or rank
deficiency, 3 parse/validation failure, 4 I/O failure.  ``verify`` returns 1
when a bound audit fails, since that is a verification result rather than an
error.  Every machine-readable report embeds the algorithm tag, dimensions,
the seed when randomness is involved, the epsilon used and the package
version, which together reproduce the run bit for bit.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .bounds import EPS_BINARY64, check_assumption
from .datasets import GluedParams, Rng, conditioned_matrix, example1_matrix, glued_matrix
from .diagnostics import (
    TableDocument,
    diagnose,
    summary_table,
)
from .exceptions import (
    Breakdown,
    NonConvergence,
    ParseError,
    RankDeficient,
    SingularInput,
)
from .factorize import CGS_P, CGS_S, HOUSEHOLDER, cgs_p, cgs_s, householder_qr
from .io import CSV, MATRIXMARKET, read_matrix, write_matrix
from .linalg import gram, singular_values, spectral_norm
from .validation import check_tall

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NUMERICAL = 2
EXIT_PARSE = 3
EXIT_IO = 4

_REPORT_FORMATS = ("json", "markdown", "csv")
_FACTORIZERS = {CGS_S: cgs_s, CGS_P: cgs_p, HOUSEHOLDER: householder_qr}


def _default_seed():
    return int(os.environ.get("GSQR_SEED", "0"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gsqr",
        description="Gram-Schmidt QR factorization and rounding-error audits",
    )
    parser.add_argument("--version", action="version", version=f"gsqr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_report_flags(p):
        p.add_argument(
            "--report",
            help="report destination: a path, or one of "
            "json/markdown/csv to print to stdout",
        )
        p.add_argument(
            "--report-format",
            choices=_REPORT_FORMATS,
            help="report format (default: from destination extension, else markdown)",
        )
        p.add_argument(
            "--epsilon",
            type=float,
            default=EPS_BINARY64,
            help="machine unit used in the bounds (default: 2^-52)",
        )

    p = sub.add_parser("factor", help="factor a matrix read from a file")
    p.add_argument("--algo", choices=[CGS_S, CGS_P, HOUSEHOLDER, "both"], default=CGS_P)
    p.add_argument("--input", required=True, help="matrix file to factor")
    p.add_argument("--output-q", help="where to write the Q factor")
    p.add_argument("--output-r", help="where to write the R factor")
    p.add_argument(
        "--format",
        choices=[MATRIXMARKET, CSV],
        help="matrix file format (default: by extension; .mtx/.mm is "
        "Matrix Market, anything else CSV)",
    )
    add_report_flags(p)

    p = sub.add_parser(
        "example1",
        help="run both variants on the fixed 6x5 Hilbert/Pascal composite",
    )
    add_report_flags(p)

    p = sub.add_parser("glued", help="run both variants on a glued random matrix")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--m", type=int, default=200)
    p.add_argument("--nglued", type=int, default=5)
    p.add_argument("--nbglued", type=int, default=40)
    p.add_argument("--cond-a", type=float, default=2.0)
    p.add_argument("--cond-a-glob", type=float, default=1.0)
    add_report_flags(p)

    p = sub.add_parser(
        "verify",
        help="audit the Pythagorean variant against its bounds on random input",
    )
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--kappa", type=float, default=100.0)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument(
        "--slack", type=float, default=10.0, help="audit slack factor (default 10)"
    )
    add_report_flags(p)

    return parser


def _resolve_report(args):
    """Return (destination path or None for stdout, format or None)."""
    dest = args.report
    fmt = args.report_format
    if dest in _REPORT_FORMATS:
        return None, fmt or dest
    if dest is None:
        return None, fmt
    if fmt is None:
        suffix = Path(dest).suffix.lower()
        fmt = {".json": "json", ".md": "markdown", ".markdown": "markdown", ".csv": "csv"}.get(
            suffix, "markdown"
        )
    return dest, fmt


def _emit(args, document, table, extra_lines=()):
    """Print the human summary; write or print the requested report."""
    dest, fmt = _resolve_report(args)
    if fmt is None:
        # no report requested: human summary to stdout
        print(table.to_markdown(), end="")
        for line in extra_lines:
            print(line)
        return
    if fmt == "json":
        payload = json.dumps(document, indent=2)
    elif fmt == "markdown":
        payload = table.to_markdown() + "".join(f"{line}\n" for line in extra_lines)
    else:
        payload = table.to_csv()
    if dest is None:
        print(payload, end="" if payload.endswith("\n") else "\n")
    else:
        Path(dest).write_text(payload if payload.endswith("\n") else payload + "\n")
        print(table.to_markdown(), end="")
        for line in extra_lines:
            print(line)
        print(f"report written to {dest}")


def _assumption_line(report):
    a = report.assumption
    status = "satisfied" if a.satisfied else "NOT satisfied"
    return (
        f"{report.algorithm}: kappa2(R) = {report.kappa_r_full:.5e}; "
        f"conditioning check c4*eps*kappa^2 = {a.lhs:.4e} ({status})"
    )


def _suffixed(path, algorithm):
    p = Path(path)
    return str(p.with_name(f"{p.stem}.{algorithm}{p.suffix}"))


def cmd_factor(args):
    a = read_matrix(args.input, args.format)
    a = check_tall(a, name="input matrix")
    algorithms = [CGS_S, CGS_P] if args.algo == "both" else [args.algo]
    reports = []
    for alg in algorithms:
        f = _FACTORIZERS[alg](a)
        if args.output_q:
            path = _suffixed(args.output_q, alg) if len(algorithms) > 1 else args.output_q
            write_matrix(path, f.q, args.format)
        if args.output_r:
            path = _suffixed(args.output_r, alg) if len(algorithms) > 1 else args.output_r
            write_matrix(path, f.r, args.format)
        reports.append(diagnose(a, f, args.epsilon))
    document = {
        "version": __version__,
        "command": "factor",
        "input": args.input,
        "reports": [r.to_dict() for r in reports],
    }
    table = summary_table(reports, title=f"factor {args.input}")
    _emit(args, document, table, [_assumption_line(r) for r in reports])
    return EXIT_OK


def cmd_example1(args):
    a = example1_matrix()
    reports = [diagnose(a, f(a), args.epsilon) for f in (cgs_s, cgs_p)]
    document = {
        "version": __version__,
        "command": "example1",
        "reports": [r.to_dict() for r in reports],
    }
    table = summary_table(reports, title="example1 (6x5 Hilbert/Pascal composite)")
    _emit(args, document, table, [_assumption_line(r) for r in reports])
    return EXIT_OK


def _summary_metrics(a, f, norm_a, epsilon):
    """Whole-matrix measurements without per-prefix audits (cheap path)."""
    m, n = a.shape
    sv_r = singular_values(f.r).values
    smin = float(sv_r[-1])
    if smin == 0.0:
        raise SingularInput("R is exactly singular")
    kappa_r = float(sv_r[0]) / smin
    normal_rel = spectral_norm(gram(f.r) - gram(a)) / (norm_a * norm_a)
    ortho = spectral_norm(np.eye(n) - gram(f.q))
    assumption = check_assumption(m, n, kappa_r, epsilon)
    return {
        "algorithm": f.algorithm,
        "normal_residual_rel": normal_rel,
        "ortho_loss": ortho,
        "kappa_r": kappa_r,
        "assumption_lhs": assumption.lhs,
        "assumption_satisfied": assumption.satisfied,
    }


def cmd_glued(args):
    params = GluedParams(
        cond_a_glob=args.cond_a_glob,
        cond_a=args.cond_a,
        m=args.m,
        nglued=args.nglued,
        nbglued=args.nbglued,
        seed=args.seed,
    )
    a = glued_matrix(params)
    sv_a = singular_values(a).values
    smin = float(sv_a[-1])
    if smin == 0.0:
        raise SingularInput("glued matrix is rank deficient at working precision")
    norm_a = float(sv_a[0])
    cond_a = norm_a / smin
    results = [
        _summary_metrics(a, f(a), norm_a, args.epsilon) for f in (cgs_s, cgs_p)
    ]
    document = {
        "version": __version__,
        "command": "glued",
        "seed": params.seed,
        "epsilon": args.epsilon,
        "params": {
            "cond_a_glob": params.cond_a_glob,
            "cond_a": params.cond_a,
            "m": params.m,
            "nglued": params.nglued,
            "nbglued": params.nbglued,
        },
        "cond2_a": cond_a,
        "results": results,
    }
    table = TableDocument(
        columns=["algorithm", "normal_residual/||A||^2", "ortho_loss"],
        rows=[
            [r["algorithm"], f"{r['normal_residual_rel']:.4e}", f"{r['ortho_loss']:.4e}"]
            for r in results
        ],
        title=f"glued matrix {params.m}x{params.n}, seed {params.seed}",
    )
    extra = [f"cond2(A) = {cond_a:.5e}"]
    for r in results:
        status = "satisfied" if r["assumption_satisfied"] else "NOT satisfied"
        extra.append(
            f"{r['algorithm']}: kappa2(R) = {r['kappa_r']:.5e}; "
            f"conditioning check = {r['assumption_lhs']:.4e} ({status})"
        )
    _emit(args, document, table, extra)
    return EXIT_OK


_INEQUALITIES = ("backward", "normal", "mu", "ortho")


def _audit_ratios(row):
    return {
        "backward": row.backward_error / row.backward_bound,
        "normal": row.normal_residual / row.normal_bound,
        "mu": abs(row.mu) / row.mu_bound,
        "ortho": row.ortho_loss / row.ortho_bound,
    }


def cmd_verify(args, parser):
    if args.trials < 1:
        parser.error("--trials must be at least 1")
    if args.kappa > 1e5:
        parser.error("--kappa must be at most 1e5 to keep the bounds meaningful")
    if args.kappa < 1.0:
        parser.error("--kappa must be at least 1")
    if args.n > args.m:
        parser.error("--n must not exceed --m")

    slack = args.slack
    q_norm_tol = 1e-10
    worst = {name: 0.0 for name in _INEQUALITIES}
    worst["q_norm_excess"] = -math.inf
    counts = {name: 0 for name in _INEQUALITIES}
    counts["q_norm"] = 0
    total_prefixes = 0
    trials_out = []

    rngs = Rng(args.seed).split(args.trials)
    for index, rng in enumerate(rngs):
        a = conditioned_matrix(rng, args.m, args.n, args.kappa)
        report = diagnose(a, cgs_p(a), args.epsilon)
        report.seed = args.seed
        trial_worst = {name: 0.0 for name in _INEQUALITIES}
        for row in report.rows:
            total_prefixes += 1
            ratios = _audit_ratios(row)
            for name, ratio in ratios.items():
                worst[name] = max(worst[name], ratio)
                trial_worst[name] = max(trial_worst[name], ratio)
                if ratio <= slack:
                    counts[name] += 1
            excess = row.q_norm - math.sqrt(2.0)
            worst["q_norm_excess"] = max(worst["q_norm_excess"], excess)
            if excess <= q_norm_tol:
                counts["q_norm"] += 1
        trials_out.append(
            {
                "trial": index,
                "kappa_r_full": report.kappa_r_full,
                "assumption_satisfied": report.assumption.satisfied,
                "worst_ratios": trial_worst,
            }
        )

    all_pass = all(counts[name] == total_prefixes for name in _INEQUALITIES)
    all_pass = all_pass and counts["q_norm"] == total_prefixes
    document = {
        "version": __version__,
        "command": "verify",
        "seed": args.seed,
        "epsilon": args.epsilon,
        "trials": args.trials,
        "m": args.m,
        "n": args.n,
        "kappa": args.kappa,
        "slack": slack,
        "total_prefixes": total_prefixes,
        "pass_counts": counts,
        "worst_ratios": {k: worst[k] for k in _INEQUALITIES},
        "worst_q_norm_excess": worst["q_norm_excess"],
        "all_pass": all_pass,
        "trial_summaries": trials_out,
    }
    rows = [
        [
            name,
            f"{counts[name]}/{total_prefixes}",
            f"{worst[name]:.4e}",
        ]
        for name in _INEQUALITIES
    ]
    rows.append(
        [
            "q_norm",
            f"{counts['q_norm']}/{total_prefixes}",
            f"{worst['q_norm_excess']:.4e} (excess over sqrt(2))",
        ]
    )
    table = TableDocument(
        columns=["audit", "passes", "worst measured/bound"],
        rows=rows,
        title=(
            f"verify: {args.trials} trials, {args.m}x{args.n}, "
            f"kappa {args.kappa:g}, seed {args.seed}, slack {slack:g}"
        ),
    )
    verdict = "all audits passed" if all_pass else "AUDIT FAILURES"
    _emit(args, document, table, [verdict])
    return EXIT_OK if all_pass else EXIT_VERIFY_FAILED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "factor":
            return cmd_factor(args)
        if args.command == "example1":
            return cmd_example1(args)
        if args.command == "glued":
            return cmd_glued(args)
        if args.command == "verify":
            return cmd_verify(args, parser)
        parser.error(f"unknown command {args.command!r}")
    except Breakdown as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (RankDeficient, SingularInput, NonConvergence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
