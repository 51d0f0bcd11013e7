"""Command-line interface: ``fiblucas {solve,bounds,reduce,verify,report}``.

Exit codes: 0 success, 2 configuration error, 3 precision exhausted,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .certified import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP
from .equations import F_LL, L_FF, EquationKind
from .errors import ConfigError, InvariantViolation, NonConvergence, PrecisionExhausted
from .pipeline import FORMATS, STAGES, TAU_MU_SOURCES, PipelineConfig, PipelineReport, run, verify

EXIT_OK, EXIT_CONFIG, EXIT_PRECISION, EXIT_INVARIANT = 0, 2, 3, 4

COMMAND_STAGES = {
    "solve": ("search",),
    "bounds": ("bounds",),
    "reduce": ("reduction",),
    "report": STAGES,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's exit status but route through ConfigError text
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: configuration error: {message}\n")


def _equations(text: str) -> tuple[EquationKind, ...]:
    if text == "both":
        return (F_LL, L_FF)
    try:
        return (EquationKind.parse(text),)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown equation {text!r}; valid kinds: F=LL, L=FF, both") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--equation", type=_equations, default=(F_LL, L_FF), metavar="{F=LL,L=FF,both}")
    common.add_argument("--m-max", type=int, metavar="N")
    common.add_argument("--n-max", type=int, metavar="N")
    common.add_argument("--precision", type=int, metavar="BITS",
                        help=f"starting working precision (default {DEFAULT_PRECISION})")
    common.add_argument("--precision-cap", type=int, metavar="BITS",
                        help=f"maximum working precision (default {DEFAULT_PRECISION_CAP})")
    common.add_argument("--format", choices=FORMATS, default="human")
    common.add_argument("--output", type=Path, metavar="PATH")
    common.add_argument("--workers", type=int, default=1, help="processes for the search")

    parser = _Parser(prog="fiblucas", description="Solve F_k = L_m L_n and L_k = F_m F_n with certified arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="enumerate solutions over the search range")
    sub.add_parser("bounds", parents=[common], help="Matveev constants and absolute index bounds")
    red = sub.add_parser("reduce", parents=[common], help="reduce the bounds with continued fractions")
    red.add_argument("--source", choices=TAU_MU_SOURCES, default="derived", help="where τ and μ come from")
    red.add_argument("--tau", help="expression for τ, e.g. 'log(alpha)/log(5)'")
    red.add_argument("--mu", help="expression for μ")
    red.add_argument("--A", dest="reduce_A", default="34")
    red.add_argument("--B", dest="reduce_B", default="alpha**2")
    red.add_argument("--M", dest="reduce_M", type=int, default=91 * 10**26)
    sub.add_parser("verify", parents=[common], help="run every check and report pass/fail")
    sub.add_parser("report", parents=[common], help="all stages in one report")
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    cap = args.precision_cap if args.precision_cap is not None else DEFAULT_PRECISION_CAP
    start = args.precision if args.precision is not None else min(DEFAULT_PRECISION, cap)
    extra = {}
    if args.command == "reduce":
        extra = {"tau_mu_source": args.source, "tau": args.tau, "mu": args.mu,
                 "reduce_A": args.reduce_A, "reduce_B": args.reduce_B, "reduce_M": args.reduce_M}
    return PipelineConfig(
        equations=args.equation, m_max=args.m_max, n_max=args.n_max,
        precision_start=start, precision_cap=cap, output_format=args.format,
        workers=args.workers, **extra,
    )


# human output -----------------------------------------------------------------


def _value(v: dict) -> str:
    if "exact" in v:
        return v["exact"]
    return f"{v['midpoint']} ± {v['radius']}"


def format_human(report: PipelineReport) -> str:
    lines: list[str] = []
    if report.constants:
        lines.append("Constants (recomputed vs published)")
        for row in report.constants:
            pub = row.get("published")
            tail = f"   published {pub}, deviation {row['relative_deviation']}" if pub else ""
            lines.append(f"  {row['label']:<48} {_value(row['value'])}{tail}")
        for kind, entry in report.bounds.items():
            lines.append(f"  {kind}: n <= {entry['n_bound']}, m <= {entry['m_bound']}, k <= {entry['k_bound']}")
    if report.reduction:
        lines.append(f"Reduction (source: {report.reduction['source']})")
        for kind in ("F=LL", "L=FF"):
            r = report.reduction.get(kind)
            if r:
                eps = r["case1"]["epsilon"]["midpoint"]
                lines.append(f"  {kind}: m <= {r['m_bound']}, n <= {r['n_bound']} "
                             f"(first case ε = {eps}, bound {r['case1']['k_bound']})")
        if "detail" in report.reduction:
            lines.append(f"  lemma {report.reduction['lemma_status']}: {report.reduction['detail']}")
        if "result" in report.reduction:
            res = report.reduction["result"]
            lines.append(f"  status {res['status']} ({res['method']}), q = {res['q']}, k_bound = {res['k_bound']}")
        for fx in report.reduction.get("fixtures", []):
            eps = fx["epsilon"]["midpoint"] if fx["epsilon"] else "undecided"
            lines.append(f"  fixture [{fx['candidate']}]: q convergent={fx['q_is_convergent']} "
                         f"ε={eps} ({fx['epsilon_status']}), min ε_m {fx['epsilon_m_status']}, "
                         f"implied m <= {fx['implied_m_bound']}, n <= {fx['implied_n_bound']}")
    if report.search:
        s = report.search
        lines.append(f"Solutions (m <= {s['m_max']}, n <= {s['n_max']}, {s['k_rule']})")
        for kind in ("F=LL", "L=FF"):
            if kind in s:
                triples = ", ".join(f"({k},{m},{n})" for k, m, n in s[kind]["solutions"])
                flag = " [range-limited]" if s[kind]["range_limited"] else ""
                lines.append(f"  {kind}: {triples}{flag}")
    if report.corollaries:
        c = report.corollaries
        lines.append("Corollaries")
        lines.append(f"  common terms F_k = L_n: {c['common_terms']} (with index 0: {c['common_terms_with_index_zero']})")
        lines.append(f"  F_k = L_n^2: {c['lucas_square_fibonacci']}")
        lines.append(f"  L_k = F_n^2: {c['fibonacci_square_lucas']}")
    if report.discrepancies:
        lines.append("Prior claims")
        for d in report.discrepancies:
            norm = f" normalized {tuple(d['normalized'])}" if d["normalized"] else ""
            lines.append(f"  {d['source']} {d['equation']}: {d['claim']} -> {d['verdict']}"
                         f"{norm}{'' if d['complete'] else ' (not complete)'}")
    if report.checks:
        lines.append("Checks")
        for c in report.checks:
            detail = f"  {c['detail']}" if c["detail"] else ""
            lines.append(f"  {c['status'].upper():<13} [{c['category']}] {c['name']}{detail}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _emit(report: PipelineReport, config: PipelineConfig, output: Path | None) -> None:
    text = report.to_json() + "\n" if config.output_format == "structured" else format_human(report)
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "verify":
            report = verify(config)
        else:
            report = run(config, COMMAND_STAGES[args.command])
        _emit(report, config, args.output)
        if report.failed_invariants:
            raise InvariantViolation("; ".join(c["name"] for c in report.failed_invariants))
    except ConfigError as exc:
        print(f"fiblucas: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrecisionExhausted as exc:
        print(f"fiblucas: precision exhausted in {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (InvariantViolation, NonConvergence) as exc:
        print(f"fiblucas: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
