"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 input parse error,
3 domain/parameter error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .adjudicator import CaseValidationError, RuleParams, adjudicate_all
from .court import run_simulation, replay
from .diagram import DiagramOptions, DiagramOptionsError, render_ascii, render_svg
from .equilibrium import (
    AllPointsCoincide,
    DomainError,
    EquilibriumPoint,
    NoEquilibrium,
    OutsideDomain,
    model_from_tax_params,
    solve_equilibrium,
)
from .equilibrium import _fraction_text as fraction_text
from .formats import FormatError, bundled_text, export_trace, parse_replay_script, read_case_file, read_constitution
from .money import MoneyParseError, format_fraction_2dp, parse_money, parse_rate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

BUNDLED = {
    "paper_cases": "paper_cases.jsonl",
    "paper": "os_constitution.rules",
    "fig6_replay": "fig6_replay.script",
}


class CliError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_input(spec: str) -> tuple[str, str]:
    """Return ``(text, source name)`` for a path, '-' or a bundled name."""
    if spec == "-":
        return sys.stdin.read(), "<stdin>"
    path = Path(spec)
    if path.is_file():
        try:
            return path.read_text(encoding="utf-8"), spec
        except (OSError, UnicodeDecodeError) as exc:
            raise CliError(EXIT_IO, f"cannot read {spec}: {exc}") from None
    if spec in BUNDLED:
        return bundled_text(BUNDLED[spec]), f"{spec} (bundled)"
    raise CliError(EXIT_IO, f"cannot read {spec}: no such file")


def _write_output(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _money_arg(name: str, text: str):
    try:
        return parse_money(text)
    except MoneyParseError as exc:
        raise CliError(EXIT_DOMAIN, f"--{name}: {exc}") from None


def _rate_arg(name: str, text: str):
    try:
        return parse_rate(text)
    except MoneyParseError as exc:
        raise CliError(EXIT_DOMAIN, f"--{name}: {exc}") from None


def cmd_equilibrium(args: argparse.Namespace) -> int:
    evasion = _money_arg("evasion", args.evasion)
    tax_rate = _rate_arg("tax-rate", args.tax_rate)
    penalty_rate = _rate_arg("penalty-rate", args.penalty_rate)
    try:
        model = model_from_tax_params(evasion, tax_rate, penalty_rate)
    except DomainError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    outcome = solve_equilibrium(model)

    out = [
        f"rights: R(I) = {model.rights.describe()}",
        f"duties: D(I) = {model.duties.describe()}",
    ]
    if isinstance(outcome, EquilibriumPoint):
        out.append(f"equilibrium income: {fraction_text(outcome.income)} = {outcome.income_text} UAH")
        out.append(f"equilibrium responsibility: {fraction_text(outcome.responsibility)} = "
                   f"{outcome.responsibility_text} UAH")
    elif isinstance(outcome, OutsideDomain):
        out.append(f"equilibrium outside domain: income {format_fraction_2dp(outcome.point.income)} UAH")
    elif isinstance(outcome, AllPointsCoincide):
        out.append("rights and duties coincide: every income is an equilibrium")
    elif isinstance(outcome, NoEquilibrium):
        out.append("rights and duties are parallel: no equilibrium")
    sys.stdout.write("\n".join(out) + "\n")

    if args.svg_out or args.ascii or args.ascii_out:
        try:
            opts = DiagramOptions(x_range=tuple(args.x_range), y_range=tuple(args.y_range))
            if args.svg_out:
                _write_output(args.svg_out, render_svg(model, outcome, opts))
            if args.ascii or args.ascii_out:
                chart = render_ascii(model, outcome, opts)
                if args.ascii_out:
                    _write_output(args.ascii_out, chart)
                if args.ascii:
                    sys.stdout.write("\n" + chart)
        except DiagramOptionsError as exc:
            raise CliError(EXIT_DOMAIN, str(exc)) from None
    return EXIT_OK


def cmd_adjudicate(args: argparse.Namespace) -> int:
    try:
        params = RuleParams(
            tax_rate=_rate_arg("tax-rate", args.tax_rate),
            late_penalty_rate=_rate_arg("late-penalty-rate", args.late_penalty_rate),
            tolerance=_money_arg("tolerance", args.tolerance),
        )
    except CaseValidationError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    text, source = _read_input(args.cases)
    try:
        case_file = read_case_file(text, source)
    except FormatError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    rulings = adjudicate_all(case_file.cases, params)
    sys.stdout.write("\n".join(r.judgment + "\n" for r in rulings))
    return EXIT_OK


def _load_constitution(spec: str):
    text, source = _read_input(spec)
    try:
        parsed = read_constitution(text, source)
    except FormatError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    for warning in parsed.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return parsed.constitution


def _emit_trace(trace, export_path: str | None) -> None:
    exported = export_trace(trace)
    if export_path:
        _write_output(export_path, exported.document)
    sys.stdout.write(exported.log)


def cmd_court_simulate(args: argparse.Namespace) -> int:
    if not 0 <= args.seed < 2**64:
        raise CliError(EXIT_DOMAIN, "--seed must be an unsigned 64-bit integer")
    if args.cases < 1:
        raise CliError(EXIT_DOMAIN, "--cases must be positive")
    constitution = _load_constitution(args.constitution)
    _emit_trace(run_simulation(constitution, args.seed, args.cases), args.export)
    return EXIT_OK


def cmd_court_replay(args: argparse.Namespace) -> int:
    constitution = _load_constitution(args.constitution)
    text, source = _read_input(args.script)
    try:
        script = parse_replay_script(text, source)
    except FormatError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    _emit_trace(replay(constitution, script.initial_knowledge, script.cases), args.export)
    return EXIT_OK


def cmd_version(args: argparse.Namespace) -> int:
    print(f"lexmodel {__version__}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="lexmodel", description="Legal equilibrium, tax adjudication and constitution court models.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("equilibrium", formatter_class=fmt,
                       help="solve the rights/duties model and optionally draw it")
    p.add_argument("--evasion", default="442000000", help="uncovered tax evasion total, UAH")
    p.add_argument("--tax-rate", default="0.18", help="tax rate (at most 4 decimals)")
    p.add_argument("--penalty-rate", default="0.25", help="penalty rate on the tax debt (at most 4 decimals)")
    p.add_argument("--svg-out", metavar="PATH", default=None, help="write an SVG diagram here")
    p.add_argument("--ascii", action="store_true", help="print an 80x24 ASCII diagram after the report")
    p.add_argument("--ascii-out", metavar="PATH", default=None, help="write the ASCII diagram here")
    p.add_argument("--x-range", nargs=2, type=float, metavar=("MIN", "MAX"), default=[0, 5000],
                   help="diagram income range in millions")
    p.add_argument("--y-range", nargs=2, type=float, metavar=("MIN", "MAX"), default=[0, 1000],
                   help="diagram responsibility range in millions")
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("adjudicate", formatter_class=fmt, help="decide tax penalty appeals from a case file")
    p.add_argument("cases", nargs="?", default="-",
                   help="case file path, '-' for stdin, or the bundled name 'paper_cases'")
    p.add_argument("--tax-rate", default="0.18", help="corporate tax rate")
    p.add_argument("--late-penalty-rate", default="0.20", help="late payment penalty rate")
    p.add_argument("--tolerance", default="0.01", help="strict tolerance for matching assessed amounts, UAH")
    p.set_defaults(func=cmd_adjudicate)

    p = sub.add_parser("court-simulate", formatter_class=fmt, help="run a seeded constitution court session")
    p.add_argument("--constitution", default="paper", help="constitution rules file or the bundled name 'paper'")
    p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit PRNG seed")
    p.add_argument("--cases", type=int, default=30, help="number of cases to hear")
    p.add_argument("--export", metavar="PATH", default=None, help="write the structured JSON trace here")
    p.set_defaults(func=cmd_court_simulate)

    p = sub.add_parser("court-replay", formatter_class=fmt, help="replay a scripted constitution court session")
    p.add_argument("--script", default="fig6_replay", help="replay script path or the bundled name 'fig6_replay'")
    p.add_argument("--constitution", default="paper", help="constitution rules file or the bundled name 'paper'")
    p.add_argument("--export", metavar="PATH", default=None, help="write the structured JSON trace here")
    p.set_defaults(func=cmd_court_replay)

    p = sub.add_parser("version", help="print the version")
    p.set_defaults(func=cmd_version)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"lexmodel {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
