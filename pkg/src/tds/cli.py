"""Command-line entry point.

Subcommands:

    tds run SCRIPT            execute a script, report all analyses
    tds freq DATASET VAR      one frequency table from a saved dataset
    tds crosstab DATASET R C  one crosstab from a saved dataset
    tds info DATASET          schema and missing-value summary

Exit codes: 0 success, 1 usage error, 2 script/parse/data error.  Diagnostics
go to stderr as ``file:line:col: error: message``; set TDS_NO_COLOR to
disable coloring.  All paths are relative to the working directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .engine import AnalysisOutput, Environment, execute_script
from .errors import IoError, TdsError
from .report import ReportBundle, Section, emit_site, render_text
from .stats import FrequencyTable, crosstab, frequencies, missing_summary
from .syntax import Crosstabs, Frequencies, parse_script, render_command
from .table import load_dataset

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_report_flags(p):
        p.add_argument("--out", default="report", metavar="DIR",
                       help="report output directory (default ./report)")
        p.add_argument("--format", choices=("text", "html", "both"),
                       default="both", help="report form (default both)")
        p.add_argument("--stamp", default=None, metavar="TEXT",
                       help="fixed text embedded in report footers")

    p_run = sub.add_parser("run", help="execute a script file")
    p_run.add_argument("script", help="script file (.tds.sps)")
    p_run.add_argument("--strict", action="store_true",
                       help="report values a RECODE left unmatched")
    add_report_flags(p_run)

    p_freq = sub.add_parser("freq", help="frequency table for one variable")
    p_freq.add_argument("dataset", help="saved dataset (.tds.csv stem)")
    p_freq.add_argument("variable")
    add_report_flags(p_freq)

    p_ct = sub.add_parser("crosstab", help="two-way crosstab")
    p_ct.add_argument("dataset", help="saved dataset (.tds.csv stem)")
    p_ct.add_argument("row")
    p_ct.add_argument("col")
    add_report_flags(p_ct)

    p_info = sub.add_parser("info", help="schema and missing-value summary")
    p_info.add_argument("dataset", help="saved dataset (.tds.csv stem)")

    return parser


def _color_enabled() -> bool:
    return sys.stderr.isatty() and not os.environ.get("TDS_NO_COLOR")


def _diagnose(err: TdsError) -> None:
    loc = err.location()
    text = f"{loc}: error: {err.message}" if loc else f"error: {err.message}"
    if _color_enabled():
        text = f"\033[31m{text}\033[0m"
    print(text, file=sys.stderr)


def _warn(message: str) -> None:
    text = f"warning: {message}"
    if _color_enabled():
        text = f"\033[33m{text}\033[0m"
    print(text, file=sys.stderr)


def _heading(output: AnalysisOutput) -> str:
    result = output.result
    if isinstance(result, FrequencyTable):
        return f"Frequencies: {result.variable}"
    return f"Crosstab: {result.row_variable} by {result.col_variable}"


def _emit(bundle: ReportBundle, fmt: str, out_dir: str) -> None:
    if fmt in ("text", "both"):
        for section in bundle.sections:
            print(section.heading)
            print(render_text(section.result), end="")
            print()
    if fmt in ("html", "both"):
        emit_site(bundle, out_dir)


def _cmd_run(args) -> int:
    try:
        text = Path(args.script).read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot read script: {e}", source=args.script) from e
    script = parse_script(text, source=args.script)
    env = Environment(strict=args.strict)
    execute_script(script, env)
    for message in env.warnings:
        _warn(message)
    sections = tuple(
        Section(_heading(o), o.result, render_command(o.command))
        for o in env.outputs
    )
    bundle = ReportBundle(Path(args.script).name, sections, args.stamp)
    _emit(bundle, args.format, args.out)
    return 0


def _cmd_freq(args) -> int:
    d = load_dataset(args.dataset)
    table = frequencies(d, args.variable)
    source = render_command(Frequencies((table.variable,)))
    bundle = ReportBundle(
        d.name, (Section(f"Frequencies: {table.variable}", table, source),),
        args.stamp,
    )
    _emit(bundle, args.format, args.out)
    return 0


def _cmd_crosstab(args) -> int:
    d = load_dataset(args.dataset)
    table = crosstab(d, args.row, args.col)
    source = render_command(Crosstabs(table.row_variable, table.col_variable))
    bundle = ReportBundle(
        d.name,
        (Section(
            f"Crosstab: {table.row_variable} by {table.col_variable}",
            table, source,
        ),),
        args.stamp,
    )
    _emit(bundle, args.format, args.out)
    return 0


def _cmd_info(args) -> int:
    d = load_dataset(args.dataset)
    print(f"Dataset: {d.name}")
    print(f"Cases: {d.n_cases}")
    print("Columns:")
    summary = missing_summary(d)
    name_w = max((len(name) for name, _, _ in summary), default=0)
    for (name, n_valid, n_missing), col in zip(summary, d.columns):
        print(f"  {name.ljust(name_w)}  {col.ctype:<7}  "
              f"valid {n_valid}, missing {n_missing}")
    return 0


_HANDLERS = {
    "run": _cmd_run,
    "freq": _cmd_freq,
    "crosstab": _cmd_crosstab,
    "info": _cmd_info,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _HANDLERS[args.subcommand](args)
    except TdsError as e:
        _diagnose(e)
        return DATA_ERROR


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
