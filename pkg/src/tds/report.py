"""Deterministic rendering of analysis results: aligned text tables and a
static HTML site.

Output bytes are a pure function of the inputs: no clock is read anywhere,
section pages get stable names (``freq-1.html``, ``ctab-2.html``, numbered in
section order), and every number is printed exactly as stored in the result
(counts as integers, percents with their one decimal).  Cell text is escaped
on the way into HTML, so data-driven pages cannot inject markup.
"""

from __future__ import annotations

import html
from dataclasses import dataclass
from pathlib import Path

from .errors import IoError
from .stats import CrossTab, FrequencyTable, rounded_percent
from .values import value_to_text

_FREQ_HEADERS = ("Value", "Frequency", "Percent", "Valid Percent", "Cumulative Percent")


@dataclass(frozen=True)
class Section:
    """One report section: a heading, a result, and the command that made it."""

    heading: str
    result: "FrequencyTable | CrossTab"
    source: str = ""


@dataclass(frozen=True)
class ReportBundle:
    title: str
    sections: tuple[Section, ...]
    generated_stamp: str | None = None


def _pct(p: float) -> str:
    return f"{p:.1f}"


def _align(rows: list[list[str]], left_cols: int = 1) -> str:
    """Fixed-width table: ' | ' separators, text left, numbers right."""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [
            cell.ljust(w) if i < left_cols else cell.rjust(w)
            for i, (cell, w) in enumerate(zip(row, widths))
        ]
        lines.append(" | ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _frequency_grid(t: FrequencyTable) -> list[list[str]]:
    grid = [list(_FREQ_HEADERS)]
    for row in t.rows:
        grid.append([
            value_to_text(row.value),
            str(row.frequency),
            _pct(row.percent),
            _pct(row.valid_percent),
            _pct(row.cumulative_percent),
        ])
    if t.rows:
        grid.append([
            "Total",
            str(t.n_valid),
            _pct(rounded_percent(t.n_valid, t.n_cases)),
            _pct(100.0),
            "",
        ])
    return grid


def _crosstab_grid(t: CrossTab) -> list[list[str]]:
    head = [f"{t.row_variable} \\ {t.col_variable}"]
    head += [value_to_text(v) for v in t.col_values]
    head.append("Total")
    grid = [head]
    for rv, cells, total in zip(t.row_values, t.cells, t.row_totals):
        grid.append([value_to_text(rv), *[str(c) for c in cells], str(total)])
    grid.append(["Total", *[str(c) for c in t.col_totals], str(t.grand_total)])
    return grid


def render_text(result: "FrequencyTable | CrossTab") -> str:
    """One analysis result as a fixed-width text table."""
    if isinstance(result, FrequencyTable):
        text = _align(_frequency_grid(result))
        return text + f"Valid {result.n_valid} / Missing {result.n_missing}\n"
    if isinstance(result, CrossTab):
        text = _align(_crosstab_grid(result))
        if result.n_excluded:
            text += f"Excluded (missing): {result.n_excluded}\n"
        return text
    raise TypeError(f"not an analysis result: {result!r}")


# HTML emission --------------------------------------------------------

_STYLE = (
    "body{font-family:sans-serif;margin:2em}"
    "table{border-collapse:collapse;margin:1em 0}"
    "th,td{border:1px solid #999;padding:0.25em 0.6em}"
    "th{background:#eee}"
    "td.num{text-align:right}"
    "pre{background:#f6f6f6;padding:0.6em}"
)


def _esc(text: str) -> str:
    return html.escape(text, quote=True)


def _page(title: str, body: str, stamp: str | None) -> str:
    footer = f"<footer><p>{_esc(stamp)}</p></footer>\n" if stamp else ""
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n'
        "<head>\n"
        '<meta charset="utf-8"/>\n'
        f"<title>{_esc(title)}</title>\n"
        f"<style>{_STYLE}</style>\n"
        "</head>\n"
        "<body>\n"
        f"{body}"
        f"{footer}"
        "</body>\n"
        "</html>\n"
    )


def _grid_html(grid: list[list[str]], left_cols: int = 1) -> str:
    out = ["<table>\n<thead>\n<tr>"]
    out += [f"<th>{_esc(c)}</th>" for c in grid[0]]
    out.append("</tr>\n</thead>\n<tbody>\n")
    for row in grid[1:]:
        out.append("<tr>")
        for i, cell in enumerate(row):
            cls = "" if i < left_cols else ' class="num"'
            out.append(f"<td{cls}>{_esc(cell)}</td>")
        out.append("</tr>\n")
    out.append("</tbody>\n</table>\n")
    return "".join(out)


def result_html(result: "FrequencyTable | CrossTab") -> str:
    if isinstance(result, FrequencyTable):
        grid = _frequency_grid(result)
        extra = f"<p>Valid {result.n_valid} / Missing {result.n_missing}</p>\n"
    else:
        grid = _crosstab_grid(result)
        extra = (
            f"<p>Excluded (missing): {result.n_excluded}</p>\n"
            if result.n_excluded else ""
        )
    return _grid_html(grid) + extra


def section_filename(section: Section, position: int) -> str:
    """Stable page name: kind prefix plus 1-based section number."""
    kind = "freq" if isinstance(section.result, FrequencyTable) else "ctab"
    return f"{kind}-{position}.html"


def emit_site(bundle: ReportBundle, out_dir) -> list[Path]:
    """Write index.html plus one page per section; returns the paths written.

    Identical bundles produce byte-identical trees (UTF-8, LF endings).
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create report directory: {e}", source=str(out)) from e

    written: list[Path] = []
    items = []
    for i, section in enumerate(bundle.sections, start=1):
        name = section_filename(section, i)
        body = [f"<h1>{_esc(section.heading)}</h1>\n"]
        body.append(result_html(section.result))
        if section.source:
            body.append(f"<h2>Command</h2>\n<pre>{_esc(section.source)}</pre>\n")
        body.append('<p><a href="index.html">Back to index</a></p>\n')
        _write(out / name, _page(section.heading, "".join(body), bundle.generated_stamp))
        written.append(out / name)
        items.append(f'<li><a href="{name}">{_esc(section.heading)}</a></li>\n')

    index_body = [f"<h1>{_esc(bundle.title)}</h1>\n"]
    if items:
        index_body.append("<ol>\n" + "".join(items) + "</ol>\n")
    else:
        index_body.append("<p>No analyses.</p>\n")
    _write(out / "index.html", _page(bundle.title, "".join(index_body), bundle.generated_stamp))
    written.insert(0, out / "index.html")
    return written


def _write(path: Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise IoError(f"cannot write report file: {e}", source=str(path)) from e
