"""Descriptive statistics: frequency tables, two-way crosstabs, missing counts.

Percent columns are rounded half away from zero to one decimal, computed from
exact integer ratios so no floating-point drift can creep in; cumulative
percents are rounded running sums of the exact proportions (not sums of
rounded values), which is why the last one is always exactly 100.0.

Distinct values sort ascending: numerically for NUMERIC columns and
lexicographically for TEXT columns.  Missing cells never count as values; a
case with a missing cell in either crosstab variable is excluded from every
count and reported via ``n_excluded``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .table import Dataset
from .values import MISSING


def rounded_percent(part: int, whole: int) -> float:
    """part/whole as a percentage, one decimal, half away from zero."""
    if whole == 0:
        return 0.0
    q, r = divmod(1000 * part, whole)
    if 2 * r >= whole:
        q += 1
    return q / 10.0


@dataclass(frozen=True)
class FrequencyRow:
    value: "str | float"
    frequency: int
    percent: float
    valid_percent: float
    cumulative_percent: float


@dataclass(frozen=True)
class FrequencyTable:
    variable: str
    n_valid: int
    n_missing: int
    rows: tuple[FrequencyRow, ...]

    @property
    def n_cases(self) -> int:
        return self.n_valid + self.n_missing


@dataclass(frozen=True)
class CrossTab:
    row_variable: str
    col_variable: str
    row_values: tuple
    col_values: tuple
    cells: tuple[tuple[int, ...], ...]
    row_totals: tuple[int, ...]
    col_totals: tuple[int, ...]
    grand_total: int
    n_excluded: int


def frequencies(d: Dataset, var: str) -> FrequencyTable:
    """Frequency table of one variable over its non-missing cells."""
    col = d.column(var)
    counts = Counter(v for v in col.values if v is not MISSING)
    n_valid = sum(counts.values())
    n_missing = len(col.values) - n_valid
    n = len(col.values)

    rows = []
    running = 0
    for value in sorted(counts):
        freq = counts[value]
        running += freq
        rows.append(FrequencyRow(
            value=value,
            frequency=freq,
            percent=rounded_percent(freq, n),
            valid_percent=rounded_percent(freq, n_valid),
            cumulative_percent=rounded_percent(running, n_valid),
        ))
    return FrequencyTable(col.name, n_valid, n_missing, tuple(rows))


def crosstab(d: Dataset, rowvar: str, colvar: str) -> CrossTab:
    """Joint counts of two variables with marginals and a grand total."""
    rcol = d.column(rowvar)
    ccol = d.column(colvar)
    pair_counts: Counter = Counter()
    excluded = 0
    for rv, cv in zip(rcol.values, ccol.values):
        if rv is MISSING or cv is MISSING:
            excluded += 1
        else:
            pair_counts[(rv, cv)] += 1

    row_values = tuple(sorted({rv for rv, _ in pair_counts}))
    col_values = tuple(sorted({cv for _, cv in pair_counts}))
    cells = tuple(
        tuple(pair_counts.get((rv, cv), 0) for cv in col_values)
        for rv in row_values
    )
    row_totals = tuple(sum(row) for row in cells)
    col_totals = tuple(sum(col) for col in zip(*cells)) if cells else ()
    return CrossTab(
        row_variable=rcol.name,
        col_variable=ccol.name,
        row_values=row_values,
        col_values=col_values,
        cells=cells,
        row_totals=row_totals,
        col_totals=col_totals,
        grand_total=sum(row_totals),
        n_excluded=excluded,
    )


def missing_summary(d: Dataset) -> list[tuple[str, int, int]]:
    """Per column: (name, count of valid cells, count of missing cells)."""
    out = []
    for col in d.columns:
        n_missing = sum(1 for v in col.values if v is MISSING)
        out.append((col.name, len(col.values) - n_missing, n_missing))
    return out
