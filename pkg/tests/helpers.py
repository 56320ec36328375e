"""Test-side utilities: random dataset generation, independent counting and
rounding oracles, and an HTML well-formedness checker.

The oracles deliberately share no code with the package: counting is a plain
double loop over rows and rounding goes through the decimal module, so a bug
in the production path cannot hide in its own verification.
"""

import random
from collections import Counter
from decimal import ROUND_HALF_UP, Decimal
from html.parser import HTMLParser

from tds.table import Dataset, build_dataset
from tds.values import NUMERIC, TEXT

_WORDS = ("YA", "TIDAK", "1A", "9G", "abc", "x y", 'q"t', "a,b", "ünïcode",
          "A/L", "line\nbreak", "'quoted'")
_NUMBERS = (0.0, 1.0, 2.0, 6.0, -3.5, 13.0, 500.0, 0.1, 1e-07, 12345.678)


def random_dataset(
    rng: random.Random,
    *,
    max_cases: int = 1000,
    max_columns: int = 5,
    max_distinct: int = 10,
    missing_rate: float = 0.10,
    allow_empty_text: bool = True,
    name: str = "R",
) -> Dataset:
    n = rng.randint(0, max_cases)
    cols = []
    for c in range(rng.randint(1, max_columns)):
        if rng.random() < 0.5:
            ctype = NUMERIC
            pool = rng.sample(_NUMBERS, rng.randint(1, min(max_distinct, len(_NUMBERS))))
        else:
            ctype = TEXT
            words = _WORDS + ("",) if allow_empty_text else _WORDS
            pool = rng.sample(words, rng.randint(1, min(max_distinct, len(words))))
        values = [
            None if rng.random() < missing_rate else rng.choice(pool)
            for _ in range(n)
        ]
        cols.append((f"C{c}", ctype, values))
    return build_dataset(name, cols)


def cell_multiset(d: Dataset) -> Counter:
    """Multiset of (column name lowercased, value) pairs across the dataset."""
    counts = Counter()
    for col in d.columns:
        for v in col.values:
            counts[(col.name.lower(), v)] += 1
    return counts


def count_pairs(d: Dataset, rowvar: str, colvar: str):
    """Brute-force crosstab: double loop over cases, no shared code."""
    r = d.column(rowvar).values
    c = d.column(colvar).values
    counts = Counter()
    excluded = 0
    for i in range(len(r)):
        if r[i] is None or c[i] is None:
            excluded += 1
        else:
            counts[(r[i], c[i])] += 1
    return counts, excluded


def decimal_percent(part: int, whole: int) -> float:
    """Independent one-decimal half-up percentage via the decimal module."""
    if whole == 0:
        return 0.0
    ratio = Decimal(part) * 100 / Decimal(whole)
    return float(ratio.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


_VOID_TAGS = {"meta", "br", "hr", "img", "link", "input", "col", "wbr"}


class _TagChecker(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack = []
        self.problems = []

    def handle_starttag(self, tag, attrs):
        if tag not in _VOID_TAGS:
            self.stack.append(tag)

    def handle_startendtag(self, tag, attrs):
        pass

    def handle_endtag(self, tag):
        if tag in _VOID_TAGS:
            return
        if not self.stack or self.stack[-1] != tag:
            self.problems.append(f"closing </{tag}> does not match {self.stack[-1:]}")
        else:
            self.stack.pop()


def check_html_well_formed(text: str) -> list:
    """Return a list of balance problems (empty means well formed)."""
    checker = _TagChecker()
    checker.feed(text)
    checker.close()
    if checker.stack:
        checker.problems.append(f"unclosed tags: {checker.stack}")
    return checker.problems


class _TableScraper(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.rows = []
        self._row = None
        self._cell = None

    def handle_starttag(self, tag, attrs):
        if tag == "tr":
            self._row = []
        elif tag in ("td", "th"):
            self._cell = []

    def handle_endtag(self, tag):
        if tag == "tr" and self._row is not None:
            self.rows.append(self._row)
            self._row = None
        elif tag in ("td", "th") and self._cell is not None:
            if self._row is not None:
                self._row.append("".join(self._cell))
            self._cell = None

    def handle_data(self, data):
        if self._cell is not None:
            self._cell.append(data)


def scrape_table(html_text: str) -> list:
    """All table rows in the page as lists of cell strings."""
    scraper = _TableScraper()
    scraper.feed(html_text)
    scraper.close()
    return scraper.rows
