"""Cell values and the canonical text forms used everywhere they are printed.

A cell is one of three things, represented with plain Python types:

* text        -> ``str``
* number      -> finite ``float`` (never NaN or infinity)
* missing     -> ``None`` (the system-missing marker)

Keeping native types means equality, sorting and hashing behave the obvious
way; the helpers here guard the "finite float" rule and pin down one
deterministic text rendering for numbers so that reports, scripts and the
persistence format all print the same thing.
"""

from __future__ import annotations

import math
import re

# A cell value: str (text), float (number) or None (missing).
Value = "str | float | None"

MISSING = None

TEXT = "TEXT"
NUMERIC = "NUMERIC"

# Plain decimal numbers: optional sign, optional fraction, optional exponent.
# Deliberately narrower than float(): no "nan"/"inf", no underscores, no hex,
# no thousands separators or currency marks.
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

# Integral floats up to this bound are printed in integer form; above it the
# digit string would be longer than the round-trip repr.
_INT_FORM_LIMIT = 1e16


def as_number(x: int | float) -> float | None:
    """Normalize a numeric input to a finite float; NaN/inf become missing."""
    v = float(x)
    if not math.isfinite(v):
        return MISSING
    return v


def parse_number(text: str) -> float | None:
    """Parse a text field as a finite decimal number, or None if it is not one.

    Accepts optional surrounding spaces/tabs.  Rejects anything float() would
    take that a spreadsheet column would not: "nan", "inf", "1_0", "0x10".
    """
    stripped = text.strip(" \t")
    if not _NUMBER_RE.fullmatch(stripped):
        return None
    v = float(stripped)
    if not math.isfinite(v):  # overflow such as 1e999
        return None
    return v


def number_to_text(v: float) -> str:
    """Canonical text for a number: integer form without ".0", otherwise the
    shortest decimal that round-trips."""
    if v.is_integer() and abs(v) < _INT_FORM_LIMIT:
        return str(int(v))
    return repr(v)


def value_to_text(v: "str | float | None") -> str:
    """Display text for any cell value; missing renders as the empty string."""
    if v is MISSING:
        return ""
    if isinstance(v, str):
        return v
    return number_to_text(v)
