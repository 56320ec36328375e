"""Reading external CSV files into datasets, with deterministic type inference.

Unlike the persistence loader, ingestion knows nothing about the file: column
types are inferred (a column is NUMERIC exactly when every nonempty field
parses as a finite decimal number; an all-empty column is TEXT) and every
empty field, quoted or not, becomes a missing cell.  Identical bytes always
produce an identical dataset.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import csvio
from .errors import DuplicateColumnError, EmptyHeaderError, IoError, RaggedRowError
from .table import Dataset, build_dataset, _check_distinct
from .values import MISSING, NUMERIC, TEXT, parse_number


@dataclass(frozen=True)
class IngestOptions:
    delimiter: str = ","
    header: bool = True
    dataset_name: str | None = None  # default: file stem

    def __post_init__(self):
        if len(self.delimiter) != 1 or self.delimiter in ('"', "\n", "\r"):
            raise ValueError(f"unusable delimiter {self.delimiter!r}")


def dataset_name_for(path) -> str:
    """Default dataset name for a file: the base name without its extension.

    Script paths may use Windows separators regardless of platform, so both
    slash kinds delimit the base name.
    """
    base = str(path).replace("\\", "/").rsplit("/", 1)[-1]
    for suffix in (".tds.csv", ".tds.json"):
        if base.endswith(suffix):
            return base[: -len(suffix)]
    root, ext = os.path.splitext(base)
    return root if ext else base


def infer_column_type(raw: Sequence[str]) -> str:
    """NUMERIC when every nonempty field parses as a finite decimal number and
    at least one field is nonempty; otherwise TEXT."""
    seen_value = False
    for field in raw:
        if field == "":
            continue
        seen_value = True
        if parse_number(field) is None:
            return TEXT
    return NUMERIC if seen_value else TEXT


def read_csv(path, opts: IngestOptions | None = None) -> Dataset:
    """Read a CSV file into a dataset.

    The file must decode as UTF-8 (a leading BOM is skipped) and be
    rectangular after quoting rules; a short or long row raises RaggedRow
    with its line number.
    """
    opts = opts or IngestOptions()
    src = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise IoError(f"no such file: {src}", source=src) from e
    except UnicodeDecodeError as e:
        raise IoError(f"not valid UTF-8: {e}", source=src) from e
    except OSError as e:
        raise IoError(f"cannot read file: {e}", source=src) from e

    records = csvio.split_records(text, delimiter=opts.delimiter, source=src)
    name = opts.dataset_name or dataset_name_for(path)

    if opts.header:
        if not records:
            raise EmptyHeaderError("file has no header row", source=src, line=1)
        header_line, header = records.pop(0)
        names = [f.text for f in header]
        if any(n == "" for n in names):
            raise EmptyHeaderError(
                "header contains an empty column name", source=src, line=header_line
            )
    else:
        if not records:
            return Dataset(name, ())
        names = [f"V{i + 1}" for i in range(len(records[0][1]))]

    try:
        _check_distinct(names, "column")
    except DuplicateColumnError as e:
        raise DuplicateColumnError(e.message, source=src, line=1) from e

    raw: list[list[str]] = [[] for _ in names]
    for line_no, record in records:
        if len(record) != len(names):
            raise RaggedRowError(
                f"row has {len(record)} fields, expected {len(names)}",
                source=src, line=line_no,
            )
        for store, f in zip(raw, record):
            store.append(f.text)

    columns = []
    for col_name, fields in zip(names, raw):
        ctype = infer_column_type(fields)
        if ctype == NUMERIC:
            values = [MISSING if f == "" else parse_number(f) for f in fields]
        else:
            values = [MISSING if f == "" else f for f in fields]
        columns.append((col_name, ctype, values))
    return build_dataset(name, columns)
