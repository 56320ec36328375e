"""In-memory columnar datasets and their on-disk form.

A dataset is a named, ordered collection of equally long columns.  Each
column declares a type (TEXT or NUMERIC) and every non-missing cell must
match it.  Datasets are immutable: every operation returns a new one, so
instances can be shared freely.

Column names are compared case-insensitively everywhere, but the first-seen
spelling is kept for display.

On disk a dataset is a pair of files derived from one path stem:
``<stem>.tds.csv`` holds the body (header row plus one row per case, RFC 4180
quoting, LF endings) and ``<stem>.tds.json`` holds the metadata (dataset name
and the ordered column names and types).  A missing cell is a bare empty
field; an empty text cell is a quoted empty field (``""``), which is what
makes the round trip exact.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from . import csvio
from .errors import (
    DuplicateColumnError,
    FormatError,
    InvalidNameError,
    IoError,
    LengthMismatchError,
    TdsError,
    TypeViolationError,
    UnknownColumnError,
)
from .values import MISSING, NUMERIC, TEXT, as_number, number_to_text, parse_number

FORMAT_MARKER = "tds-dataset"
FORMAT_VERSION = 1


def _check_distinct(names: Iterable[str], what: str) -> None:
    seen: dict[str, str] = {}
    for name in names:
        key = name.lower()
        if key in seen:
            raise DuplicateColumnError(f"duplicate {what} {name!r}")
        seen[key] = name


@dataclass(frozen=True)
class Column:
    """One named column: declared type plus the ordered cell values."""

    name: str
    ctype: str  # TEXT or NUMERIC
    values: tuple

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Dataset:
    """A named, ordered set of equal-length columns."""

    name: str
    columns: tuple[Column, ...]

    @property
    def n_cases(self) -> int:
        return len(self.columns[0].values) if self.columns else 0

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def index_of(self, name: str) -> int:
        key = name.lower()
        for i, c in enumerate(self.columns):
            if c.name.lower() == key:
                return i
        raise UnknownColumnError(f"no column named {name!r} in dataset {self.name!r}")

    def column(self, name: str) -> Column:
        return self.columns[self.index_of(name)]

    def has_column(self, name: str) -> bool:
        key = name.lower()
        return any(c.name.lower() == key for c in self.columns)


@dataclass(frozen=True)
class RenameMap:
    """Ordered (old name, new name) pairs; names distinct within each side."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        _check_distinct((old for old, _ in self.pairs), "rename source")
        _check_distinct((new for _, new in self.pairs), "rename target")

    def new_name_for(self, name: str) -> str | None:
        key = name.lower()
        for old, new in self.pairs:
            if old.lower() == key:
                return new
        return None

    def __len__(self) -> int:
        return len(self.pairs)


EMPTY_RENAME = RenameMap(())


def _check_cell(name: str, ctype: str, v):
    """Validate one cell against the declared type; normalize numbers."""
    if v is MISSING:
        return MISSING
    if ctype == NUMERIC:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TypeViolationError(
                f"column {name!r} is NUMERIC but got {v!r}"
            )
        return as_number(v)  # NaN/inf normalize to missing
    if not isinstance(v, str):
        raise TypeViolationError(f"column {name!r} is TEXT but got {v!r}")
    return v


def build_dataset(name: str, columns: Sequence[tuple]) -> Dataset:
    """Construct a dataset from (name, type, values) triples.

    All value sequences must have equal length, names must be distinct
    (case-insensitively), and every non-missing value must match its column's
    declared type; violations raise rather than coerce.
    """
    cols: list[Column] = []
    for col_name, ctype, raw_values in columns:
        if not col_name:
            raise InvalidNameError("column name must be nonempty")
        if ctype not in (TEXT, NUMERIC):
            raise TypeViolationError(
                f"column {col_name!r} has unknown type {ctype!r}"
            )
        values = tuple(_check_cell(col_name, ctype, v) for v in raw_values)
        cols.append(Column(col_name, ctype, values))
    _check_distinct((c.name for c in cols), "column")
    if cols:
        n = len(cols[0].values)
        for c in cols:
            if len(c.values) != n:
                raise LengthMismatchError(
                    f"column {c.name!r} has {len(c.values)} values, expected {n}"
                )
    return Dataset(name, tuple(cols))


def rename_columns(d: Dataset, m: RenameMap) -> Dataset:
    """Rename columns in place (order and data preserved).

    Every source name in the map must exist in the dataset.
    """
    for old, _ in m.pairs:
        if not d.has_column(old):
            raise UnknownColumnError(
                f"cannot rename {old!r}: no such column in dataset {d.name!r}"
            )
    renamed = tuple(
        replace(c, name=m.new_name_for(c.name) or c.name) for c in d.columns
    )
    _check_distinct((c.name for c in renamed), "column")
    return Dataset(d.name, renamed)


def select_columns(d: Dataset, names: Sequence[str]) -> Dataset:
    """Project the dataset onto the named columns, in the given order."""
    _check_distinct(names, "selected column")
    return Dataset(d.name, tuple(d.column(n) for n in names))


def append_cases(base: Dataset, other: Dataset, m: RenameMap = EMPTY_RENAME) -> Dataset:
    """Concatenate the cases of two datasets after aligning column names.

    The rename map is applied to ``other`` first.  The result has the union
    of both column sets (base order first, then new columns in ``other``
    order); cells absent in one source are missing.  When a shared column's
    declared types differ the result column is TEXT and numbers are rendered
    with their canonical text form.
    """
    if m.pairs:
        other = rename_columns(other, m)

    n_base, n_other = base.n_cases, other.n_cases
    other_index = {c.name.lower(): c for c in other.columns}
    base_keys = {c.name.lower() for c in base.columns}

    out: list[Column] = []
    for col in base.columns:
        twin = other_index.get(col.name.lower())
        out.append(_stack_column(col.name, col, twin, n_base, n_other))
    for col in other.columns:
        if col.name.lower() not in base_keys:
            out.append(_stack_column(col.name, None, col, n_base, n_other))
    return Dataset(base.name, tuple(out))


def _stack_column(
    name: str, top: Column | None, bottom: Column | None, n_top: int, n_bottom: int
) -> Column:
    types = {c.ctype for c in (top, bottom) if c is not None}
    ctype = types.pop() if len(types) == 1 else TEXT

    def part(col: Column | None, n: int) -> tuple:
        if col is None:
            return (MISSING,) * n
        if ctype == TEXT and col.ctype == NUMERIC:
            return tuple(
                MISSING if v is MISSING else number_to_text(v) for v in col.values
            )
        return col.values

    return Column(name, ctype, part(top, n_top) + part(bottom, n_bottom))


# Persistence.

def dataset_file_pair(path) -> tuple[str, str]:
    """Map any path (stem, either pair member, or a foreign extension such as
    ``.sav``) to the body/metadata file pair."""
    p = str(path)
    stem = None
    for suffix in (".tds.csv", ".tds.json"):
        if p.endswith(suffix):
            stem = p[: -len(suffix)]
            break
    if stem is None:
        head, tail = os.path.split(p)
        root, ext = os.path.splitext(tail)
        stem = os.path.join(head, root) if ext else p
    return stem + ".tds.csv", stem + ".tds.json"


def save_dataset(d: Dataset, path) -> None:
    """Write the dataset as its .tds.csv/.tds.json pair (parents created)."""
    csv_path, json_path = dataset_file_pair(path)
    meta = {
        "format": FORMAT_MARKER,
        "version": FORMAT_VERSION,
        "name": d.name,
        "columns": [{"name": c.name, "type": c.ctype} for c in d.columns],
    }
    lines = []
    if d.columns:
        lines.append(csvio.encode_record(list(d.column_names)))
        for i in range(d.n_cases):
            cells = []
            for c in d.columns:
                v = c.values[i]
                if v is MISSING:
                    cells.append(None)
                elif isinstance(v, str):
                    cells.append(v)
                else:
                    cells.append(number_to_text(v))
            lines.append(csvio.encode_record(cells))
    body = "".join(line + "\n" for line in lines)
    try:
        parent = os.path.dirname(csv_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        Path(json_path).write_text(
            json.dumps(meta, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        Path(csv_path).write_text(body, encoding="utf-8", newline="\n")
    except OSError as e:
        raise IoError(f"cannot write dataset: {e}", source=csv_path) from e


def load_dataset(path) -> Dataset:
    """Read a dataset pair back; exact inverse of save_dataset."""
    csv_path, json_path = dataset_file_pair(path)
    if not os.path.exists(csv_path):
        raise IoError(f"no such file: {csv_path}", source=csv_path)
    meta = _read_metadata(json_path)
    name = meta["name"]
    schema = [(c["name"], c["type"]) for c in meta["columns"]]

    try:
        body = Path(csv_path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise IoError(f"no such file: {csv_path}", source=csv_path) from e
    except (OSError, UnicodeDecodeError) as e:
        raise IoError(f"cannot read dataset body: {e}", source=csv_path) from e

    records = csvio.split_records(body, source=csv_path)
    if not schema:
        if records:
            raise FormatError(
                "metadata declares no columns but body is not empty",
                source=csv_path, line=records[0][0],
            )
        return Dataset(name, ())

    if not records:
        raise FormatError("missing header row", source=csv_path, line=1)
    header_line, header = records[0]
    if [f.text for f in header] != [n for n, _ in schema]:
        raise FormatError(
            "header row does not match metadata columns",
            source=csv_path, line=header_line,
        )

    cells: list[list] = [[] for _ in schema]
    for line_no, record in records[1:]:
        if len(record) != len(schema):
            raise FormatError(
                f"row has {len(record)} fields, expected {len(schema)}",
                source=csv_path, line=line_no,
            )
        for (col_name, ctype), f, store in zip(schema, record, cells):
            store.append(_decode_cell(col_name, ctype, f, csv_path, line_no))

    try:
        return build_dataset(name, [(n, t, vals) for (n, t), vals in zip(schema, cells)])
    except TdsError as e:
        raise FormatError(f"corrupt dataset: {e.message}", source=csv_path) from e


def _decode_cell(col_name: str, ctype: str, f: csvio.Field, path: str, line_no: int):
    if f.text == "" and not f.quoted:
        return MISSING
    if ctype == NUMERIC:
        v = parse_number(f.text)
        if v is None:
            raise FormatError(
                f"non-numeric value {f.text!r} in NUMERIC column {col_name!r}",
                source=path, line=line_no,
            )
        return v
    return f.text


def _read_metadata(json_path: str) -> dict:
    try:
        raw = Path(json_path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise IoError(f"no such file: {json_path}", source=json_path) from e
    except (OSError, UnicodeDecodeError) as e:
        raise IoError(f"cannot read dataset metadata: {e}", source=json_path) from e
    try:
        meta = json.loads(raw)
    except json.JSONDecodeError as e:
        raise FormatError(f"metadata is not valid JSON: {e}", source=json_path) from e
    if not isinstance(meta, dict) or meta.get("format") != FORMAT_MARKER:
        raise FormatError("not a tds dataset (bad format marker)", source=json_path)
    if meta.get("version") != FORMAT_VERSION:
        raise FormatError(
            f"unsupported format version {meta.get('version')!r}", source=json_path
        )
    name = meta.get("name")
    columns = meta.get("columns")
    if not isinstance(name, str) or not isinstance(columns, list):
        raise FormatError("metadata missing name or columns", source=json_path)
    for c in columns:
        if (
            not isinstance(c, dict)
            or not isinstance(c.get("name"), str)
            or c.get("type") not in (TEXT, NUMERIC)
        ):
            raise FormatError("malformed column entry in metadata", source=json_path)
    return meta
