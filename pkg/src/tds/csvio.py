"""Low-level CSV reading and writing (RFC 4180 quoting, LF line endings).

The standard library's csv module cannot tell a quoted empty field (``""``)
from an absent one, and that distinction is exactly how the dataset body
format separates empty text from a missing cell.  The codec here keeps it:
the reader reports, per field, whether quotes were used, and the writer takes
``None`` for a bare empty field while quoting an empty string.

Everything else is plain RFC 4180: fields containing the delimiter, quotes or
line breaks are quoted, quotes are doubled, records end at LF, CRLF or CR
(quoted line breaks are data).  A UTF-8 byte order mark at the start of the
text is skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError


@dataclass(frozen=True)
class Field:
    """One parsed CSV field: its text and whether it was quoted."""

    text: str
    quoted: bool = False


def needs_quoting(text: str, delimiter: str) -> bool:
    return any(ch in text for ch in (delimiter, '"', "\n", "\r"))


def encode_field(cell: str | None, delimiter: str = ",") -> str:
    """Encode one cell: None -> bare empty; "" -> quoted empty; else minimal
    quoting."""
    if cell is None:
        return ""
    if cell == "" or needs_quoting(cell, delimiter):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def encode_record(cells: "list[str | None]", delimiter: str = ",") -> str:
    """Encode one record, without the trailing line ending."""
    return delimiter.join(encode_field(c, delimiter) for c in cells)


def split_records(
    text: str, delimiter: str = ",", source: str | None = None
) -> list[tuple[int, list[Field]]]:
    """Parse CSV text into (starting line number, fields) records.

    Records are terminated by a line ending; a trailing line ending does not
    produce an extra empty record.  Raises FormatError for a quote opened but
    never closed, or for stray characters after a closing quote.
    """
    if text.startswith("﻿"):
        text = text[1:]

    records: list[tuple[int, list[Field]]] = []
    fields: list[Field] = []
    buf: list[str] = []
    quoted = False            # current field used quotes
    in_quotes = False         # currently inside a quoted section
    seen_any = False          # any character consumed since last record end
    line = 1
    record_line = 1

    i = 0
    n = len(text)

    def end_field() -> None:
        fields.append(Field("".join(buf), quoted))

    def end_record() -> None:
        nonlocal fields, buf, quoted, seen_any, record_line
        end_field()
        records.append((record_line, fields))
        fields = []
        buf = []
        quoted = False
        seen_any = False
        record_line = line

    while i < n:
        ch = text[i]
        if in_quotes:
            if ch == '"':
                if i + 1 < n and text[i + 1] == '"':
                    buf.append('"')
                    i += 2
                    continue
                in_quotes = False
                i += 1
                # A closing quote must be followed by a delimiter, a line
                # ending, or end of input.
                if i < n and text[i] not in (delimiter, "\n", "\r"):
                    raise FormatError(
                        f"unexpected character {text[i]!r} after closing quote",
                        source=source, line=line,
                    )
                continue
            if ch == "\n":
                line += 1
            buf.append(ch)
            i += 1
            continue

        if ch == '"' and not buf:
            quoted = True
            in_quotes = True
            seen_any = True
            i += 1
            continue
        if ch == delimiter:
            end_field()
            buf = []
            quoted = False
            seen_any = True
            i += 1
            continue
        if ch in ("\n", "\r"):
            if ch == "\r" and i + 1 < n and text[i + 1] == "\n":
                i += 1
            line += 1
            i += 1
            end_record()
            continue
        if ch == '"':
            raise FormatError(
                "quote character inside an unquoted field",
                source=source, line=line,
            )
        buf.append(ch)
        seen_any = True
        i += 1

    if in_quotes:
        raise FormatError("quoted field never closed", source=source, line=record_line)
    if seen_any or fields or buf:
        end_record()
    return records
