"""Lexer, AST and parser for the command script language, plus the canonical
renderer.

The language is a small batch dialect: one statement per period, where the
period only terminates a statement at the end of a physical line (so periods
inside quoted file paths are plain characters and statements may wrap across
lines).  Keywords are case-insensitive and not reserved; identifier spelling
is preserved.  ``#`` starts a line comment.

Statement forms:

    GET FILE='path'.
    DATASET NAME handle.
    MATCH FILES /FILE=* /FILE='path' ... /RENAME (old ... = new ...).
    RECODE var ... (pattern=target) ... .
    EXECUTE.
    FREQUENCIES VARIABLES=var ... .
    CROSSTABS /TABLES=rowvar BY colvar.
    SAVE OUTFILE='path'.

Trailing material the engine has no use for (``WINDOW=FRONT``,
``/ORDER=ANALYSIS``, ``/COMPRESSED``, unknown MATCH FILES subcommands) is
kept verbatim as inert annotations, never an error.

Recode source patterns: a number or quoted string matches exactly; an
unquoted bareword is tried as a number first and otherwise matches as text
(case-sensitively); ``lo THRU hi``, ``LOWEST THRU hi`` and ``lo THRU
HIGHEST`` match numeric ranges, endpoints included.  Rules apply first match
wins, so overlapping ranges are legal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .errors import (
    DuplicateColumnError,
    IllegalCharacterError,
    ParseError,
    UnterminatedStringError,
)
from .table import RenameMap
from .values import number_to_text, parse_number

KEYWORDS = frozenset({
    "GET", "FILE", "DATASET", "NAME", "MATCH", "FILES", "RENAME", "RECODE",
    "EXECUTE", "FREQUENCIES", "VARIABLES", "CROSSTABS", "TABLES", "BY",
    "SAVE", "OUTFILE", "THRU", "LOWEST", "HIGHEST",
})

# Token kinds.
KW = "KW"
ID = "ID"
NUM = "NUM"
STR = "STR"
LPAREN = "LPAREN"
RPAREN = "RPAREN"
EQUALS = "EQUALS"
SLASH = "SLASH"
STAR = "STAR"
DOT = "DOT"
TERM = "TERM"

_PUNCT = {"(": LPAREN, ")": RPAREN, "=": EQUALS, "/": SLASH, "*": STAR}


@dataclass(frozen=True)
class Token:
    kind: str
    value: "str | float"   # KW: canonical upper; NUM: float; STR: content
    line: int
    col: int
    text: str              # source spelling

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.col})"


def _is_word_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _scan_number_text(text: str, i: int) -> int:
    """Return the end index of a number lexeme starting at i, or i if none."""
    n = len(text)
    j = i
    if j < n and text[j] in "+-":
        j += 1
    digits = False
    while j < n and text[j].isdigit():
        j += 1
        digits = True
    # A '.' joins the number only when digits follow, so a trailing period
    # stays available as the statement terminator.
    if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
        j += 1
        while j < n and text[j].isdigit():
            j += 1
            digits = True
    if not digits:
        return i
    if j < n and text[j] in "eE":
        k = j + 1
        if k < n and text[k] in "+-":
            k += 1
        if k < n and text[k].isdigit():
            while k < n and text[k].isdigit():
                k += 1
            j = k
    return j


def tokenize(text: str, source: str | None = None) -> list[Token]:
    """Split script text into tokens.

    A period terminates a statement (TERM) only when the rest of its line is
    blank or a comment; elsewhere it is an ordinary DOT.  A word beginning
    with digits that runs into letters ("2A") is a single bareword ID.
    """
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def err(cls, message: str, at_line: int, at_col: int):
        raise cls(message, source=source, line=at_line, col=at_col)

    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            col += 1
            continue
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch == "\r":
            i += 1
            if i < n and text[i] == "\n":
                i += 1
            line += 1
            col = 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "'":
            start_line, start_col = line, col
            j = i + 1
            parts: list[str] = []
            while True:
                if j >= n or text[j] == "\n":
                    err(UnterminatedStringError, "string never closed", start_line, start_col)
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        parts.append("'")
                        j += 2
                        continue
                    j += 1
                    break
                parts.append(text[j])
                j += 1
            tokens.append(Token(STR, "".join(parts), start_line, start_col, text[i:j]))
            col += j - i
            i = j
            continue

        num_end = _scan_number_text(text, i)
        if num_end > i:
            if num_end < n and _is_word_char(text[num_end]):
                # Bareword such as 2A or 9G: extend over the word characters.
                j = num_end
                while j < n and _is_word_char(text[j]):
                    j += 1
                word = text[i:j]
                tokens.append(Token(ID, word, line, col, word))
                col += j - i
                i = j
            else:
                lexeme = text[i:num_end]
                tokens.append(Token(NUM, float(lexeme), line, col, lexeme))
                col += num_end - i
                i = num_end
            continue

        if _is_word_start(ch):
            j = i
            while j < n and _is_word_char(text[j]):
                j += 1
            word = text[i:j]
            upper = word.upper()
            if upper in KEYWORDS:
                tokens.append(Token(KW, upper, line, col, word))
            else:
                tokens.append(Token(ID, word, line, col, word))
            col += j - i
            i = j
            continue

        if ch == ".":
            j = i + 1
            while j < n and text[j] in " \t":
                j += 1
            if j >= n or text[j] in "\n\r#":
                tokens.append(Token(TERM, ".", line, col, "."))
            else:
                tokens.append(Token(DOT, ".", line, col, "."))
            i += 1
            col += 1
            continue

        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, line, col, ch))
            i += 1
            col += 1
            continue

        err(IllegalCharacterError, f"illegal character {ch!r}", line, col)

    return tokens


# AST ------------------------------------------------------------------

@dataclass(frozen=True)
class ExactPattern:
    """Matches one value exactly (text case-sensitively, numbers by equality)."""

    value: "str | float"


@dataclass(frozen=True)
class RangePattern:
    """Matches numbers in [lo, hi]."""

    lo: float
    hi: float


@dataclass(frozen=True)
class LowestThruPattern:
    """Matches numbers <= hi."""

    hi: float


@dataclass(frozen=True)
class ThruHighestPattern:
    """Matches numbers >= lo."""

    lo: float


Pattern = Union[ExactPattern, RangePattern, LowestThruPattern, ThruHighestPattern]


@dataclass(frozen=True)
class RecodeRule:
    pattern: Pattern
    target: "str | float"


@dataclass(frozen=True)
class RecodeSpec:
    """Ordered recode rules; application is first match wins."""

    rules: tuple[RecodeRule, ...]

    def __post_init__(self):
        if not self.rules:
            raise ValueError("a recode spec needs at least one rule")


@dataclass(frozen=True)
class FileRef:
    """A MATCH FILES source: a path, or None for the active dataset (*)."""

    path: str | None = None

    @property
    def is_active(self) -> bool:
        return self.path is None


@dataclass(frozen=True)
class Command:
    """Base of all statements; annotations keep inert trailing subcommands."""

    annotations: tuple[str, ...] = field(default=(), kw_only=True)
    line: int = field(default=0, kw_only=True, compare=False)
    col: int = field(default=0, kw_only=True, compare=False)


@dataclass(frozen=True)
class GetFile(Command):
    path: str


@dataclass(frozen=True)
class DatasetName(Command):
    name: str


@dataclass(frozen=True)
class MatchFiles(Command):
    files: tuple[FileRef, ...]
    rename: RenameMap


@dataclass(frozen=True)
class Recode(Command):
    variables: tuple[str, ...]
    spec: RecodeSpec


@dataclass(frozen=True)
class Execute(Command):
    pass


@dataclass(frozen=True)
class Frequencies(Command):
    variables: tuple[str, ...]


@dataclass(frozen=True)
class Crosstabs(Command):
    row_var: str
    col_var: str


@dataclass(frozen=True)
class SaveOutfile(Command):
    path: str


@dataclass(frozen=True)
class Script:
    commands: tuple[Command, ...]


# Parser ---------------------------------------------------------------

def _describe(tok: Token | None) -> str:
    if tok is None:
        return "end of statement"
    if tok.kind == KW:
        return f"keyword {tok.value}"
    if tok.kind == ID:
        return f"identifier {tok.text!r}"
    if tok.kind == NUM:
        return f"number {tok.text}"
    if tok.kind == STR:
        return "string"
    return f"{tok.text!r}"


class _StatementParser:
    """Parses one statement's tokens (terminator excluded)."""

    def __init__(self, tokens: list[Token], source: str | None):
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail("more input")
        self.pos += 1
        return tok

    @property
    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def fail(self, expected: str, tok: Token | None = None):
        tok = tok if tok is not None else self.peek()
        if tok is None:
            tok = self.tokens[-1]
            raise ParseError(
                f"expected {expected} at end of statement",
                source=self.source, line=tok.line, col=tok.col,
            )
        raise ParseError(
            f"expected {expected}, found {_describe(tok)}",
            source=self.source, line=tok.line, col=tok.col,
        )

    def expect_kw(self, name: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != KW or tok.value != name:
            self.fail(f"keyword {name}")
        return self.take()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            self.fail(what)
        return self.take()

    def take_name(self, what: str = "a name") -> str:
        tok = self.peek()
        if tok is None or tok.kind not in (KW, ID):
            self.fail(what)
        return self.take().text

    def at_name(self) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in (KW, ID)

    def rest_as_annotations(self) -> tuple[str, ...]:
        parts = []
        while not self.at_end:
            parts.append(_annotation_text(self.take()))
        return tuple(parts)


def _annotation_text(tok: Token) -> str:
    if tok.kind == NUM:
        return number_to_text(tok.value)
    if tok.kind == STR:
        return quote_string(tok.value)
    return tok.text


def _iter_statements(tokens: list[Token], source: str | None) -> Iterator[list[Token]]:
    stmt: list[Token] = []
    for tok in tokens:
        if tok.kind == TERM:
            if stmt:
                yield stmt
                stmt = []
            continue
        stmt.append(tok)
    if stmt:
        last = stmt[-1]
        raise ParseError(
            "statement not terminated by '.'",
            source=source, line=last.line, col=last.col,
        )


def parse_script(text: str, source: str | None = None) -> Script:
    """Parse script text into a Script AST.

    The first error aborts with a ParseError carrying the offending line and
    column; statements consisting of a lone period are skipped.
    """
    tokens = tokenize(text, source=source)
    commands = []
    for stmt in _iter_statements(tokens, source):
        commands.append(_parse_statement(stmt, source))
    return Script(tuple(commands))


def _parse_statement(stmt: list[Token], source: str | None) -> Command:
    p = _StatementParser(stmt, source)
    head = p.peek()
    span = {"line": head.line, "col": head.col}
    if head.kind != KW:
        p.fail("a command keyword")
    if head.value == "GET":
        p.take()
        p.expect_kw("FILE")
        p.expect_kind(EQUALS, "'='")
        path = p.expect_kind(STR, "a quoted file path").value
        return GetFile(path, annotations=p.rest_as_annotations(), **span)
    if head.value == "DATASET":
        p.take()
        p.expect_kw("NAME")
        name = p.take_name("a dataset name")
        return DatasetName(name, annotations=p.rest_as_annotations(), **span)
    if head.value == "MATCH":
        p.take()
        p.expect_kw("FILES")
        return _parse_match_files(p, span)
    if head.value == "RECODE":
        p.take()
        variables = []
        while p.at_name():
            variables.append(p.take_name())
        if not variables:
            p.fail("a variable name")
        tok = p.peek()
        if tok is None or tok.kind != LPAREN:
            p.fail("a recode rule '('")
        spec = _parse_rules(p)
        return Recode(
            tuple(variables), spec, annotations=p.rest_as_annotations(), **span
        )
    if head.value == "EXECUTE":
        p.take()
        return Execute(annotations=p.rest_as_annotations(), **span)
    if head.value == "FREQUENCIES":
        p.take()
        p.expect_kw("VARIABLES")
        p.expect_kind(EQUALS, "'='")
        variables = []
        while p.at_name():
            variables.append(p.take_name())
        if not variables:
            p.fail("a variable name")
        return Frequencies(
            tuple(variables), annotations=p.rest_as_annotations(), **span
        )
    if head.value == "CROSSTABS":
        p.take()
        p.expect_kind(SLASH, "'/'")
        p.expect_kw("TABLES")
        p.expect_kind(EQUALS, "'='")
        row_var = p.take_name("a row variable")
        p.expect_kw("BY")
        col_var = p.take_name("a column variable")
        return Crosstabs(
            row_var, col_var, annotations=p.rest_as_annotations(), **span
        )
    if head.value == "SAVE":
        p.take()
        p.expect_kw("OUTFILE")
        p.expect_kind(EQUALS, "'='")
        path = p.expect_kind(STR, "a quoted file path").value
        return SaveOutfile(path, annotations=p.rest_as_annotations(), **span)
    p.fail("a command keyword (GET, DATASET, MATCH, RECODE, EXECUTE, "
           "FREQUENCIES, CROSSTABS or SAVE)")
    raise AssertionError("unreachable")


def _parse_match_files(p: _StatementParser, span: dict) -> MatchFiles:
    files: list[FileRef] = []
    rename_pairs: list[tuple[str, str]] = []
    annotations: list[str] = []
    while not p.at_end:
        slash = p.peek()
        if slash.kind != SLASH:
            p.fail("'/'")
        p.take()
        sub = p.peek()
        if sub is not None and sub.kind == KW and sub.value == "FILE":
            p.take()
            p.expect_kind(EQUALS, "'='")
            tok = p.peek()
            if tok is not None and tok.kind == STAR:
                p.take()
                files.append(FileRef())
            elif tok is not None and tok.kind == STR:
                p.take()
                files.append(FileRef(tok.value))
            else:
                p.fail("'*' or a quoted file path")
        elif sub is not None and sub.kind == KW and sub.value == "RENAME":
            p.take()
            p.expect_kind(LPAREN, "'('")
            olds = []
            while p.at_name():
                olds.append(p.take_name())
            eq = p.peek()
            if eq is None or eq.kind != EQUALS:
                p.fail("'=' between old and new names")
            p.take()
            news = []
            while p.at_name():
                news.append(p.take_name())
            close = p.peek()
            if close is None or close.kind != RPAREN:
                p.fail("')'")
            p.take()
            if not olds or len(olds) != len(news):
                raise ParseError(
                    f"rename lists differ in length ({len(olds)} old, "
                    f"{len(news)} new)",
                    source=p.source, line=slash.line, col=slash.col,
                )
            rename_pairs.extend(zip(olds, news))
        else:
            # Unknown subcommand: keep it verbatim, stopping at the next '/'.
            parts = []
            while not p.at_end and p.peek().kind != SLASH:
                parts.append(_annotation_text(p.take()))
            annotations.append("/" + _join_parts(parts))
    if not files:
        p.fail("at least one /FILE subcommand")
    try:
        rename = RenameMap(tuple(rename_pairs))
    except DuplicateColumnError as e:
        raise ParseError(e.message, source=p.source, line=span["line"], col=span["col"]) from e
    return MatchFiles(
        tuple(files), rename, annotations=tuple(annotations), **span
    )


# Rendering ------------------------------------------------------------

def quote_string(s: str) -> str:
    return "'" + s.replace("'", "''") + "'"


def render_value(v: "str | float") -> str:
    if isinstance(v, str):
        return quote_string(v)
    return number_to_text(v)


def _render_pattern(pat: Pattern) -> str:
    if isinstance(pat, ExactPattern):
        return render_value(pat.value)
    if isinstance(pat, RangePattern):
        return f"{number_to_text(pat.lo)} THRU {number_to_text(pat.hi)}"
    if isinstance(pat, LowestThruPattern):
        return f"LOWEST THRU {number_to_text(pat.hi)}"
    return f"{number_to_text(pat.lo)} THRU HIGHEST"


def render_recode_spec(spec: RecodeSpec) -> str:
    return " ".join(
        f"({_render_pattern(r.pattern)}={render_value(r.target)})"
        for r in spec.rules
    )


def _join_parts(parts: Sequence[str]) -> str:
    out = ""
    for part in parts:
        if not out:
            out = part
        elif part in (")", "=") or out.endswith(("(", "/", "=")):
            out += part
        else:
            out += " " + part
    return out


def _with_annotations(body: str, cmd: Command) -> str:
    if cmd.annotations:
        return body + " " + _join_parts(cmd.annotations) + "."
    return body + "."


def render_command(cmd: Command) -> str:
    """Canonical one-line text of a command, terminator included."""
    if isinstance(cmd, GetFile):
        return _with_annotations(f"GET FILE={quote_string(cmd.path)}", cmd)
    if isinstance(cmd, DatasetName):
        return _with_annotations(f"DATASET NAME {cmd.name}", cmd)
    if isinstance(cmd, MatchFiles):
        parts = ["MATCH FILES"]
        for ref in cmd.files:
            parts.append("/FILE=*" if ref.is_active else f"/FILE={quote_string(ref.path)}")
        if cmd.rename.pairs:
            olds = " ".join(old for old, _ in cmd.rename.pairs)
            news = " ".join(new for _, new in cmd.rename.pairs)
            parts.append(f"/RENAME ({olds} = {news})")
        return _with_annotations(" ".join(parts), cmd)
    if isinstance(cmd, Recode):
        names = " ".join(cmd.variables)
        return _with_annotations(f"RECODE {names} {render_recode_spec(cmd.spec)}", cmd)
    if isinstance(cmd, Execute):
        return _with_annotations("EXECUTE", cmd)
    if isinstance(cmd, Frequencies):
        names = " ".join(cmd.variables)
        return _with_annotations(f"FREQUENCIES VARIABLES={names}", cmd)
    if isinstance(cmd, Crosstabs):
        return _with_annotations(
            f"CROSSTABS /TABLES={cmd.row_var} BY {cmd.col_var}", cmd
        )
    if isinstance(cmd, SaveOutfile):
        return _with_annotations(f"SAVE OUTFILE={quote_string(cmd.path)}", cmd)
    raise TypeError(f"not a command: {cmd!r}")


def render_script(s: Script) -> str:
    """Canonical text form; parsing it reproduces an equal AST."""
    return "".join(render_command(c) + "\n" for c in s.commands)


# Recode rules ---------------------------------------------------------

def _bareword_value(word: str) -> "str | float":
    num = parse_number(word)
    return num if num is not None else word


def _parse_rules(p: _StatementParser) -> RecodeSpec:
    rules = []
    while True:
        tok = p.peek()
        if tok is None or tok.kind != LPAREN:
            break
        rules.append(_parse_rule(p))
    if not rules:
        p.fail("a recode rule '('")
    return RecodeSpec(tuple(rules))


def _parse_rule(p: _StatementParser) -> RecodeRule:
    p.expect_kind(LPAREN, "'('")
    tok = p.peek()
    if tok is None:
        p.fail("a recode source pattern")
    if tok.kind == KW and tok.value == "LOWEST":
        p.take()
        p.expect_kw("THRU")
        hi = p.expect_kind(NUM, "a number after THRU")
        pattern: Pattern = LowestThruPattern(hi.value)
    elif tok.kind == NUM:
        lo = p.take()
        nxt = p.peek()
        if nxt is not None and nxt.kind == KW and nxt.value == "THRU":
            p.take()
            end = p.peek()
            if end is not None and end.kind == KW and end.value == "HIGHEST":
                p.take()
                pattern = ThruHighestPattern(lo.value)
            elif end is not None and end.kind == NUM:
                p.take()
                if lo.value > end.value:
                    raise ParseError(
                        f"range low {lo.text} exceeds high {end.text}",
                        source=p.source, line=lo.line, col=lo.col,
                    )
                pattern = RangePattern(lo.value, end.value)
            else:
                p.fail("a number or HIGHEST after THRU")
        else:
            pattern = ExactPattern(lo.value)
    elif tok.kind == STR:
        p.take()
        pattern = ExactPattern(tok.value)
    elif tok.kind == ID:
        p.take()
        pattern = ExactPattern(_bareword_value(tok.text))
    else:
        p.fail("a recode source pattern")
    p.expect_kind(EQUALS, "'='")
    target_tok = p.peek()
    if target_tok is None:
        p.fail("a recode target value")
    if target_tok.kind == NUM:
        p.take()
        target: "str | float" = target_tok.value
    elif target_tok.kind == STR:
        p.take()
        target = target_tok.value
    elif target_tok.kind == ID:
        p.take()
        target = _bareword_value(target_tok.text)
    else:
        p.fail("a recode target value")
    p.expect_kind(RPAREN, "')'")
    return RecodeRule(pattern, target)


def parse_recode_spec(rules: "str | Sequence[Token]", source: str | None = None) -> RecodeSpec:
    """Parse a standalone rule list such as "(LOWEST THRU 500=1) (501 THRU 1000=2)".

    Accepts either text or a token sequence beginning at the first '('.
    """
    if isinstance(rules, str):
        tokens = [t for t in tokenize(rules, source=source) if t.kind != TERM]
    else:
        tokens = [t for t in rules if t.kind != TERM]
    p = _StatementParser(list(tokens), source)
    spec = _parse_rules(p)
    if not p.at_end:
        p.fail("end of rule list")
    return spec
