"""Script interpreter: runs parsed commands against a registry of datasets.

Execution walks the statement list in order and keeps one "active" dataset,
the way the source dialect does:

* GET FILE ingests a CSV and makes it active (named after the file).
* DATASET NAME renames the active handle.
* MATCH FILES appends the cases of its files (``*`` meaning the current
  active dataset, paths ingested on demand), applying its RENAME list to
  every file that comes from disk; the merged result stays under the prior
  active name, or the first file's name when nothing was active.
* RECODE rewrites the named variables cell by cell, first matching rule
  wins, missing and unmatched values passing through untouched.
* EXECUTE is a checkpoint no-op.
* FREQUENCIES and CROSSTABS append analysis results to the environment.
* SAVE OUTFILE persists the active dataset (any extension is mapped to the
  .tds.csv/.tds.json pair).

Errors abort at the first failing command and carry that command's source
line and column.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import NoActiveDatasetError, TdsError
from .ingest import IngestOptions, dataset_name_for, read_csv
from .stats import CrossTab, FrequencyTable, frequencies, crosstab
from .syntax import (
    Command,
    Crosstabs,
    DatasetName,
    Execute,
    ExactPattern,
    FileRef,
    Frequencies,
    GetFile,
    LowestThruPattern,
    MatchFiles,
    RangePattern,
    Recode,
    RecodeSpec,
    SaveOutfile,
    Script,
)
from .table import Column, Dataset, append_cases, rename_columns, save_dataset
from .values import MISSING, NUMERIC, TEXT, number_to_text, value_to_text


@dataclass
class AnalysisOutput:
    """One analysis result together with the command that produced it."""

    command: Command
    result: "FrequencyTable | CrossTab"


@dataclass
class Environment:
    """Mutable interpreter state for one script run."""

    registry: dict[str, Dataset] = field(default_factory=dict)
    active: str | None = None
    outputs: list[AnalysisOutput] = field(default_factory=list)
    strict: bool = False
    warnings: list[str] = field(default_factory=list)
    base_dir: str = "."

    def active_dataset(self) -> Dataset:
        if self.active is None:
            raise NoActiveDatasetError(
                "no active dataset (use GET FILE or MATCH FILES first)"
            )
        return self.registry[self.active]

    def make_active(self, d: Dataset) -> None:
        self.registry[d.name] = d
        self.active = d.name

    def resolve(self, path: str) -> str:
        p = Path(path)
        return str(p) if p.is_absolute() else str(Path(self.base_dir) / p)


def pattern_matches(pattern, v) -> bool:
    """Does a recode source pattern match this non-missing value?

    Exact patterns compare variant and payload (text case-sensitively,
    numbers with exact float equality); range patterns only ever match
    numbers.
    """
    if isinstance(pattern, ExactPattern):
        return type(v) is type(pattern.value) and v == pattern.value
    if not isinstance(v, float):
        return False
    if isinstance(pattern, RangePattern):
        return pattern.lo <= v <= pattern.hi
    if isinstance(pattern, LowestThruPattern):
        return v <= pattern.hi
    return v >= pattern.lo  # ThruHighestPattern


def recode_value(v, spec: RecodeSpec):
    """Apply the first matching rule; missing and unmatched values pass through."""
    if v is MISSING:
        return MISSING
    for rule in spec.rules:
        if pattern_matches(rule.pattern, v):
            return rule.target
    return v


def _recoded_column(col: Column, spec: RecodeSpec) -> Column:
    mapped = [recode_value(v, spec) for v in col.values]
    non_missing = [v for v in mapped if v is not MISSING]
    if not non_missing:
        # All-missing column: same default as type inference.
        return Column(col.name, TEXT, tuple(mapped))
    if all(isinstance(v, float) for v in non_missing):
        return Column(col.name, NUMERIC, tuple(mapped))
    # Mixed outcome: the column becomes TEXT and numbers take their
    # canonical text form so the declared type stays truthful.
    rendered = tuple(
        number_to_text(v) if isinstance(v, float) else v for v in mapped
    )
    return Column(col.name, TEXT, rendered)


def exec_recode(d: Dataset, variables, spec: RecodeSpec) -> Dataset:
    """Recode the named columns cell-wise; others untouched.

    A column whose recoded values are all numbers (ignoring missing) is
    declared NUMERIC; an all-missing column falls back to TEXT; any other mix
    is TEXT with numbers rendered canonically.
    """
    targets = {d.index_of(var) for var in variables}
    columns = tuple(
        _recoded_column(col, spec) if i in targets else col
        for i, col in enumerate(d.columns)
    )
    return Dataset(d.name, columns)


def unmatched_values(col: Column, spec: RecodeSpec) -> Counter:
    """Distinct non-missing values no rule matches, with their case counts."""
    counts: Counter = Counter()
    for v in col.values:
        if v is not MISSING and not any(
            pattern_matches(r.pattern, v) for r in spec.rules
        ):
            counts[v] += 1
    return counts


def execute_script(script: Script, env: Environment | None = None) -> Environment:
    """Run every command in order against the environment (created if absent).

    The first error stops execution; it is re-raised with the failing
    command's source span attached.
    """
    env = env if env is not None else Environment()
    for cmd in script.commands:
        try:
            _execute_command(cmd, env)
        except TdsError as e:
            e.attach_span(None, cmd.line, cmd.col)
            raise
    return env


def _ingest(env: Environment, path: str) -> Dataset:
    opts = IngestOptions(dataset_name=dataset_name_for(path))
    return read_csv(env.resolve(path), opts)


def _execute_command(cmd: Command, env: Environment) -> None:
    if isinstance(cmd, GetFile):
        env.make_active(_ingest(env, cmd.path))
    elif isinstance(cmd, DatasetName):
        d = env.active_dataset()
        renamed = replace(d, name=cmd.name)
        env.registry = {
            (cmd.name if key == env.active else key): (renamed if key == env.active else val)
            for key, val in env.registry.items()
        }
        env.active = cmd.name
    elif isinstance(cmd, MatchFiles):
        _execute_match_files(cmd, env)
    elif isinstance(cmd, Recode):
        d = env.active_dataset()
        if env.strict:
            for var in cmd.variables:
                col = d.column(var)
                for value, count in sorted(
                    unmatched_values(col, cmd.spec).items(),
                    key=lambda item: str(item[0]),
                ):
                    env.warnings.append(
                        f"RECODE {col.name}: value {value_to_text(value)!r} "
                        f"matched no rule ({count} case"
                        f"{'s' if count != 1 else ''})"
                    )
        env.registry[env.active] = exec_recode(d, cmd.variables, cmd.spec)
    elif isinstance(cmd, Execute):
        pass
    elif isinstance(cmd, Frequencies):
        d = env.active_dataset()
        for var in cmd.variables:
            env.outputs.append(AnalysisOutput(cmd, frequencies(d, var)))
    elif isinstance(cmd, Crosstabs):
        d = env.active_dataset()
        env.outputs.append(AnalysisOutput(cmd, crosstab(d, cmd.row_var, cmd.col_var)))
    elif isinstance(cmd, SaveOutfile):
        save_dataset(env.active_dataset(), env.resolve(cmd.path))
    else:
        raise TdsError(f"cannot execute {type(cmd).__name__}")


def _load_ref(env: Environment, ref: FileRef, rename) -> Dataset:
    if ref.is_active:
        return env.active_dataset()
    d = _ingest(env, ref.path)
    return rename_columns(d, rename) if rename.pairs else d


def _execute_match_files(cmd: MatchFiles, env: Environment) -> None:
    datasets = [_load_ref(env, ref, cmd.rename) for ref in cmd.files]
    merged = datasets[0]
    for d in datasets[1:]:
        merged = append_cases(merged, d)
    name = env.active if env.active is not None else merged.name
    merged = replace(merged, name=name)
    env.make_active(merged)
