"""tds: script-driven integration, recoding and descriptive analysis of
tabular data.

The package mirrors the pipeline it automates: CSV files become immutable
columnar datasets (:mod:`tds.table`, :mod:`tds.ingest`), a small command
script orchestrates integration and cleaning (:mod:`tds.syntax`,
:mod:`tds.engine`), descriptive statistics summarize the result
(:mod:`tds.stats`), and deterministic reports publish it
(:mod:`tds.report`).  ``tds.cli`` wires it all into the ``tds`` command.
"""

from .engine import (
    AnalysisOutput,
    Environment,
    exec_recode,
    execute_script,
    recode_value,
)
from .errors import TdsError
from .ingest import IngestOptions, infer_column_type, read_csv
from .report import ReportBundle, Section, emit_site, render_text
from .stats import CrossTab, FrequencyTable, crosstab, frequencies, missing_summary
from .syntax import RecodeSpec, Script, parse_recode_spec, parse_script, render_script
from .table import (
    Column,
    Dataset,
    RenameMap,
    append_cases,
    build_dataset,
    load_dataset,
    rename_columns,
    save_dataset,
    select_columns,
)
from .values import MISSING, NUMERIC, TEXT

__version__ = "0.1.0"

__all__ = [
    "AnalysisOutput",
    "Column",
    "CrossTab",
    "Dataset",
    "Environment",
    "FrequencyTable",
    "IngestOptions",
    "MISSING",
    "NUMERIC",
    "RecodeSpec",
    "RenameMap",
    "ReportBundle",
    "Script",
    "Section",
    "TEXT",
    "TdsError",
    "append_cases",
    "build_dataset",
    "crosstab",
    "emit_site",
    "exec_recode",
    "execute_script",
    "frequencies",
    "infer_column_type",
    "load_dataset",
    "missing_summary",
    "parse_recode_spec",
    "parse_script",
    "read_csv",
    "recode_value",
    "rename_columns",
    "render_script",
    "render_text",
    "save_dataset",
    "select_columns",
]
