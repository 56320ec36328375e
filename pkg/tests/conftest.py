"""Shared fixtures: seven deterministic school CSV files whose integration
reproduces the known frequency and crosstab targets, plus the pipeline script
that drives them."""

import csv
import random
from pathlib import Path

import pytest

from tds.ingest import read_csv
from tds.table import append_cases

SCHOOLS = (
    ("SMK BELAGA, SRWK", 91),
    ("SMK INDERAPURA, PHG", 92),
    ("SMK KEPALA BATAS, KDH", 100),
    ("SMK KUALA KETIL, KDH", 97),
    ("SMK MARANG, TRG", 94),
    ("SMK SAMA GAGAH, PG", 118),
    ("SMK TENGGU IDRIS, SLGR", 99),
)
TOTAL_CASES = sum(n for _, n in SCHOOLS)
SCHOOL_PERCENTS = (13.2, 13.3, 14.5, 14.0, 13.6, 17.1, 14.3)

# Every case with family size 6 lives in one school and carries exactly this
# BM grade distribution, so the size-6 crosstab row is fixed by construction.
FAMILY6_SCHOOL = "SMK SAMA GAGAH, PG"
FAMILY6_BM_GRADES = {
    "2A": 2, "3B": 3, "4B": 5, "5C": 5, "6C": 6, "7D": 28, "8E": 18, "9G": 24,
}
FAMILY6_CASES = sum(FAMILY6_BM_GRADES.values())  # 91

GRADES = ("1A", "2A", "3B", "4B", "5C", "6C", "7D", "8E", "9G")
SUBJECTS = (
    "BM_SPM", "BI_SPM", "PI_SPM", "SEJ_SPM", "MAT_SPM", "SCI_SPM", "PENDO_SPM",
)
COLUMNS = (
    "SCHOOLS", "RESPONDENT_NAME", "NUM_FAMILY_MEMBERS",
    "NUM_FAMILY_MEMBERS_LEARN", "NUM_FAMILY_MEMBERS_RECEIVE_SPBT",
    "FAMILY_INCOME", "SPBT", *SUBJECTS,
)

_FIRST = (
    "MOHAMAD", "SITI", "AHMAD", "NURUL", "LIM", "TAN", "RAVI", "KUMAR",
    "FATIMAH", "HASSAN", "WONG", "CHEW", "ANIS", "FARID",
)
_LAST = (
    "RAHMAN", "AZIZ", "KASIM", "ISMAIL", "NORDIN", "HASHIM", "OMAR", "DESA",
    "ROSLAN", "ZAKARIA",
)
_LINK = ("B", "BT.", "BIN", "BINTI", "A/L", "A/P")

_INCOMES = (350, 500, 501, 650, 750, 1000, 1001, 1200, 1500, 1800,
            2400, 3000, 3200, 5000, 5500, 7500)
_FAMILY_SIZES = (0, 1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12, 13)  # never 6

PIPELINE_SCRIPT = """\
# Combine the seven school files, analyze, convert to numeric codes, save.
GET FILE='schools/SMK BELAGA, SRWK.csv'.
DATASET NAME Data WINDOW=FRONT.
MATCH FILES /FILE=*
  /FILE='schools/SMK INDERAPURA, PHG.csv'
  /FILE='schools/SMK KEPALA BATAS, KDH.csv'
  /FILE='schools/SMK KUALA KETIL, KDH.csv'
  /FILE='schools/SMK MARANG, TRG.csv'
  /FILE='schools/SMK SAMA GAGAH, PG.csv'
  /FILE='schools/SMK TENGGU IDRIS, SLGR.csv'.
EXECUTE.
FREQUENCIES VARIABLES=SCHOOLS NUM_FAMILY_MEMBERS.
CROSSTABS /TABLES=NUM_FAMILY_MEMBERS BY BM_SPM.
RECODE FAMILY_INCOME (Lowest thru 500=1) (501 thru 1000=2) (1001 thru 2000=3) (2001 thru 3000=4) (3001 thru 5000=5) (5000 thru Highest=6).
EXECUTE.
RECODE SPBT ('YA'=1) (TIDAK=2).
EXECUTE.
RECODE SPBT ('YA'=1) (TIDAK=2).
EXECUTE.
RECODE BM_SPM BI_SPM PI_SPM SEJ_SPM MAT_SPM SCI_SPM PENDO_SPM ('1A'=1) (2A=1) (3B=2) (4B=2) (5C=3) (6C=3) (7D=4) (8E=4) (9G=5).
EXECUTE.
FREQUENCIES VARIABLES=FAMILY_INCOME.
SAVE OUTFILE='out/DATA_NOM.sav'.
"""


def _school_rows(school, n_cases, rng):
    family6 = []
    if school == FAMILY6_SCHOOL:
        for grade, count in FAMILY6_BM_GRADES.items():
            family6.extend([grade] * count)
        rng.shuffle(family6)

    rows = []
    for i in range(n_cases):
        name = (f"{rng.choice(_FIRST)} {rng.choice(_LINK)} "
                f"{rng.choice(_LAST)} {i + 1:03d}")
        if i < len(family6):
            family = 6
            bm = family6[i]
        else:
            family = rng.choice(_FAMILY_SIZES)
            bm = rng.choice(GRADES)
        learning = rng.randint(0, 7)
        rows.append([
            school, name, family, learning, min(learning, rng.randint(0, 7)),
            rng.choice(_INCOMES), rng.choice(("YA", "TIDAK")), bm,
            *[rng.choice(GRADES) for _ in SUBJECTS[1:]],
        ])
    return rows


def write_school_files(root: Path) -> Path:
    """Create schools/*.csv under root; deterministic for a fixed seed."""
    school_dir = root / "schools"
    school_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20260809)
    for school, n_cases in SCHOOLS:
        with open(school_dir / f"{school}.csv", "w", encoding="utf-8",
                  newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COLUMNS)
            writer.writerows(_school_rows(school, n_cases, rng))
    return school_dir


@pytest.fixture(scope="session")
def school_workdir(tmp_path_factory) -> Path:
    """Directory holding schools/*.csv and the pipeline script."""
    root = tmp_path_factory.mktemp("schooldata")
    write_school_files(root)
    (root / "integrate_analyze.tds.sps").write_text(
        PIPELINE_SCRIPT, encoding="utf-8"
    )
    return root


@pytest.fixture(scope="session")
def combined_dataset(school_workdir):
    """All seven files appended, before any recoding."""
    merged = None
    for school, _ in SCHOOLS:
        d = read_csv(school_workdir / "schools" / f"{school}.csv")
        merged = d if merged is None else append_cases(merged, d)
    return merged


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one PASS/FAIL line per acceptance criterion."""
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or item.module.__name__ != "test_acceptance":
        return
    tr = item.config.pluginmanager.get_plugin("terminalreporter")
    if tr is None:
        return
    status = "PASS" if report.passed else "FAIL"
    doc = item.function.__doc__ or item.name
    tr.write_line(f"[{status}] {doc.strip().splitlines()[0]}")
