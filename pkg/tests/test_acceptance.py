"""Acceptance suite: every exit criterion as one test, exact assertions only.

Counts and recoded codes are integers and match exactly; percents are
one-decimal values compared for float equality against their expected
literals (both sides are the same quantized double, so no tolerance is
involved anywhere).
"""

import random
from pathlib import Path

from helpers import (
    cell_multiset,
    count_pairs,
    decimal_percent,
    random_dataset,
    scrape_table,
)
from tds.cli import main
from tds.engine import Environment, exec_recode, execute_script, recode_value
from tds.stats import CrossTab, FrequencyTable, crosstab, frequencies, missing_summary
from tds.syntax import (
    ExactPattern,
    LowestThruPattern,
    RangePattern,
    Recode,
    RecodeRule,
    RecodeSpec,
    ThruHighestPattern,
    parse_recode_spec,
    parse_script,
    render_script,
)
from tds.table import build_dataset, load_dataset, save_dataset
from tds.values import MISSING, NUMERIC, TEXT

from conftest import (
    FAMILY6_BM_GRADES,
    PIPELINE_SCRIPT,
    SCHOOL_PERCENTS,
    SCHOOLS,
    TOTAL_CASES,
)

CORPUS_DIR = Path(__file__).parent / "corpus"
CONVERSION_SCRIPT = (CORPUS_DIR / "grade_income_recode.tds.sps").read_text()

GRADES = ("1A", "2A", "3B", "4B", "5C", "6C", "7D", "8E", "9G")


def _spec_for(variable: str) -> RecodeSpec:
    script = parse_script(CONVERSION_SCRIPT)
    for cmd in script.commands:
        if isinstance(cmd, Recode) and variable in cmd.variables:
            return cmd.spec
    raise AssertionError(f"no recode of {variable} in conversion script")


def test_criterion_01_grade_categorization():
    """1. grade categorization: the nine grades map exactly to [1,1,2,2,3,3,4,4,5]"""
    spec = _spec_for("BM_SPM")
    assert [recode_value(g, spec) for g in GRADES] == [
        1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 5.0,
    ]
    d = build_dataset("D", [("G", TEXT, list(GRADES))])
    out = exec_recode(d, ["G"], spec)
    assert out.column("G").values == (1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 5.0)
    assert out.column("G").ctype == NUMERIC


def test_criterion_02_income_binning():
    """2. income binning: range rules with the 5000 overlap resolved first-match"""
    spec = _spec_for("FAMILY_INCOME")
    expected = {
        500.0: 1.0, 501.0: 2.0, 1000.0: 2.0, 1001.0: 3.0, 1800.0: 3.0,
        2001.0: 4.0, 3001.0: 5.0, 5000.0: 5.0, 5001.0: 6.0,
    }
    for value, code in expected.items():
        assert recode_value(value, spec) == code, value


def test_criterion_03_integration_count(combined_dataset):
    """3. integration: seven files of 91..99 cases combine to 691 with exact percents"""
    assert combined_dataset.n_cases == TOTAL_CASES == 691
    table = frequencies(combined_dataset, "SCHOOLS")
    assert [(r.value, r.frequency) for r in table.rows] == list(SCHOOLS)
    assert tuple(r.percent for r in table.rows) == SCHOOL_PERCENTS
    assert tuple(r.valid_percent for r in table.rows) == SCHOOL_PERCENTS
    assert round(sum(r.percent for r in table.rows), 1) == 100.0
    from tds.report import render_text

    total_line = next(
        line for line in render_text(table).splitlines()
        if line.startswith("Total")
    )
    cells = [c.strip() for c in total_line.split("|")]
    assert cells[1] == "691" and cells[2] == "100.0"


def test_criterion_04_crosstab_fixture(combined_dataset):
    """4. crosstab: the family-size-6 row reproduces the eight grade counts, total 91"""
    table = crosstab(combined_dataset, "NUM_FAMILY_MEMBERS", "BM_SPM")
    i = table.row_values.index(6.0)
    row = dict(zip(table.col_values, table.cells[i]))
    for grade, count in FAMILY6_BM_GRADES.items():
        assert row[grade] == count, grade
    # The eight counts sum to 91 (the arithmetic sum, not the prose's
    # "around 92").
    assert table.row_totals[i] == 91 == sum(FAMILY6_BM_GRADES.values())


def test_criterion_05_missing_report(combined_dataset):
    """5. missing report: NUM_FAMILY_MEMBERS has 691 valid and 0 missing cases"""
    summary = dict(
        (name, (v, m)) for name, v, m in missing_summary(combined_dataset)
    )
    assert summary["NUM_FAMILY_MEMBERS"] == (691, 0)
    table = frequencies(combined_dataset, "NUM_FAMILY_MEMBERS")
    assert (table.n_valid, table.n_missing) == (691, 0)


def test_criterion_06_oracle_equivalence():
    """6. oracle equivalence: 100+ random datasets match brute-force counting exactly"""
    rng = random.Random(1742)
    checked = 0
    while checked < 100:
        d = random_dataset(rng, max_cases=1000, max_columns=2,
                           max_distinct=10, missing_rate=0.10)
        if len(d.columns) < 2:
            continue
        checked += 1
        a, b = d.columns[0].name, d.columns[1].name

        table = frequencies(d, a)
        valid = [v for v in d.columns[0].values if v is not MISSING]
        assert table.n_valid == len(valid)
        assert [r.value for r in table.rows] == sorted(set(valid))
        running = 0
        for r in table.rows:
            assert r.frequency == valid.count(r.value)
            assert r.percent == decimal_percent(r.frequency, d.n_cases)
            assert r.valid_percent == decimal_percent(r.frequency, len(valid))
            running += r.frequency
            assert r.cumulative_percent == decimal_percent(running, len(valid))

        ct = crosstab(d, a, b)
        pairs, excluded = count_pairs(d, a, b)
        assert ct.n_excluded == excluded
        assert ct.grand_total == sum(pairs.values())
        for i, rv in enumerate(ct.row_values):
            for j, cv in enumerate(ct.col_values):
                assert ct.cells[i][j] == pairs.get((rv, cv), 0)

        tr = crosstab(d, b, a)
        assert ct.row_values == tr.col_values
        assert ct.col_values == tr.row_values
        assert ct.cells == (tuple(zip(*tr.cells)) if tr.cells else ())
        assert ct.row_totals == tr.col_totals
        assert ct.col_totals == tr.row_totals
        assert ct.grand_total == tr.grand_total


def test_criterion_07_parser_golden_corpus():
    """7. parser corpus: every transcribed script parses; render-reparse is identity"""
    paths = sorted(CORPUS_DIR.glob("*.tds.sps"))
    assert len(paths) == 4
    for path in paths:
        script = parse_script(path.read_text(encoding="utf-8"), source=str(path))
        assert script.commands, path.name
        assert parse_script(render_script(script)) == script, path.name


def test_criterion_08_persistence_round_trip(tmp_path):
    """8. persistence: load(save(d)) is structurally equal for 100 random datasets"""
    rng = random.Random(804)
    for i in range(100):
        d = random_dataset(rng, max_cases=200, name=f"R{i}")
        save_dataset(d, tmp_path / f"r{i}")
        assert load_dataset(tmp_path / f"r{i}") == d


def test_criterion_09_recode_totality_and_idempotence():
    """9. recode: total on all values, duplicated block idempotent, disjoint rules order-free"""
    rng = random.Random(905)
    sample_values = [MISSING, "", "YA", "TIDAK", "1A", "weird", 0.0, -1.5,
                     500.0, 5000.0, 1e15, -1e15]
    for _ in range(200):
        rules = []
        for _ in range(rng.randint(1, 5)):
            roll = rng.random()
            if roll < 0.4:
                pattern = ExactPattern(rng.choice(sample_values[1:]))
            elif roll < 0.6:
                lo, hi = sorted((rng.uniform(-99, 99), rng.uniform(-99, 99)))
                pattern = RangePattern(lo, hi)
            elif roll < 0.8:
                pattern = LowestThruPattern(rng.uniform(-99, 99))
            else:
                pattern = ThruHighestPattern(rng.uniform(-99, 99))
            rules.append(RecodeRule(pattern, rng.choice(sample_values[1:])))
        spec = RecodeSpec(tuple(rules))
        for v in sample_values:
            recode_value(v, spec)  # never raises

    spbt = parse_recode_spec("('YA'=1) (TIDAK=2)")
    d = build_dataset("D", [("SPBT", TEXT, ["YA", "TIDAK", "XX", MISSING] * 5)])
    once = exec_recode(d, ["SPBT"], spbt)
    assert exec_recode(once, ["SPBT"], spbt) == once

    # Disjoint patterns on separated islands: shuffling never changes the
    # outcome.
    for trial in range(20):
        islands = rng.sample(range(10), rng.randint(2, 6))
        rules = []
        for k, island in enumerate(islands):
            base = 1000.0 * island
            kind = rng.randrange(3)
            if kind == 0:
                pattern = ExactPattern(base + 5)
            elif kind == 1:
                pattern = RangePattern(base, base + 10)
            else:
                pattern = ExactPattern(f"w{island}")
            rules.append(RecodeRule(pattern, 100.0 + k))
        values = [rng.choice(
            [1000.0 * i + off for i in range(10) for off in (0.0, 5.0, 10.0, 55.0)]
            + [f"w{i}" for i in range(10)] + [MISSING]
        ) for _ in range(60)]
        d = build_dataset("D", [("X", TEXT, [v for v in values if isinstance(v, str)])])
        num = build_dataset("D", [(
            "X", NUMERIC, [v for v in values if not isinstance(v, str)],
        )])
        baseline_t = exec_recode(d, ["X"], RecodeSpec(tuple(rules)))
        baseline_n = exec_recode(num, ["X"], RecodeSpec(tuple(rules)))
        for _ in range(10):
            shuffled = rules[:]
            rng.shuffle(shuffled)
            spec = RecodeSpec(tuple(shuffled))
            assert exec_recode(d, ["X"], spec) == baseline_t
            assert exec_recode(num, ["X"], spec) == baseline_n


def test_criterion_10_end_to_end_determinism(school_workdir, tmp_path, monkeypatch):
    """10. end to end: two runs emit byte-identical HTML whose numbers equal the stats"""
    monkeypatch.chdir(school_workdir)
    for out in ("a", "b"):
        code = main(["run", "integrate_analyze.tds.sps", "--format", "html",
                     "--out", str(tmp_path / out), "--stamp", "fixed"])
        assert code == 0
    tree_a = {
        p.relative_to(tmp_path / "a").as_posix(): p.read_bytes()
        for p in sorted((tmp_path / "a").rglob("*")) if p.is_file()
    }
    tree_b = {
        p.relative_to(tmp_path / "b").as_posix(): p.read_bytes()
        for p in sorted((tmp_path / "b").rglob("*")) if p.is_file()
    }
    assert tree_a == tree_b
    assert set(tree_a) == {
        "index.html", "freq-1.html", "freq-2.html", "ctab-3.html", "freq-4.html",
    }

    # Every number printed in the site equals the in-memory statistic.
    env = execute_script(parse_script(PIPELINE_SCRIPT),
                         Environment(base_dir=str(school_workdir)))
    for position, output in enumerate(env.outputs, start=1):
        result = output.result
        kind = "freq" if isinstance(result, FrequencyTable) else "ctab"
        rows = scrape_table((tmp_path / "a" / f"{kind}-{position}.html").read_text())
        if isinstance(result, FrequencyTable):
            assert len(rows) == len(result.rows) + 2
            for row, want in zip(rows[1:-1], result.rows):
                assert _cell_equals(row[0], want.value)
                assert int(row[1]) == want.frequency
                assert float(row[2]) == want.percent
                assert float(row[3]) == want.valid_percent
                assert float(row[4]) == want.cumulative_percent
            assert int(rows[-1][1]) == result.n_valid
        else:
            assert isinstance(result, CrossTab)
            assert len(rows) == len(result.row_values) + 2
            for row, rv, cells, total in zip(
                rows[1:-1], result.row_values, result.cells, result.row_totals
            ):
                assert _cell_equals(row[0], rv)
                assert [int(c) for c in row[1:-1]] == list(cells)
                assert int(row[-1]) == total
            assert [int(c) for c in rows[-1][1:-1]] == list(result.col_totals)
            assert int(rows[-1][-1]) == result.grand_total


def _cell_equals(cell_text: str, value) -> bool:
    if isinstance(value, float):
        return float(cell_text) == value
    return cell_text == value


def test_cell_multiset_helper_sanity():
    """(sanity) the multiset helper distinguishes text from numbers"""
    a = build_dataset("A", [("X", NUMERIC, [1.0])])
    b = build_dataset("B", [("X", TEXT, ["1"])])
    assert cell_multiset(a) != cell_multiset(b)
