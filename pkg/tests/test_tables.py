from __future__ import annotations

import json
from fractions import Fraction

import pytest

from tcsproofs import tables
from tcsproofs.php_dual import SurdValue
from tcsproofs.tables import TableSpec, lp_options, match_value, reproduce_table


def test_manifest():
    for table_id in tables.TABLE_IDS:
        manifest = tables.table_manifest(table_id)
        assert manifest.default_mode in manifest.modes
    with pytest.raises(ValueError):
        tables.table_manifest("PHP_UPPER_BOUNDS")


def test_table_spec_defaults():
    spec = TableSpec("PHP_DUAL_OPTIMA", (3, 4))
    assert spec.mode == "restricted"
    assert spec.reference(4).expected == "27"
    assert spec.reference(7) is None
    assert not spec.is_stretch(4)
    assert TableSpec("ORD_OPTIMA", (6,)).is_stretch(6)


@pytest.mark.parametrize(
    ("table_id", "n_range", "mode"),
    [
        ("PHP_DUAL_OPTIMA", (5,), "full"),
        ("PHP_DUAL_OPTIMA", (3,), "partial"),
        ("ORD_OPTIMA", (2, 3), None),
        ("SOS_GROWTH", (), None),
        ("ORD", (3,), None),
    ],
)
def test_table_spec_validation(table_id, n_range, mode):
    with pytest.raises(ValueError):
        TableSpec(table_id, n_range, mode)


@pytest.mark.parametrize(
    ("value", "reference", "expected"),
    [
        (Fraction(11), {"expected": "11", "rule": "exact"}, True),
        (Fraction(1175, 4), {"expected": "293.75", "rule": "exact"}, True),
        (Fraction(2737, 66), {"expected": "41.4(69)", "rule": "repeating"}, True),
        (Fraction(2737, 66), {"expected": "41.469", "rule": "repeating"}, False),
        (Fraction(2737, 66), {"expected": "41.470", "rule": "rounded", "places": 3}, True),
        (SurdValue(Fraction(80), Fraction(16, 2500)), {"expected": "6.4", "rule": "rounded"}, True),
        (SurdValue(Fraction(1), Fraction(2)), {"expected": "1.414", "rule": "repeating"}, False),
    ],
)
def test_match_value(value, reference, expected):
    assert match_value(value, reference) is expected


def test_match_value_rule():
    with pytest.raises(ValueError):
        match_value(Fraction(1), {"expected": "1", "rule": "close"})


def test_reproduce_closed_forms():
    result = reproduce_table(TableSpec("PHP_D_VALUES", (3, 4, 5, 6)))
    assert [c.status for c in result.cells] == ["ok"] * 4
    assert all(c.match for c in result.cells)
    assert result.cells[3].decimal == "210.674"
    assert result.diff() == []

    bounds = reproduce_table(TableSpec("PHP_LOWER_BOUNDS", (3, 4, 5, 6, 7)), workers=2)
    assert [c.match for c in bounds.cells] == [True, True, True, True, None]
    assert bounds.cells[0].exact == "4*sqrt(1/6)"


def test_reproduce_lp_tables(config):
    result = reproduce_table(TableSpec("ORD_OPTIMA", (3, 4)), options=lp_options(config))
    assert [c.exact for c in result.cells] == ["5", "12"]
    assert not result.mismatches


def test_skip_and_render():
    spec = TableSpec("SOS_GROWTH", (3, 4))
    result = reproduce_table(spec, skip=[4])
    assert result.cells[0].match
    assert result.cells[1].status == "skipped"
    assert result.skipped == [result.cells[1]]

    md = result.render("md")
    assert md == reproduce_table(spec, skip=[4]).render("md")
    assert md.startswith("### SOS_GROWTH (sos)")
    assert "| 3 | 14 | 14.000 | 14 | yes | ok |" in md

    csv = result.render("csv").splitlines()
    assert csv[0] == ",".join(tables.COLUMNS)
    assert csv[2] == "4,,,,,skipped"

    data = json.loads(result.render("json"))
    assert data["cells"][1]["error"] == "not requested"
    with pytest.raises(ValueError):
        result.render("html")


def test_mismatch_and_errors(monkeypatch):
    def wrong(n, mode, options):
        return Fraction(15)

    def broken(n, mode, options):
        msg = "no solution"
        raise RuntimeError(msg)

    monkeypatch.setitem(tables._COMPUTE, "SOS_GROWTH", wrong)
    result = reproduce_table(TableSpec("SOS_GROWTH", (3,)))
    assert result.mismatches == result.cells
    assert result.diff() == ["n=3: computed 15 (15.000), reference 14"]
    assert "Differences:" in result.render("md")

    monkeypatch.setitem(tables._COMPUTE, "SOS_GROWTH", broken)
    cell = reproduce_table(TableSpec("SOS_GROWTH", (3,))).cells[0]
    assert cell.status == "error"
    assert cell.error == "RuntimeError: no solution"
    assert cell.match is None


def test_cells_in_worker_process():
    result = reproduce_table(TableSpec("PHP_LOWER_BOUNDS", (3,)), timeout=120)
    assert result.cells[0].status == "ok"
    assert result.cells[0].match


def test_lp_options(config):
    options = lp_options(config)
    assert options["batch"] == config.lp.batch
    assert options["bland"] is False
    assert lp_options({})["bland"] is False
