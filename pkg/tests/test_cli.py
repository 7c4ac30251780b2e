from __future__ import annotations

import json

import pytest

from tcsproofs.cli import _parse_cli_args, tcsproofs_cli


def test_cli():
    args = _parse_cli_args(["--config", "test.yaml", "lp", "solve", "--family", "php", "--n", "3"])
    assert args.command == "lp"
    assert args.mode == "full"
    assert args.side == "dual"
    assert not args.congen

    args = _parse_cli_args(["table", "ORD_OPTIMA", "--n-range", "3..5"])
    assert args.table_id == "ORD_OPTIMA"
    assert args.mode is None

    args = _parse_cli_args(["ord", "restrict", "--in", "cert.json"])
    assert args.input == "cert.json"


@pytest.mark.parametrize(
    "argv",
    [
        ["table", "ORD_OPTIMA", "--n-range", "3..9"],
        ["table", "PHP_DUAL_OPTIMA", "--n-range", "3", "--mode", "partial"],
        ["lp", "solve", "--family", "php"],
        ["accept", "--level", "slow"],
    ],
)
def test_cli_rejects(argv):
    with pytest.raises(SystemExit):
        _parse_cli_args(argv)


def test_build_and_verify(tmp_path, capsys):
    cert = tmp_path / "ord4.json"
    tcsproofs_cli(["--out", str(cert), "ord", "build-proof", "--n", "4"])
    assert len(json.loads(cert.read_text())["entries"]) == 12

    tcsproofs_cli(["verify", str(cert)])
    report = json.loads(capsys.readouterr().out)
    assert report["ok"]
    assert report["total_coefficient_size"] == "12"

    tcsproofs_cli(["verify", str(cert), "--support", "restricted"])
    assert json.loads(capsys.readouterr().out)["ok"]


def test_restrict_roundtrip(tmp_path, capsys):
    partial = tmp_path / "partial.yaml"
    tcsproofs_cli(
        [
            "lp",
            "solve",
            "--family",
            "ord",
            "--n",
            "3",
            "--mode",
            "restricted",
            "--certificate",
            str(partial),
        ]
    )
    result = json.loads(capsys.readouterr().out)
    assert result["value"] == "2"
    assert result["witness_path"] == str(partial)

    with pytest.raises(SystemExit) as exc:
        tcsproofs_cli(["verify", str(partial)])
    assert exc.value.code == 1
    assert not json.loads(capsys.readouterr().out)["ok"]

    full = tmp_path / "full.json"
    tcsproofs_cli(["--out", str(full), "ord", "restrict", "--in", str(partial)])
    tcsproofs_cli(["verify", str(full)])
    assert json.loads(capsys.readouterr().out)["ok"]


def test_table_output(tmp_path):
    out = tmp_path / "table.csv"
    tcsproofs_cli(
        ["--format", "csv", "--out", str(out), "table", "PHP_D_VALUES", "--n-range", "3..4"]
    )
    lines = out.read_text().splitlines()
    assert lines[1] == "3,4,4.000,4,yes,ok"
    assert lines[2] == "4,18,18.000,18,yes,ok"


def test_php_report(capsys):
    tcsproofs_cli(["php", "dual-report", "--n", "3"])
    report = json.loads(capsys.readouterr().out)
    assert report["dual_value"] == "4"
    assert report["resolution_failure"] == "-1/8"
