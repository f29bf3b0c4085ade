import json

import pytest
from click.testing import CliRunner

from cantorspectra.cli import main


@pytest.fixture()
def runner(tmp_path, monkeypatch):
    monkeypatch.setenv("CANTORSPECTRA_OUT", str(tmp_path))
    return CliRunner(), tmp_path


def test_dimension_command(runner):
    r, out = runner
    res = r.invoke(main, ["dimension", "--preset", "kalpha:1/3", "--depth", "4",
                          "--svg", "conv.svg"])
    assert res.exit_code == 0, res.output
    doc = json.loads((out / "bounds.json").read_text())
    assert abs(doc["bounds"]["alpha_n"]["value"] - 0.6309297535714574) < 1e-9
    assert (out / "conv.svg").read_text().startswith("<svg")


def test_dimension_usage_error(runner):
    r, _ = runner
    res = r.invoke(main, ["dimension"])
    assert res.exit_code == 2
    res = r.invoke(main, ["dimension", "--preset", "bogus"])
    assert res.exit_code == 2


def test_dimension_determinism(runner):
    r, out = runner
    r.invoke(main, ["dimension", "--preset", "c2", "--depth", "4", "--out", "a.json"])
    r.invoke(main, ["dimension", "--preset", "c2", "--depth", "4", "--out", "b.json"])
    assert (out / "a.json").read_text() == (out / "b.json").read_text()


def test_spectrum_scan(runner):
    r, out = runner
    res = r.invoke(main, [
        "spectrum", "scan", "--preset", "full2", "--max-period", "4",
        "--json", "scan.json", "--svg", "rug.svg",
    ])
    assert res.exit_code == 0, res.output
    assert "min 2.236067977" in res.output
    csv = (out / "samples.csv").read_text().splitlines()
    assert csv[0] == "value_lo,value_hi,period,witness"
    doc = json.loads((out / "scan.json").read_text())
    assert doc["count"] == 8


def test_surgery_check(runner):
    r, out = runner
    res = r.invoke(main, ["spectrum", "surgery-check", "--instances", "25",
                          "--seed", "3"])
    assert res.exit_code == 0, res.output
    doc = json.loads((out / "surgery-report.json").read_text())
    assert doc["all_pass"] and doc["instances"] == 25


def test_sumset_with_certificate(runner):
    r, out = runner
    res = r.invoke(main, [
        "sumset", "--preset", "middle-third", "--op", "plus", "--depth", "4",
        "--certify", "1,1", "--out-prefix", "mt",
    ])
    assert res.exit_code == 0, res.output
    assert "certified interval" in res.output
    doc = json.loads((out / "mt-report.json").read_text())
    assert doc["measure_upper_bound"]["exact"] == "2"
    assert doc["certificate"]["method"] == "thickness-linked-pair"
    assert (out / "mt.svg").read_text().startswith("<svg")


def test_sumset_refusal_exits_zero(runner):
    r, out = runner
    res = r.invoke(main, [
        "sumset", "--preset", "kalpha:2/5", "--op", "minus", "--depth", "6",
        "--certify", "auto", "--out-prefix", "k04",
    ])
    assert res.exit_code == 0, res.output
    assert "refusal" in res.output
    doc = json.loads((out / "k04-report.json").read_text())
    assert doc["certificate"]["refused"]


def test_sumset_exact_expression_endpoints(runner):
    r, out = runner
    res = r.invoke(main, [
        "sumset", "--preset", "c4", "--op", "plus", "--depth", "3",
        "--certify", "sqrt(2)-1+1e-3,4*(sqrt(2)-1)-1e-3", "--out-prefix", "hall",
    ])
    assert res.exit_code == 0, res.output
    assert "certified interval" in res.output


def test_demo_commands(runner):
    r, out = runner
    res = r.invoke(main, ["demo", "main-theorem", "--config", "builtin-refusal",
                          "--out", "ref.json"])
    assert res.exit_code == 0, res.output
    doc = json.loads((out / "ref.json").read_text())
    assert not doc["succeeded"] and "thickness" in doc["refusal"]
