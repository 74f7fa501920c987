import json
import subprocess
import sys

import pytest

from realfree.cli import main, parse_jobspec, render, run_job
from realfree.ensembles import exact_moment, exact_trace_cumulant, parse_word
from realfree.laurent import LaurentValue


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _job(tmp_path, doc):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(doc, indent=2) if not isinstance(doc, str) else doc)
    return str(path)


def test_exact_tr_t_squared(tmp_path, capsys):
    spec = _job(tmp_path, {"ensembles": {"T": {"kind": "goe"}},
                           "expressions": [{"name": "trT2", "traces": [["T", "T"]]}],
                           "modes": ["exact"]})
    code, out, _ = _run(["run", "--spec", spec], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["expressions"][0]["exact"] == {"1": "1", "1/N": "1"}


def test_empty_expression_list(tmp_path, capsys):
    code, out, _ = _run(["run", "--spec", _job(tmp_path, {"expressions": []})], capsys)
    assert code == 0
    assert json.loads(out)["expressions"] == []


def test_second_order_zero_limit(tmp_path, capsys):
    doc = {"ensembles": {"A": "goe", "B": "goe"},
           "expressions": [{"type": "centred", "traces": [["A", "B"], ["A", "B", "A", "B"]]}],
           "modes": ["verify"]}
    code, out, _ = _run(["run", "--spec", _job(tmp_path, doc)], capsys)
    assert code == 0
    assert json.loads(out)["expressions"][0]["verify"]["verdict"] == "zero-limit: pass"


def test_schema_errors_point_at_lines(tmp_path, capsys):
    doc = '{\n  "ensembles": {"T": "goe"},\n  "expressions": [\n    {"traces": [["T"]]},\n    {"type": "bogus", "traces": []}\n  ]\n}\n'
    code, _, err = _run(["run", "--spec", _job(tmp_path, doc)], capsys)
    assert code == 2
    assert ":5:" in err and "bogus" in err
    code, _, err = _run(["run", "--spec", _job(tmp_path, '{"expressions": [\n{"traces": [["Q"]]}]}')], capsys)
    assert code == 2 and ":2:" in err and "undeclared" in err
    code, _, err = _run(["run", "--spec", _job(tmp_path, "{\n\"modes\": [}")], capsys)
    assert code == 2 and ":2:" in err


def test_guard_exceeded_everywhere(tmp_path, capsys):
    doc = {"ensembles": {"W": "wishart"}, "expressions": [{"traces": [["W"] * 13]}], "modes": ["exact"]}
    code, out, _ = _run(["run", "--spec", _job(tmp_path, doc)], capsys)
    assert code == 3
    assert "guard" in json.loads(out)["expressions"][0]["exact"]["error"]


def test_enumerate(capsys):
    code, out, _ = _run(["enumerate", "--class", "premaps", "--n", "3"], capsys)
    assert code == 0 and json.loads(out)["count"] == 15
    code, out, _ = _run(["enumerate", "--class", "disc-nc", "--gamma", "(1,2,3)", "--members"], capsys)
    data = json.loads(out)
    assert data["count"] == 5 and "(1,3,2)" in data["members"]
    code, _, _ = _run(["enumerate", "--class", "ann-nc"], capsys)
    assert code == 2


def test_verify_suite_second_order(capsys):
    code, out, _ = _run(["verify", "--suite", "second-order", "--colours", "goe,goe"], capsys)
    assert code == 0
    rows = json.loads(out)["expressions"][0]["rows"]
    assert rows[0]["lhs"] == rows[0]["rhs"] == "2"
    assert rows[0]["verdict"] == "pass"


def test_verify_flags_wishart_closed_form(capsys):
    code, out, _ = _run(["verify", "--type", "cumulant", "W", "W"], capsys)
    assert code == 0
    check = json.loads(out)["expressions"][0]["verify"]
    assert check["verdict"] == "pass"
    assert check["closed_form"]["agrees"] is False and "flag" in check["closed_form"]


def test_oracle_and_mc_modes(tmp_path, capsys):
    doc = {"ensembles": {"T": "goe"}, "expressions": [{"traces": ["T T"]}],
           "modes": ["exact", "oracle", "mc", "verify"], "N": [2, 3], "samples": 2000, "seed": 1}
    code, out, _ = _run(["run", "--spec", _job(tmp_path, doc)], capsys)
    assert code == 0
    entry = json.loads(out)["expressions"][0]
    assert [r["value"] for r in entry["oracle"]] == ["3/2", "4/3"]
    assert all(r["verdict"] == "pass" for r in entry["oracle"] + entry["mc"])


def test_csv_output(tmp_path, capsys):
    out_path = tmp_path / "r.csv"
    code, _, _ = _run(["mc", "T T", "--N", "10", "--samples", "200", "--format", "csv", "--out", str(out_path)],
                      capsys)
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0].startswith("expression,description,mode,N")
    assert lines[1].startswith("e0,tr(T T),mc,10,200,")


def test_report_values_round_trip():
    spec = parse_jobspec(json.dumps({
        "ensembles": {"T": "goe", "S": {"kind": "wishart", "c": "symbolic"}},
        "expressions": [{"traces": ["T T T T"]}, {"type": "cumulant", "traces": ["S S", "S"]},
                        {"letters": ["T", "T", "T", "T"], "gamma": "(1,2)(3,4)"}],
        "modes": ["exact", "asymptotic"]}))
    report, code = run_job(spec)
    assert code == 0
    again = json.loads(render(report, "json"))
    models = spec.ensembles
    assert LaurentValue.from_json(again["expressions"][0]["exact"]) == exact_moment(parse_word("T T T T"), models)
    assert LaurentValue.from_json(again["expressions"][1]["exact"]) == exact_trace_cumulant(
        [parse_word("S S"), parse_word("S")], models)
    mean = exact_moment(parse_word("T T"), models)
    cov = exact_trace_cumulant([parse_word("T T")] * 2, models).shift(-2)
    assert LaurentValue.from_json(again["expressions"][2]["exact"]) == mean * mean + cov


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "realfree", "enumerate", "--class", "ginibre", "--n", "4"],
                            capture_output=True, text=True, check=True)
    assert json.loads(result.stdout)["count"] == 3


def test_inline_requires_known_colour(capsys):
    code, _, err = _run(["exact", "Q Q"], capsys)
    assert code == 2 and "--ensemble" in err
    code, out, _ = _run(["exact", "Q Q", "--ensemble", "Q=wishart:c=1/2"], capsys)
    assert code == 0
    assert json.loads(out)["expressions"][0]["exact"] == {"1": "3/4", "1/N": "1/2"}
