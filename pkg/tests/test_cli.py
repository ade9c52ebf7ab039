import json
import subprocess
import sys

import pytest

from shiftspace import specfile
from shiftspace.cli import main


def _spec(tmp_path, node, name="space.json"):
    path = tmp_path / name
    path.write_text(json.dumps(node))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- spec files -----------------------------------------------------------------


def test_spec_round_trip():
    node = specfile.parse(json.dumps({
        "kind": "product",
        "left": {"kind": "even"},
        "right": {"kind": "sft", "alphabet": ["0", "1"],
                  "forbidden": ["11"]},
    }))
    text = specfile.emit(node)
    assert specfile.parse(text) == node
    assert specfile.emit(specfile.parse(text)) == text


def test_spec_defaults_are_filled_in():
    node = specfile.parse('{"kind": "beta", "beta": "5/2"}')
    assert node["horizon"] == 64
    assert node["precision"] == 96


def test_spec_unknown_kind():
    with pytest.raises(specfile.SpecError):
        specfile.parse('{"kind": "donut"}')


def test_spec_unknown_field_names_the_path():
    with pytest.raises(specfile.SpecError) as exc:
        specfile.parse(json.dumps(
            {"kind": "reverse", "child": {"kind": "even", "window": 3}}))
    assert "child" in str(exc.value)


def test_spec_beta_wants_exactly_one_source():
    with pytest.raises(specfile.SpecError):
        specfile.parse(json.dumps({
            "kind": "beta", "beta": "5/2",
            "digits": {"preperiod": [], "period": [1, 0]}}))
    with pytest.raises(specfile.SpecError):
        specfile.parse('{"kind": "beta"}')


def test_spec_build_runs_the_constructions(tmp_path):
    oracle = specfile.load(_spec(tmp_path, {
        "kind": "higher-block", "window": 2,
        "child": {"kind": "beta",
                  "digits": {"preperiod": [], "period": [1, 0]}}}))
    from shiftspace import complexity_sequence
    assert complexity_sequence(oracle, 5) == [3, 5, 8, 13, 21]


# --- words / classes / entropy / constraints ---------------------------------------


def test_words_csv(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "even"})
    code, out, _ = _run(capsys, ["words", "--spec", spec, "--n", "3"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# command=words")
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "word"
    assert len(body) == 8  # header + |L_3| = 7
    assert "101" not in body


def test_classes_exact_path(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "even"})
    code, out, _ = _run(capsys, ["classes", "--spec", spec, "--max-n", "5"])
    assert code == 0
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert body[0] == \
        "n,count_L,count_F,count_P,count_E,k_used,exact_F,exact_P,exact_E"
    assert body[1] == "1,2,2,2,2,-1,true,true,true"
    assert body[3] == "3,7,3,3,5,-1,true,true,true"


def test_classes_forced_k(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "sft", "alphabet": ["0", "1"],
                            "forbidden": ["11"]})
    code, out, _ = _run(capsys, ["classes", "--spec", spec, "--max-n", "3",
                                 "--k", "1", "--mode", "f"])
    assert code == 0
    rows = [l.split(",") for l in out.splitlines()
            if l and not l.startswith("#")][1:]
    assert all(r[5] == "1" for r in rows)       # k_used
    assert all(r[6] == "true" for r in rows)    # k reaches the memory bound
    assert all(r[3] == "" for r in rows)        # predecessor not requested


def test_classes_json_rows_match_csv(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "even"})
    code, out, err = _run(capsys, ["classes", "--spec", spec, "--max-n",
                                   "3", "--format", "json"])
    assert code == 0
    rows = json.loads(out)
    assert rows[2]["count_E"] == 5 and rows[2]["exact_E"] is True
    assert err.startswith("# command=classes")


def test_entropy_output(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "even"})
    code, out, _ = _run(capsys, ["entropy", "--spec", spec, "--max-n", "6",
                                 "--quantity", "h_E"])
    assert code == 0
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert body[0] == "quantity,n,count,value,exact,certified_upper_bound"
    first = body[1].split(",")
    assert first[:3] == ["h_E", "1", "2"]
    assert first[3] == "0.693147180560"[:len(first[3])] or \
        float(first[3]) == pytest.approx(0.6931471805599453)
    # the bound column repeats the final certified value on every row
    bounds = {l.split(",")[5] for l in body[1:]}
    assert len(bounds) == 1


def test_entropy_all_quantities(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "even"})
    code, out, _ = _run(capsys, ["entropy", "--spec", spec, "--max-n", "4",
                                 "--quantity", "all"])
    assert code == 0
    body = [l for l in out.splitlines() if not l.startswith("#")]
    quantities = {l.split(",")[0] for l in body[1:]}
    assert quantities == {"h", "h_E", "h_F", "h_P"}
    # one-sided rates carry no certified bound
    hf = [l for l in body if l.startswith("h_F")]
    assert all(l.rsplit(",", 1)[1] == "" for l in hf)


def test_constraints_output(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "sft", "alphabet": ["0", "1"],
                            "forbidden": ["11"]})
    code, out, _ = _run(capsys, ["constraints", "--spec", spec,
                                 "--max-n", "5"])
    assert code == 0
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert body[0] == "n,count_C,k_used,exact"
    assert [l.split(",")[1] for l in body[1:]] == ["0"] * 4


def test_determinism_is_byte_level(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "sturmian-modulated", "cf": [1] * 8,
                            "base": {"kind": "even"}})
    argv = ["classes", "--spec", spec, "--max-n", "4"]
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second


def test_verify_fails_red_on_paper_examples(tmp_path, capsys):
    code, out, _ = _run(capsys, ["verify", "--suite", "paper-examples"])
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert body[0] == "check_id,property,params,observed,required,verdict"
    verdicts = {l.split(",")[0].strip('"'): l.rsplit(",", 1)[1]
                for l in body[1:]}
    assert verdicts["even-count-table"] == "FAIL"
    assert verdicts["full-shift-counts"] == "PASS"
    assert code == 1


def test_verify_inequalities_pass(capsys):
    code, out, _ = _run(capsys, ["verify", "--suite", "inequalities"])
    assert code == 0
    assert out.count(",PASS") == 4


# --- failure modes ------------------------------------------------------------------


def test_bad_spec_is_a_usage_error(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "donut"})
    code, _, err = _run(capsys, ["words", "--spec", spec, "--n", "2"])
    assert code == 2
    assert "donut" in err


def test_missing_spec_file(tmp_path, capsys):
    code, _, err = _run(capsys, ["words", "--spec",
                                 str(tmp_path / "nope.json"), "--n", "2"])
    assert code == 2


def test_resource_cap_exit_code(tmp_path, capsys):
    spec = _spec(tmp_path, {"kind": "full", "alphabet": ["0", "1"]})
    code, _, err = _run(capsys, ["words", "--spec", spec, "--n", "24",
                                 "--cap", "1000"])
    assert code == 3


def test_module_entry_point_runs():
    out = subprocess.run(
        [sys.executable, "-m", "shiftspace.cli", "words", "--spec",
         "/dev/stdin", "--n", "2"],
        input='{"kind": "even"}', capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines()[-1] == "11"
