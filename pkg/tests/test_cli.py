import json
import os
import subprocess
import sys

import pytest

from tsvf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fx(fixtures_dir):
    return lambda name: str(fixtures_dir / name)


def test_examples_three_box(capsys):
    code, out, _ = run(capsys, "examples", "three-box")
    assert code == 0
    assert "FAIL" not in out and "all claims PASS" in out


def test_examples_all_json(capsys):
    code, out, _ = run(capsys, "examples", "--format", "json", "--trials", "20000")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert {e["example"] for e in report["examples"]} == {"three-box", "shimony-pair", "spin-xy"}


def test_examples_unknown_name(capsys):
    code, _, err = run(capsys, "examples", "four-box")
    assert code == 2 and "ValidationError" in err


def test_simulate_repeatable(capsys, fx):
    argv = ["simulate", "--scenario", fx("three_box.json"), "--trials", "100000", "--seed", "42"]
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a[0] == 0 and a == b


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_simulate_independent_of_workers(capsys, fx, fmt):
    base = ["simulate", "--scenario", fx("shimony_forward.json"), "--seed", "7",
            "--trials", "50001", "--format", fmt]
    outs = {run(capsys, *base, "--workers", str(w))[1] for w in (1, 2, 5)}
    assert len(outs) == 1


def test_simulate_generalized(capsys, fx):
    code, out, _ = run(capsys, "simulate", "--scenario", fx("generalized.json"), "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["mode"] == "ancilla"
    for label, p in report["exact"].items():
        assert report["composite_formula"][label] == pytest.approx(p, abs=1e-12)


def test_simulate_requires_seed(capsys, fx):
    code, _, err = run(capsys, "simulate", "--scenario", fx("orthogonal.json"), "--trials", "10")
    assert code == 2 and "seed" in err


def test_simulate_no_selected_trials(capsys, fx):
    code, out, _ = run(capsys, "simulate", "--scenario", fx("orthogonal.json"), "--trials", "100",
                       "--seed", "1", "--observable", "pauli_z", "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["error"] == "NoSelectedTrials"
    assert report["stats"]["selected"] == 0


def test_weak_orthogonal(capsys, fx):
    code, _, err = run(capsys, "weak", "--scenario", fx("orthogonal.json"))
    assert code == 1 and "OrthogonalSelection" in err


def test_abl_null_event_json(capsys, fx):
    code, out, _ = run(capsys, "abl", "--scenario", fx("orthogonal.json"),
                       "--observable", "pauli_z", "--format", "json")
    assert code == 1 and json.loads(out)["error"] == "NullEvent"


def test_abl_three_box(capsys, fx):
    code, out, _ = run(capsys, "abl", "--scenario", fx("three_box.json"), "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["element_of_reality"] == pytest.approx(1.0)
    assert dict((e["eigenvalue"], e["probability"]) for e in report["outcomes"])[1.0] == pytest.approx(1)


def test_weak_three_box_pc(capsys, fx):
    code, out, _ = run(capsys, "weak", "--scenario", fx("three_box.json"),
                       "--observable", "projector:C", "--format", "json")
    assert code == 0
    re, im = json.loads(out)["weak_value"]
    assert re == pytest.approx(-1, abs=1e-12) and im == pytest.approx(0, abs=1e-12)


def test_weak_pre_only_is_expectation(capsys, fx):
    code, out, _ = run(capsys, "weak", "--scenario", fx("pre_only.json"), "--observable", "pauli_z",
                       "--format", "json")
    assert code == 0 and json.loads(out)["weak_value"] == [1.0, 0.0]


def test_pointer_grid(capsys, fx):
    code, out, _ = run(capsys, "pointer", "--scenario", fx("spin_xy.json"), "--observable", "pauli_y",
                       "--lambda", "0.01,1", "--delta", "0.01,40", "--format", "json")
    report = json.loads(out)
    assert code == 0 and len(report["rows"]) == 4
    rows = {(r["lambda"], r["delta"]): r for r in report["rows"]}
    assert rows[(1.0, 0.01)]["strong_readout"] == pytest.approx([0.5, 0.5], abs=1e-6)
    assert rows[(0.01, 0.01)]["strong_readout"] is None
    assert rows[(1.0, 40.0)]["mean_p"] > 0


def test_pointer_bad_grid(capsys, fx):
    code, _, err = run(capsys, "pointer", "--scenario", fx("spin_xy.json"), "--lambda", "x")
    assert code == 2


def test_check_symmetry(capsys, fx):
    for name in ("three_box.json", "generalized.json", "spin_xy.json"):
        code, out, _ = run(capsys, "check-symmetry", "--scenario", fx(name))
        assert code == 0 and "FAIL" not in out


def test_check_symmetry_all_projectors(capsys, fx):
    code, out, _ = run(capsys, "check-symmetry", "--scenario", fx("shimony_reversed.json"),
                       "--format", "json")
    assert code == 0 and len(json.loads(out)["checks"]) == 2


def test_check_symmetry_pre_only(capsys, fx):
    code, _, err = run(capsys, "check-symmetry", "--scenario", fx("pre_only.json"))
    assert code == 1 and "UnsupportedDescription" in err


@pytest.mark.parametrize("argv", [
    ["abl"],
    ["abl", "--scenario", "/nonexistent.json"],
    ["simulate", "--scenario", "x.json", "--trials", "0"],
    ["simulate", "--scenario", "x.json", "--seed", "-3"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_parse_error_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"space": {"dimension": 2},\n "pre": [[1, 0], [0, 0]],,}')
    code, _, err = run(capsys, "abl", "--scenario", str(p))
    assert code == 2 and "ParseError" in err and "line 2" in err


def test_validation_error_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"space": {"dimension": 2}, "pre": [[0.5, 0], [0, 0]]}')
    code, _, err = run(capsys, "abl", "--scenario", str(p), "--observable", "pauli_z")
    assert code == 2 and "ValidationError" in err and "pre" in err


def test_json_numbers_at_full_precision(capsys, fx):
    _, text, _ = run(capsys, "pointer", "--scenario", fx("three_box.json"), "--observable", "projector:C",
                     "--lambda", "0.1", "--delta", "10")
    _, js, _ = run(capsys, "pointer", "--scenario", fx("three_box.json"), "--observable", "projector:C",
                   "--lambda", "0.1", "--delta", "10", "--format", "json")
    row = json.loads(js)["rows"][0]
    for key in ("mean_q", "var_q", "mean_p", "survival"):
        assert f"{row[key]:.12g}" in text
        assert float(repr(row[key])) == row[key]


def test_unknown_command():
    with pytest.raises(SystemExit) as exc:
        main(["teleport"])
    assert exc.value.code == 2


def test_console_script_module(fx):
    env = dict(os.environ)
    out = subprocess.run([sys.executable, "-m", "tsvf.cli", "weak", "--scenario", fx("spin_xy.json"),
                          "--observable", "pauli_y", "--format", "json"],
                         capture_output=True, text=True, env=env, check=True)
    assert json.loads(out.stdout)["weak_value"] == pytest.approx([0.0, 1.0], abs=1e-12)
