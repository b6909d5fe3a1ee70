import json
import subprocess
import sys

import pytest

from qtorus.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_cf(capsys):
    assert run_json(capsys, "cf", "sqrt(2)") == (0, {"theta": "sqrt(2)", "preperiod": [1], "period": [2]})
    code, data = run_json(capsys, "cf", "(1+sqrt(5))/2")
    assert (code, data["preperiod"], data["period"]) == (0, [1], [1])
    code, out, err = run(capsys, "cf", "3/4")
    assert code == 2 and "RationalInput" in err and out == ""


def test_cf_text_matches_json(capsys):
    code, out, _ = run(capsys, "cf", "sqrt(7)")
    assert code == 0 and "period: [1, 1, 1, 4]" in out


def test_morita_equivalent(capsys):
    code, data = run_json(capsys, "morita", "sqrt(2)", "1+sqrt(2)", "--bound", "5")
    assert code == 0 and data["equivalent"]
    assert all(data["checks"].values())
    assert data["oracle"]["matrix"] is not None
    code, out, _ = run(capsys, "morita", "sqrt(2)", "1+sqrt(2)")
    assert code == 0 and "FAIL" not in out and out.count("OK ") == 5


@pytest.mark.parametrize("t1, t2", [("sqrt(2)", "sqrt(3)"), ("(1+sqrt(5))/2", "sqrt(5)")])
def test_morita_not_equivalent(capsys, t1, t2):
    code, data = run_json(capsys, "morita", t1, t2)
    assert code == 1 and not data["equivalent"] and data["evidence"]
    code, out, _ = run(capsys, "morita", t1, t2)
    assert code == 1 and "not equivalent" in out


def test_torus_verify(capsys):
    code, data = run_json(capsys, "torus-verify", "--exp-range", "2")
    assert code == 0 and data["failed"] == 0 and data["checked"] > 0
    assert data["failures"] == [] and data["notes"]


def test_torus_verify_bad_range(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["torus-verify", "--exp-range", "0"])
    assert exc.value.code == 2


def test_transform_verify(capsys):
    code, data = run_json(capsys, "transform-verify", "sqrt(2)", "1+sqrt(2)", "--exp-range", "2")
    assert code == 0 and data["failed"] == 0 and data["checked"] > 0
    code, data = run_json(capsys, "transform-verify", "sqrt(2)", "sqrt(3)")
    assert code == 1 and data["equivalent"] is False


def test_rewrite(capsys):
    code, out, _ = run(capsys, "rewrite", "0", "1", "1", "0")
    assert (code, out.strip()) == (0, "C_theta(y, x)")
    code, data = run_json(capsys, "rewrite", "1", "0", "0", "1")
    assert data == {"matrix": [[1, 0], [0, 1]], "formula": "C_theta(x^-1, y^-1)", "normalized": "C_theta(x^-1, y^-1)"}
    code, _, err = run(capsys, "rewrite", "1", "1", "1", "1")
    assert code == 2 and "NotUnimodular" in err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "C_theta(y, x)", "sqrt(2)/2", "1/2", "sqrt(2)")
    assert (code, out.strip()) == (0, "true")
    code, data = run_json(capsys, "eval", "C_theta(x, y)", "1/2", "1/2", "sqrt(2)")
    assert code == 1 and data["value"] is False
    code, _, err = run(capsys, "eval", "C_theta(x, y)", "sqrt(3)", "0", "sqrt(2)")
    assert code == 2 and "MixedDiscriminant" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cf", "sqrt(2)", "--frobnicate"])
    assert exc.value.code == 2


def test_output_is_deterministic(capsys):
    first = run(capsys, "torus-verify", "--exp-range", "1", "--verbose")
    second = run(capsys, "torus-verify", "--exp-range", "1", "--verbose")
    assert first == second
    lines = [l for l in first[1].splitlines() if l.startswith(("OK", "FAIL"))]
    assert lines == sorted(lines)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qtorus", "cf", "sqrt(2)", "--json"],
        capture_output=True,
        text=True,
        env={"QTORUS_COLOR": "0", "PATH": ""},
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["period"] == [2]


DOCUMENTED_KEYS = {
    ("cf", "sqrt(2)"): {"theta", "preperiod", "period"},
    ("morita", "sqrt(2)", "1+sqrt(2)", "--bound", "3"): {
        "theta1", "theta2", "equivalent", "matrix", "proof_matrix",
        "scaling_theta", "tail_indices", "checks", "oracle",
    },
    ("morita", "sqrt(2)", "sqrt(3)"): {"theta1", "theta2", "equivalent", "reason", "evidence"},
    ("torus-verify", "--exp-range", "1"): {"checked", "failed", "failures", "notes"},
    ("transform-verify", "sqrt(2)", "sqrt(2)/2", "--exp-range", "1"): {"checked", "failed", "failures", "notes"},
    ("transform-verify", "sqrt(2)", "sqrt(3)"): {"equivalent", "reason", "checked", "failed"},
    ("rewrite", "0", "1", "1", "0"): {"matrix", "formula", "normalized"},
    ("eval", "C_theta(y, x)", "0", "0", "sqrt(2)"): {"formula", "value", "arguments"},
}


@pytest.mark.parametrize("argv", list(DOCUMENTED_KEYS), ids=lambda a: " ".join(a))
def test_json_schemas(capsys, argv):
    _, data = run_json(capsys, *argv)
    assert set(data) == DOCUMENTED_KEYS[argv]
    assert json.loads(json.dumps(data)) == data
