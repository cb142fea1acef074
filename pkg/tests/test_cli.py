import json
import subprocess
import sys

import pytest

from cllcheck.cli import main

from helpers import LN5_HALF, LN125_HALF

TWO_STATE = {
    "states": ["a", "b"],
    "Q": [["-1", "1"], ["1", "-1"]],
    "initial": ["1", "0"],
    "intervals": [{"low": "0", "high": "0.4", "high_closed": False}, {"low": "0.4", "high": "1"}],
}


@pytest.fixture
def model(tmp_path):
    def write(data=TWO_STATE, name="m.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_sat_with_witness(capsys, model):
    code, out, _ = run(capsys, "check", "--model", model(), "--formula", "true U[0,3] P[2] in [0.4,1]")
    assert code == 0
    assert out.splitlines()[0] == "SAT"
    assert f"{LN5_HALF:.9g}" in out


def test_check_structured_unsat(capsys, model):
    code, out, _ = run(capsys, "check", "--model", model(), "--format", "structured",
                       "--formula", "G[0,1] P[1] in [0.9,1]")
    rec = json.loads(out)
    assert code == 0 and rec["verdict"] == "UNSAT" and rec["witness"] == []
    assert set(rec) >= {"verdict", "witness", "intervals", "margins"}


def test_check_formula_from_file(capsys, model, tmp_path):
    f = tmp_path / "phi.cll"
    f.write_text("F[0,3] P[2] in [0.4,1]\n")
    code, out, _ = run(capsys, "check", "--model", model(), "--formula", str(f))
    assert code == 0 and out.startswith("SAT")


def test_bad_row_sum_is_an_input_error(capsys, model):
    bad = dict(TWO_STATE, Q=[["-0.9", "1"], ["1", "-1"]])
    code, _, err = run(capsys, "check", "--model", model(bad), "--formula", "true")
    assert code == 2
    assert "row 1 sums to 1/10" in err


def test_parse_error_points_at_the_problem(capsys, model):
    code, _, err = run(capsys, "check", "--model", model(), "--formula", "true U[0,1 P[1] in [0,1]")
    assert code == 2
    assert err.rstrip().endswith(" " * 11 + "^")


def test_missing_arguments(capsys):
    assert run(capsys, "check", "--formula", "true")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_tight_budget_is_undecided(capsys, model):
    phi = "P[2] in [0,0.4] U[0.80471895621705,2] P[2] in [0.4,1]"
    code, _, err = run(capsys, "check", "--model", model(), "--formula", phi, "--budget", "1")
    assert code == 3 and err.startswith("undecided")
    assert run(capsys, "check", "--model", model(), "--formula", phi)[0] == 0


def test_isolate_cosine(capsys):
    code, out, _ = run(capsys, "isolate", "--pef", "e^{it}+e^{-it}", "--window", "0,10", "--epsilon", "1e-6")
    assert code == 0
    assert "3 root(s)" in out
    mids = [float(line.split("~")[1]) for line in out.splitlines()[1:]]
    assert [round(m, 5) for m in mids] == [1.5708, 4.71239, 7.85398]


def test_isolate_verbose_structured_has_chain(capsys):
    code, out, _ = run(capsys, "isolate", "--pef", "e^{it}+e^{-it}", "--window", "0,10",
                       "--format", "structured", "-v")
    rec = json.loads(out)
    assert code == 0 and len(rec["intervals"]) == 3 and rec["chain"]


def test_isolate_model_coordinate(capsys, model):
    code, out, _ = run(capsys, "isolate", "--model", model(), "--state", "2", "--level", "0.4",
                       "--window", "0,3")
    assert code == 0 and "1 root(s)" in out
    assert f"{LN5_HALF:.6f}"[:6] in out


def test_isolate_without_roots_and_degenerate(capsys):
    assert "0 root(s)" in run(capsys, "isolate", "--pef", "3", "--window", "0,1")[1]
    assert run(capsys, "isolate", "--pef", "0", "--window", "0,1")[0] == 2
    assert run(capsys, "isolate", "--pef", "e^{2t}-5")[0] == 2  # no window


def test_trace_segments(capsys, model):
    code, out, _ = run(capsys, "trace", "--model", model(), "--horizon", "3", "--step", "1")
    lines = out.splitlines()
    # P[1] stays in [0.4,1]; P[2] crosses 0.4 once
    assert code == 0 and lines[0].endswith("2 segment(s)")
    assert f"{LN5_HALF:.6f}"[:7] in lines[1] and f"{LN5_HALF:.6f}"[:7] in lines[2]
    samples = lines[lines.index("samples (t, mu_t):") + 1:]
    assert len(samples) == 4
    assert samples[0].split() == ["0", "1", "0"]


def test_trace_boundaries_of_both_states(capsys, model):
    data = dict(TWO_STATE, intervals=TWO_STATE["intervals"] + [{"low": "0.9", "high": "1"}])
    code, out, _ = run(capsys, "trace", "--model", model(data), "--horizon", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0].endswith("3 segment(s)")
    assert f"{LN125_HALF:.6f}"[:7] in lines[1] and f"{LN5_HALF:.6f}"[:7] in lines[2]


def test_trace_without_intervals_has_one_empty_segment(capsys, model):
    data = {k: v for k, v in TWO_STATE.items() if k != "intervals"}
    code, out, _ = run(capsys, "trace", "--model", model(data), "--horizon", "2")
    assert code == 0 and "1 segment(s)" in out and out.rstrip().endswith("{}")


def test_simulate_agrees(capsys, model):
    code, out, _ = run(capsys, "simulate", "--model", model(), "--formula", "F[0,3] P[2] in [0.4,1]",
                       "--step", "0.001")
    assert code == 0
    assert out.splitlines()[-1] == "agreement"


def test_console_script_entry_point(model):
    r = subprocess.run([sys.executable, "-m", "cllcheck.cli", "check", "--model", model(),
                        "--formula", "P[1] in [1,1]"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "SAT"
