import io
import json

from lmspectra.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_convergents_of_pi_prefix():
    code, out = call("cf", "convergents", "--x", "pi:[3;7,15,1]", "--n", "3")
    assert code == 0
    env = json.loads(out)
    assert env["result"]["last"] == "355/113"
    assert env["result"]["convergents"][1]["value"]["provenance"] == "exact"


def test_markov_value_of_freiman_sequence():
    code, out = call("spectrum", "m", "--seq", "(221221122)* 11 (221122122)*", "--tol", "1e-8")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["provenance"] == "enclosure"
    assert abs(res["float"] - 3.118120178) < 1e-8


def test_decimals_need_an_explicit_width():
    code, _ = call("cf", "expand", "--x", "3.14159")
    assert code == 2
    code, out = call("cf", "expand", "--x", "3.14159", "--as-enclosure", "1e-7")
    assert code == 0
    assert json.loads(out)["result"]["terms"][:2] == [3, 7]


def test_boxdim_csv():
    code, out = call("boxdim", "count", "--t", "sqrt(12)", "--r", "6", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "t,r,count_yes,count_maybe,estimate"
    assert len(rows) == 8
    assert rows[-1].split(",")[2:4] == ["35", "0"]


def test_boxdim_d_modes():
    for mode in ("upper", "lower"):
        code, out = call("boxdim", "d", "--t", "3.5", "--rmax", "8", "--mode", mode)
        assert code == 0
        assert json.loads(out)["result"]["d"]["provenance"] == "empirical"


def test_lattice_ell():
    code, out = call("lattice", "ell", "--alpha", "(1+sqrt(5))/2", "--qmax", "10000")
    assert code == 0
    res = json.loads(out)["result"]
    assert abs(res["ell"]["float"] - 5 ** 0.5) < 1e-4


def test_cantor_and_markov_commands():
    code, out = call("cantor", "dim", "--alphabet", "1,2", "--depth", "6")
    assert code == 0
    b = json.loads(out)["result"]["bracket"]
    assert b["lower"] <= 0.5312805 <= b["upper"]
    code, out = call("markov", "tree", "--bound", "100", "--format", "csv")
    assert code == 0
    assert out.splitlines()[:3] == ["x,y,z", "1,1,1", "1,1,2"]


def test_exit_codes():
    assert call("bogus")[0] == 2
    assert call("cf", "expand", "--bad-flag")[0] == 2
    assert call("spectrum", "hall", "--ell", "5")[0] == 3
    code, out = call("spectrum", "sup", "--words", "1,2,3", "--max-nodes", "10")
    assert code == 4
    assert json.loads(out)["budget_exhausted"] is True


def test_verify_golden_suite():
    code, out = call("verify", "--suite", "golden")
    assert code == 0
    assert out.startswith("[PASS] 1.")


def test_output_is_deterministic():
    a = json.loads(call("boxdim", "count", "--t", "31/10", "--r", "5")[1])
    b = json.loads(call("boxdim", "count", "--t", "31/10", "--r", "5")[1])
    a.pop("seconds"), b.pop("seconds")
    assert a == b
