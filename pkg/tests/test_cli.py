import json
import subprocess
import sys

import pytest

from qrtmap.cli import EXIT_DOMAIN, EXIT_IO, EXIT_OK, EXIT_PRECISION, EXIT_USAGE, fmt, main, to_json

COMMANDS = [
    "fixed-point", "orbit", "rotation", "rotation-sweep", "find-k", "period-table",
    "period-check", "seven-locus", "f-scan", "covering-chain", "estimate-n",
    "verify-identity", "sensitivity", "seven-not-global",
]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("cmd", COMMANDS + ["verify-appendix", "prop5"])
def test_help(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--help")
    assert code == EXIT_OK
    assert "--out" in out and "--format" in out and "--tol" in out


def test_fixed_point(capsys):
    code, out, _ = run(capsys, "fixed-point", "--d", "6")
    assert code == 0
    assert out == '{"ell":2,"k_min":6.5}\n'


def test_orbit_csv_header(capsys):
    code, out, _ = run(capsys, "orbit", "--d", "6", "--n", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,u,v,G_drift" and len(lines) == 5
    assert lines[1].startswith("0,1,1,")
    assert lines[2].split(",")[1] == "7"


def test_rotation_json(capsys):
    code, out, _ = run(capsys, "rotation", "--d", "6", "--K", "10")
    r = json.loads(out)
    assert code == 0 and abs(r["theta"] - 0.380273165) < 1e-9


def test_rotation_sweep(capsys):
    code, out, _ = run(capsys, "rotation-sweep", "--d", "6", "--k-from", "7", "--k-to", "20", "--grid", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "K,theta,eps,nu,e1,e2,e3" and len(lines) == 5


def test_find_k(capsys):
    code, out, _ = run(capsys, "find-k", "--d", "6", "--target", "2/5", "--k-max", "1000", "--grid", "200")
    r = json.loads(out)
    assert code == 0 and r["target"] == "2/5" and len(r["k"]) == 1


def test_period_table(capsys):
    code, out, _ = run(capsys, "period-table")
    r = json.loads(out)
    assert [x["q"] for x in r if x["minimal_period"]] == [5, 7, 8, 9]


def test_period_check(capsys):
    code, out, _ = run(capsys, "seven-locus", "--d", "1.05")
    K = json.loads(out)["K"]
    code, out, _ = run(capsys, "period-check", "--d", "1.05", "--K", repr(K), "--q", "7")
    assert code == 0 and json.loads(out)["periodic"] is True


def test_seven_locus_range_error(capsys):
    code, _, err = run(capsys, "seven-locus", "--d", "1.2")
    assert code == EXIT_DOMAIN and "domain error" in err


def test_f_scan(capsys):
    code, out, _ = run(capsys, "f-scan", "--q-from", "780", "--q-to", "781")
    lines = out.splitlines()
    assert lines[0] == "q,f"
    assert lines[1].startswith("780,-") and lines[2].startswith("781,0.00")


def test_covering_chain(capsys):
    code, out, _ = run(capsys, "covering-chain")
    lines = out.splitlines()
    assert lines[0] == "780,263,528" and lines[1].split(",")[2] == "360"
    code, out, _ = run(capsys, "covering-chain", "--format", "json")
    assert json.loads(out)["covered_from"] == 24


def test_estimate_n(capsys):
    code, out, _ = run(capsys, "estimate-n", "--d", "6", "--qmax", "20000")
    assert json.loads(out)["n_hat"] == 87


def test_verify_identity(capsys):
    code, out, _ = run(capsys, "verify-identity", "--seed", "7", "--trials", "10")
    r = json.loads(out)
    assert code == 0 and r["passes"] == 10
    assert r["q6_example"] == {"U": "25/24", "V_coeff_sqrt24": "-35/288"}


def test_seeds_are_mandatory(capsys):
    assert run(capsys, "verify-identity")[0] == EXIT_USAGE
    assert run(capsys, "sensitivity")[0] == EXIT_USAGE


def test_sensitivity(capsys):
    code, out, _ = run(capsys, "sensitivity", "--seed", "1", "--n", "2000", "--format", "json")
    r = json.loads(out)
    assert code == 0 and r["count"] > 0 and r["seed"] == 1


def test_seven_not_global(capsys):
    code, out, _ = run(capsys, "seven-not-global")
    r = json.loads(out)
    assert abs(r["d_star"] - 1.073) < 1e-3 and r["gap"] > 1e-3


def test_exit_codes(capsys):
    assert run(capsys, "nope")[0] == EXIT_USAGE
    assert run(capsys, "fixed-point", "--d", "-1")[0] == EXIT_USAGE
    assert run(capsys, "rotation", "--d", "6", "--K", "6")[0] == EXIT_DOMAIN
    assert run(capsys, "rotation", "--d", "6", "--K", "6.50000000001")[0] == EXIT_PRECISION
    assert run(capsys, "fixed-point", "--d", "6", "--out", "/nonexistent/dir/x.json")[0] == EXIT_IO


def test_out_file(tmp_path, capsys):
    p = tmp_path / "fp.json"
    assert run(capsys, "fixed-point", "--d", "6", "--out", str(p))[0] == 0
    assert p.read_text() == '{"ell":2,"k_min":6.5}\n'


def test_deterministic_bytes():
    argv = [sys.executable, "-m", "qrtmap.cli", "rotation-sweep", "--d", "3", "--k-from", "10", "--k-to", "50", "--grid", "5"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a.count(b"\n") == 6


def test_formatting():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(True) == "true" and fmt(3) == "3"
    assert to_json({"a": [1, 2.5, None]}) == '{"a":[1,2.5,null]}'
