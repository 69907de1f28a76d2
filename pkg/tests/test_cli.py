import json
from pathlib import Path

import numpy as np
import pytest

from genset import cli, codes, erasure, gf2, verify
from genset.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE

FIX = Path(__file__).parent / "fixtures"


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


# ---------------------------------------------------------------- fixture codes

@pytest.mark.parametrize("spec", codes.fixture_specs(16), ids=lambda s: f"{s.family}{s.params}")
def test_fixture_codes_match_documented_parameters(spec):
    C = codes.make_code(spec)
    n, k, d = codes.documented_parameters(spec)
    assert (C.n, C.k) == (n, k)
    assert gf2.rank(C.generator) == k and gf2.rank(C.parity_check) == n - k
    assert not gf2.matmul(C.generator, C.parity_check.T).any()
    assert erasure.minimum_distance(C) == d


def test_make_code_examples():
    H = codes.make_code("hamming", m=3)
    assert (H.n, H.k, erasure.minimum_distance(H)) == (7, 4, 3)
    P = codes.make_code("punctured-simplex", k=3)
    assert P.n == 6 and verify.is_good_set(verify.VectorSet.from_rows(P.generator.T), 2)
    # the deleted column is the lexicographically last nonzero vector
    cols = {gf2.to_string(x, 3) for x in gf2.pack_rows(P.generator.T)}
    assert "111" not in cols
    R = codes.make_code("repetition", n=3)
    assert (R.n, R.k, erasure.minimum_distance(R)) == (3, 1, 3)
    with pytest.raises(Exception):
        codes.make_code("hamming", m=1)
    with pytest.raises(Exception):
        codes.make_code("golay")


def test_random_code_seeded():
    a = codes.make_code("random", n=9, k=4, seed=3)
    b = codes.make_code("random", n=9, k=4, seed=3)
    assert (a.generator == b.generator).all() and a.k == 4


def test_parse_code_spec():
    s = cli.parse_code_spec("random:n=8,k=3,seed=5")
    assert s.family == "random" and s.params == {"n": 8, "k": 3} and s.seed == 5
    with pytest.raises(cli.UsageError):
        cli.parse_code_spec("nope:m=3")
    with pytest.raises(cli.UsageError):
        cli.parse_code_spec("hamming:m")


# ---------------------------------------------------------------- commands

def test_verify_fixture_witness(capsys):
    code, rep = run_json(capsys, "verify", "--set", str(FIX / "punctured_simplex_k3_columns.txt"),
                         "--property", "good", "--s", "2")
    assert code == EXIT_OK and rep["results"]["holds"] is True
    assert str(FIX / "punctured_simplex_k3_columns.txt") in rep["inputs"]["files"]


def test_verify_failure_certificate(capsys):
    code, rep = run_json(capsys, "verify", "--set", str(FIX / "unit_vectors_3.txt"),
                         "--property", "good", "--s", "2")
    assert code == EXIT_FAIL
    cert = rep["results"]["certificate"]
    assert cert["kind"] == "missed_flat"
    A = verify.VectorSet.from_rows(gf2.read_matrix(FIX / "unit_vectors_3.txt"))
    assert verify.Certificate(cert["kind"], cert["property"], cert["s"], cert["witness"]).replay(A)


@pytest.mark.parametrize("method", ["cosets", "matrices", "hyperplanes"])
def test_verify_generic_methods(capsys, method):
    code, rep = run_json(capsys, "verify", "--set", str(FIX / "unit_vectors_3.txt"),
                         "--property", "generic", "--s", "1", "--method", method)
    assert code == EXIT_OK


def test_verify_other_properties(capsys):
    code, _ = run_json(capsys, "verify", "--code", "simplex:k=3", "--property", "intersecting", "--s", "3")
    assert code == EXIT_OK
    code, _ = run_json(capsys, "verify", "--matrix", str(FIX / "hamming7_parity.txt"),
                       "--property", "covering-array", "--s", "2")
    assert code == EXIT_OK
    code, _ = run_json(capsys, "verify", "--set", str(FIX / "unit_vectors_3.txt"),
                       "--property", "blocking", "--s", "1")
    assert code == EXIT_FAIL


def test_search_exact(capsys):
    code, rep = run_json(capsys, "search", "--kind", "good", "--r", "3", "--s", "2")
    assert code == EXIT_OK
    assert rep["results"]["exact"] == 6 and rep["results"]["optimal"] is True


def test_search_budget_exit(capsys):
    code, rep = run_json(capsys, "search", "--kind", "good", "--r", "5", "--s", "3", "--budget", "3")
    assert code == EXIT_BUDGET and rep["results"]["optimal"] is False


def test_search_random_seeded(capsys):
    c1, r1 = run_json(capsys, "search", "--kind", "good", "--r", "4", "--s", "2", "--random", "--seed", "4")
    c2, r2 = run_json(capsys, "search", "--kind", "good", "--r", "4", "--s", "2", "--random", "--seed", "4")
    assert c1 == c2 == EXIT_OK and r1["results"] == r2["results"] and r1["seed"] == 4
    _, r3 = run_json(capsys, "search", "--kind", "good", "--r", "4", "--s", "2", "--random")
    assert r3["seed"] == cli.DEFAULT_SEED


def test_bounds_table_flags(capsys):
    code, rep = run_json(capsys, "bounds", "table", "--kmax", "6", "--smax", "4")
    assert code == EXIT_OK
    flagged = {(r["k"], r["s"]) for r in rep["results"]["flagged"]}
    assert {(k, 2) for k in range(2, 7)} <= flagged
    code = cli.run(["bounds", "table", "--kmax", "4", "--smax", "2", "--format", "text"])
    out = capsys.readouterr().out
    assert code == EXIT_OK and "F upper.binomial-sum" in out


def test_bounds_quantities(capsys):
    code, rep = run_json(capsys, "bounds", "G1", "--r", "4", "--s", "2")
    names = {v["name"]: v for v in rep["results"]["values"]}
    assert names["lower.min-weight-split"]["value"] == 9
    code, rep = run_json(capsys, "bounds", "--target", "rho", "--code", "hamming:m=3")
    assert code == EXIT_OK and rep["results"]["parameters"] == {"n": 7, "k": 4, "d": 3, "quantity": "rho"}
    code, rep = run_json(capsys, "bounds", "--target", "blocking", "--r", "4", "--s", "2", "--exact")
    assert rep["results"]["value"] == rep["results"]["exact"] == 7
    code, rep = run_json(capsys, "bounds", "threshold", "--kind", "good", "--r", "4", "--s", "2")
    assert rep["results"]["holds_at_N"] and rep["results"]["fails_at_N_minus_1"]
    code, rep = run_json(capsys, "bounds", "rate", "--s", "2")
    assert code == EXIT_OK


def test_construct_roundtrip(capsys, tmp_path):
    out = tmp_path / "A.txt"
    code, rep = run_json(capsys, "construct", "--kind", "good", "--r", "5", "--s", "2", "--out", str(out))
    assert code == EXIT_OK
    A = gf2.read_matrix(out)
    assert [gf2.to_string(x, 5) for x in gf2.pack_rows(A)] == rep["results"]["set"]
    assert json.loads((tmp_path / "A.txt.json").read_text())["results"] == rep["results"]
    code, rep2 = run_json(capsys, "verify", "--set", str(out), "--property", "good", "--s", "2")
    assert code == EXIT_OK


def test_construct_parity_roundtrip(capsys, tmp_path):
    out = tmp_path / "H.txt"
    code, rep = run_json(capsys, "construct", "--kind", "parity-check", "--code", "hamming:m=3", "--out", str(out))
    assert code == EXIT_OK
    code, rep2 = run_json(capsys, "stopping", "--matrix", str(out))
    assert rep2["results"]["stopping_distance"] == 3


def test_construct_union_budget(capsys):
    code, _ = run_json(capsys, "construct", "--kind", "subspace-union", "--r", "10", "--s", "4")
    assert code == EXIT_BUDGET


def test_stopping_construct(capsys):
    code, rep = run_json(capsys, "stopping", "--code", "hamming:m=3", "--construct")
    res = rep["results"]
    assert code == EXIT_OK and res["stopping_distance"] == 3
    assert res["greedy"]["extra"]["stopping_distance"] == 3


def test_simulate_csv(capsys):
    code = cli.run(["simulate", "--code", "hamming:m=3", "--p", "0.3", "--trials", "2000",
                    "--all-dual", "--seed", "1", "--format", "csv"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "code,p,trials,seed,name,peel_failures,rate,ml_failures"
    assert [ln.split(",")[4] for ln in lines[1:]] == ["parity-check", "all-dual"]


def test_table_command(capsys):
    code, rep = run_json(capsys, "table", "--rmax", "4", "--smax", "2")
    assert code == EXIT_OK and all(r["within_bound"] for r in rep["results"]["rows"])


@pytest.mark.parametrize("argv", [
    ["verify", "--property", "good", "--s", "2"],
    ["verify", "--set", "/nonexistent/A.txt", "--property", "good", "--s", "2"],
    ["construct", "--kind", "good", "--r", "3", "--s", "5"],
    ["search", "--kind", "nope"],
    ["bounds"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert cli.run(argv) == EXIT_USAGE


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("GENSET_BUDGET", "5")
    code, _ = run_json(capsys, "construct", "--kind", "good", "--r", "6", "--s", "3")
    assert code == EXIT_BUDGET


def test_reports_are_deterministic(capsys, tmp_path):
    argv = ["construct", "--kind", "generic", "--r", "5", "--s", "3"]
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    a.pop("timings"), b.pop("timings")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["command"] == ["genset", *argv] and a["version"]


def test_json_integers_are_exact(capsys):
    _, rep = run_json(capsys, "bounds", "F", "--r", "5", "--s", "3")
    vals = {v["name"]: v["value"] for v in rep["results"]["values"]}
    assert isinstance(vals["upper.binomial-sum"], int)
