import json
import math
import subprocess
import sys

import jsonschema
import pytest

from invroot.cli import JobSpec, main, run_batch
from invroot.errors import ConfigurationError
from invroot.report import BATCH_SCHEMA, COMPARE_SCHEMA, ERROR_SCHEMA, SOLVE_SCHEMA, VERIFY_SCHEMA, dumps

import oracles


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


# -- solve -------------------------------------------------------------------


def test_solve_ln(capsys):
    code, rec, _ = run_json(capsys, "solve", "--function", "ln(x)", "--domain", "0.1", "10", "--bracket", "0.2", "5")
    assert code == 0
    jsonschema.validate(rec, SOLVE_SCHEMA)
    assert rec["root"] == pytest.approx(1.0, abs=1e-10)
    assert rec["function"] == "ln(x)" and rec["method"] == "identity"


def test_solve_affine_family(capsys):
    code, rec, _ = run_json(capsys, "solve", "--family", "affine", "--params", "2", "-4",
                            "--domain", "-5", "5", "--bracket", "-1", "3")
    assert code == 0
    jsonschema.validate(rec, SOLVE_SCHEMA)
    assert rec["root"] == pytest.approx(2.0, abs=1e-12)
    assert rec["spurious_filtered"] is True


def test_solve_inadmissible(capsys):
    code, out, err = run(capsys, "solve", "--function", "x^2", "--domain", "-1", "1", "--bracket", "-1", "1")
    assert code == 4
    assert "one-to-one" in err and out == ""


def test_solve_inadmissible_json(capsys):
    code, rec, _ = run_json(capsys, "solve", "--function", "x^2", "--domain", "-1", "1", "--bracket", "-1", "1")
    assert code == 4
    jsonschema.validate(rec, ERROR_SCHEMA)
    assert rec["exit_code"] == 4


def test_solve_text_output(capsys):
    code, out, _ = run(capsys, "solve", "--family", "log", "--bracket", "0.2", "5")
    assert code == 0
    assert "root" in out and "identity" in out


def test_solve_quiet(capsys):
    code, out, _ = run(capsys, "solve", "--family", "log", "--bracket", "0.2", "5", "--quiet")
    assert code == 0 and out == ""


def test_solve_no_root(capsys):
    code, rec, _ = run_json(capsys, "solve", "--family", "log", "--bracket", "2", "5")
    assert code == 2
    jsonschema.validate(rec, ERROR_SCHEMA)


def test_solve_spurious_only(capsys):
    code, _, err = run(capsys, "solve", "--family", "affine", "--params", "2", "-4", "--bracket", "-1", "1")
    assert code == 2 and "spurious" in err


def test_parse_error_exit(capsys):
    code, rec, _ = run_json(capsys, "solve", "--function", "x $ 3", "--domain", "0", "1", "--bracket", "0", "1")
    assert code == 3
    assert "offset 2" in rec["message"]


def test_fixed_h_and_tol(capsys):
    code, rec, _ = run_json(capsys, "solve", "--family", "log", "--bracket", "0.2", "5", "--h", "0.5", "--tol", "1e-10")
    assert code == 0
    assert rec["h_used"] == 0.5
    assert rec["root"] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("argv", [
    ["solve", "--family", "log"],                                     # missing bracket
    ["solve", "--family", "log", "--function", "ln(x)", "--bracket", "1", "2"],
    ["solve", "--family", "sine", "--bracket", "1", "2"],
    ["solve", "--family", "log", "--bracket", "one", "2"],
    ["frobnicate"],
])
def test_usage_errors_exit_3(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 3


@pytest.mark.parametrize("argv", [
    ["solve", "--family", "log", "--bracket", "0.2", "5", "--h", "0"],
    ["solve", "--family", "log", "--bracket", "0.2", "5", "--h", "wide"],
    ["solve", "--family", "log", "--bracket", "5", "0.2"],
    ["solve", "--family", "log", "--bracket", "0.01", "5"],
    ["solve", "--function", "ln(x)", "--bracket", "0.2", "5"],        # expression without domain
    ["solve", "--family", "affine", "--params", "0", "1", "--bracket", "-1", "1"],
])
def test_configuration_errors_exit_4(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 4 and err


def test_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("INVROOT_DEFAULT_TOL", "1e-6")
    code, rec, _ = run_json(capsys, "solve", "--family", "log", "--bracket", "0.2", "5")
    assert code == 0 and rec["root"] == pytest.approx(1.0, abs=1e-5)
    monkeypatch.setenv("INVROOT_DEFAULT_TOL", "-1")
    code, _, err = run(capsys, "solve", "--family", "log", "--bracket", "0.2", "5")
    assert code == 4 and "INVROOT_DEFAULT_TOL" in err
    monkeypatch.setenv("INVROOT_DEFAULT_TOL", "tiny")
    assert run(capsys, "solve", "--family", "log", "--bracket", "0.2", "5")[0] == 4


# -- verify ------------------------------------------------------------------


@pytest.mark.parametrize("family, lo, hi", [("log", "0.5", "4"), ("reciprocal", "0.3", "4")])
def test_verify_families(capsys, family, lo, hi):
    code, rec, _ = run_json(capsys, "verify", "--family", family, "--domain", lo, hi, "--samples", "100")
    assert code == 0
    jsonschema.validate(rec, VERIFY_SCHEMA)
    assert rec["samples"] == 100
    assert rec["max_rectangle_residual"] <= 1e-8
    assert rec["max_offset_spread"] <= 1e-8


def test_verify_expression(capsys):
    code, rec, _ = run_json(capsys, "verify", "--function", "x^3 + x", "--domain", "-2", "2", "--samples", "20")
    assert code == 0 and rec["status"] == "success"


def test_verify_inadmissible(capsys):
    assert run(capsys, "verify", "--function", "x^2", "--domain", "-1", "1")[0] == 4


def test_verify_is_seeded(capsys):
    argv = ("verify", "--family", "log", "--samples", "10", "--seed", "3")
    assert run_json(capsys, *argv)[1] == run_json(capsys, *argv)[1]


# -- compare -----------------------------------------------------------------


def test_compare_log(capsys):
    code, rec, _ = run_json(capsys, "compare", "--family", "log", "--bracket", "0.2", "5")
    assert code == 0
    jsonschema.validate(rec, COMPARE_SCHEMA)
    assert rec["difference"] <= 1e-10
    assert rec["identity"]["method"] == "identity" and rec["oracle"]["method"] == "oracle"


def test_compare_exp_shift(capsys):
    code, rec, _ = run_json(capsys, "compare", "--family", "exp-shift", "--params", "2", "--bracket", "0.1", "2")
    assert code == 0
    assert rec["identity"]["root"] == pytest.approx(oracles.EXP_SHIFT_ROOT, abs=1e-12)
    assert rec["oracle"]["root"] == pytest.approx(oracles.EXP_SHIFT_ROOT, abs=1e-12)


def test_compare_no_root_reports_each_method(capsys):
    code, rec, err = run_json(capsys, "compare", "--family", "log", "--bracket", "2", "5")
    assert code == 2
    jsonschema.validate(rec, COMPARE_SCHEMA)
    assert rec["status"] == "error"
    assert rec["identity"]["exit_code"] == 2 and rec["oracle"]["exit_code"] == 2
    assert rec["difference"] is None


def test_compare_text(capsys):
    code, out, _ = run(capsys, "compare", "--family", "reciprocal", "--params", "1", "--domain", "0.3", "4",
                       "--bracket", "0.3", "4")
    assert code == 0 and "oracle" in out


# -- batch -------------------------------------------------------------------


JOBS = [
    {"function": "ln(x)", "domain": [0.1, 10], "bracket": [0.2, 5]},
    {"family": "affine", "params": [2, -4], "domain": [-5, 5], "bracket": [-1, 3]},
    {"family": "exp-shift", "params": [2], "bracket": [0.1, 2]},
]


def write_lines(tmp_path, lines):
    path = tmp_path / "jobs.jsonl"
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return str(path)


def test_batch_three_jobs(capsys, tmp_path):
    path = write_lines(tmp_path, [json.dumps(j) for j in JOBS])
    code, rec, _ = run_json(capsys, "batch", path)
    assert code == 0
    jsonschema.validate(rec, BATCH_SCHEMA)
    roots = [r["report"]["root"] for r in rec["results"]]
    assert roots == [pytest.approx(1.0, abs=1e-10), pytest.approx(2.0, abs=1e-10),
                     pytest.approx(math.log(2), abs=1e-10)]
    for r in rec["results"]:
        jsonschema.validate(r["report"], SOLVE_SCHEMA)


def test_batch_malformed_line(capsys, tmp_path):
    lines = [json.dumps(JOBS[0]), "{not json", json.dumps(JOBS[2])]
    code, rec, _ = run_json(capsys, "batch", write_lines(tmp_path, lines))
    assert code == 3
    assert [r["exit_code"] for r in rec["results"]] == [0, 3, 0]
    assert rec["failed"] == 1 and rec["status"] == "failed"
    jsonschema.validate(rec["results"][1]["report"], ERROR_SCHEMA)


def test_batch_empty_file(capsys, tmp_path, caplog):
    code, rec, _ = run_json(capsys, "batch", write_lines(tmp_path, []))
    assert code == 0 and rec["results"] == [] and rec["total"] == 0
    assert any("no jobs" in r.getMessage() for r in caplog.records)


def test_batch_mixed_commands_and_failures(tmp_path):
    lines = [
        json.dumps({"command": "verify", "family": "log", "samples": 5}),
        json.dumps({"command": "compare", "family": "log", "bracket": [0.2, 5]}),
        json.dumps({"family": "log", "bracket": [2, 5]}),
        json.dumps({"family": "log", "bracket": [0.2, 5], "colour": "red"}),
        json.dumps([1, 2]),
    ]
    code, rec, _ = run_batch(write_lines(tmp_path, lines))
    assert [r["exit_code"] for r in rec["results"]] == [0, 0, 2, 4, 4]
    assert code == 4


def test_batch_order_independent_of_workers(tmp_path):
    rng_jobs = []
    for i in range(24):
        lo = 0.15 + 0.03 * i
        rng_jobs.append(json.dumps({"family": "log", "bracket": [lo, 5 - 0.1 * i]}))
    path = write_lines(tmp_path, rng_jobs)
    serial = run_batch(path, workers=1)[1]
    parallel = run_batch(path, workers=8)[1]
    assert [r["line"] for r in parallel["results"]] == list(range(1, 25))
    assert dumps(serial) == dumps(parallel)


def test_batch_missing_file(capsys, tmp_path):
    assert run(capsys, "batch", str(tmp_path / "absent.jsonl"))[0] == 4


# -- families and plumbing ---------------------------------------------------


def test_families(capsys):
    code, rec, _ = run_json(capsys, "families")
    assert code == 0
    assert [f["family"] for f in rec["families"]] == ["log", "affine", "exp-shift", "cube-shift", "reciprocal"]
    code, out, _ = run(capsys, "families")
    assert "alpha = 1" in out


def test_jobspec_invariants():
    with pytest.raises(ConfigurationError):
        JobSpec(family="log", function="ln(x)", bracket=None, command="verify")
    with pytest.raises(ConfigurationError):
        JobSpec(family="log", command="solve")
    with pytest.raises(ConfigurationError):
        JobSpec.from_dict({"family": "log", "bracket": [1]})


def test_json_floats_are_lossless():
    values = [0.1, 1 / 3, math.pi, 1e-300, 2.0, -0.0]
    text = dumps({"v": values})
    assert json.loads(text)["v"] == values
    assert dumps(float("nan")) == "null"
    assert dumps(2.0) == "2.0"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "invroot", "solve", "--function", "ln(x)", "--domain", "0.1", "10",
         "--bracket", "0.2", "5", "--json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["root"] == pytest.approx(1.0, abs=1e-10)
