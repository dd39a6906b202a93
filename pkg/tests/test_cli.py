"""End-to-end command-line behavior via in-process dispatch."""

import io
import json
import sys
from pathlib import Path

import pytest

from stocharray import __version__
from stocharray.cli import main
from stocharray.core import PolytopeSpec, to_json_dict, uniform_array

GOLDENS = Path(__file__).resolve().parent.parent / "goldens"
OMEGA_GOLDEN = str(GOLDENS / "omega-3x3x3.json")
SIGMA_GOLDEN = str(GOLDENS / "sigma-2x2x2.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, f"exit {code}, stderr: {err}"
    return json.loads(out)


# ─── global dispatch ─────────────────────────────────────────────────────────


def test_version_and_help(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.strip() == f"stocharray {__version__}"
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "commands:" in out


def test_no_arguments_is_a_usage_error(capsys):
    code, out, _ = run(capsys)
    assert code == 2
    assert "usage" in out


def test_unknown_command(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 4
    assert "unknown command" in err


# ─── verify ──────────────────────────────────────────────────────────────────


def test_verify_goldens(capsys):
    for path in (OMEGA_GOLDEN, SIGMA_GOLDEN):
        payload = run_json(capsys, "verify", path)
        assert payload["member"] is True
        assert payload["is_vertex"] is True
        assert payload["methods"]["graph"]["is_vertex"] is True
        assert payload["methods"]["rank"]["is_vertex"] is True


def test_verify_single_methods(capsys):
    for method in ("graph", "rank"):
        payload = run_json(capsys, "verify", OMEGA_GOLDEN, "--method", method)
        assert payload["is_vertex"] is True
        assert list(payload["methods"]) == [method]


def test_verify_from_stdin(capsys, monkeypatch):
    with open(SIGMA_GOLDEN, encoding="utf-8") as fh:
        text = fh.read()
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    payload = run_json(capsys, "verify")
    assert payload["is_vertex"] is True


def test_verify_non_half_integral_member(capsys, tmp_path):
    spec = PolytopeSpec("omega", 3, 1)
    doc = to_json_dict(spec, uniform_array(spec))
    path = tmp_path / "uniform.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    payload = run_json(capsys, "verify", str(path))
    assert payload["member"] is True
    assert payload["is_vertex"] is False
    assert payload["methods"]["graph"] == {"applicable": False}
    assert "witness" in payload["methods"]["rank"]
    code, _, err = run(capsys, "verify", str(path), "--method", "graph")
    assert code == 2
    assert "half-integral" in err


def test_verify_non_member_reports_null(capsys, tmp_path):
    doc = {"kind": "omega", "n": 2, "d": 1, "entries": [[0, 0], [0, 0]]}
    path = tmp_path / "zeros.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    payload = run_json(capsys, "verify", str(path))
    assert payload["member"] is False
    assert payload["is_vertex"] is None


def test_verify_io_failures(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "absent.json"))
    assert code == 3 and "i/o failure" in err
    bad = tmp_path / "broken.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 3


def test_verify_invalid_document(capsys, tmp_path):
    path = tmp_path / "incomplete.json"
    path.write_text(json.dumps({"kind": "omega", "n": 2}), encoding="utf-8")
    code, _, err = run(capsys, "verify", str(path))
    assert code == 2 and "invalid parameters" in err


# ─── enumerate ───────────────────────────────────────────────────────────────


def test_enumerate_counts(capsys):
    payload = run_json(capsys, "enumerate", "--kind", "omega", "--n", "3", "--d", "1")
    assert payload["count"] == 6
    assert len(payload["vertices"]) == 6
    payload = run_json(capsys, "enumerate", "--kind", "sigma", "--n", "2")
    assert payload["count"] == 6


def test_enumerate_too_large(capsys):
    code, _, err = run(capsys, "enumerate", "--kind", "omega", "--n", "6", "--d", "1")
    assert code == 2 and "invalid parameters" in err


# ─── construct ───────────────────────────────────────────────────────────────


def test_construct_single(capsys):
    payload = run_json(capsys, "construct", "omega", "--n", "6", "--seed", "0")
    assert payload["kind"] == "omega" and payload["n"] == 6
    assert payload["support"] == 72
    assert payload["certificate"]["is_vertex"] is True
    assert payload["meta"]["seed"] == 0
    payload = run_json(capsys, "construct", "sigma", "--n", "5", "--seed", "2")
    assert payload["support"] == 10
    assert payload["certificate"]["is_vertex"] is True


def test_construct_error_codes(capsys):
    code, _, err = run(capsys, "construct", "omega", "--n", "9")
    assert code == 2
    code, _, err = run(capsys, "construct", "omega", "--n", "4")
    assert code == 1 and "construction failed" in err
    code, _, _ = run(capsys, "construct", "omega", "--n", "6", "--count", "0")
    assert code == 2


def test_construct_count_collects_results(capsys):
    payload = run_json(
        capsys, "construct", "sigma", "--n", "4", "--seed", "3", "--count", "3"
    )
    assert payload["meta"]["params"]["count"] == 3
    assert len(payload["results"]) == 3
    seeds = [doc["meta"]["seed"] for doc in payload["results"]]
    assert seeds == [3, 4, 5]
    for doc in payload["results"]:
        assert doc["certificate"]["is_vertex"] is True


def test_construct_out_writes_stable_files(capsys, tmp_path):
    out = tmp_path / "runs"
    args = (
        "construct", "omega", "--n", "6", "--seed", "1", "--count", "2",
        "--out", str(out),
    )
    payload = run_json(capsys, *args)
    assert payload["written"] == ["omega-n6-seed1.json", "omega-n6-seed2.json"]
    first = {name: (out / name).read_bytes() for name in payload["written"]}
    for name in payload["written"]:
        doc = json.loads(first[name])
        assert doc["certificate"]["is_vertex"] is True
    run_json(capsys, *args)  # rerun into the same directory
    for name, blob in first.items():
        assert (out / name).read_bytes() == blob


# ─── designs ─────────────────────────────────────────────────────────────────


def test_designs_latin_grid_is_one_based(capsys):
    payload = run_json(capsys, "designs", "latin", "--order", "4", "--seed", "5")
    grid = payload["grid"]
    assert payload["order"] == 4
    for row in grid:
        assert sorted(row) == [1, 2, 3, 4]
    for j in range(4):
        assert sorted(row[j] for row in grid) == [1, 2, 3, 4]


def test_designs_double_latin(capsys):
    payload = run_json(capsys, "designs", "double-latin", "--n", "6", "--seed", "2")
    assert payload["hamiltonian"] is True
    for row in payload["grid"]:
        assert sorted(row) == [1, 1, 2, 2, 3, 3]


def test_designs_parameter_errors(capsys):
    code, _, _ = run(capsys, "designs", "latin")
    assert code == 2
    code, _, _ = run(capsys, "designs", "double-latin", "--n", "5")
    assert code == 2


# ─── bounds ──────────────────────────────────────────────────────────────────


def test_bounds_permanent(capsys, tmp_path):
    path = tmp_path / "matrix.json"
    path.write_text(json.dumps([[1, 0], [0, 1]]), encoding="utf-8")
    payload = run_json(capsys, "bounds", "permanent", str(path))
    assert payload["permanent"] == 1
    path.write_text(
        json.dumps([["1/2", "1/2"], ["1/2", "1/2"]]), encoding="utf-8"
    )
    payload = run_json(capsys, "bounds", "permanent", str(path))
    assert payload["permanent"] == "1/2"


def test_bounds_permanent_errors(capsys, tmp_path):
    code, _, _ = run(capsys, "bounds", "permanent", str(tmp_path / "nope.json"))
    assert code == 3
    bad = tmp_path / "scalar.json"
    bad.write_text("3", encoding="utf-8")
    code, _, err = run(capsys, "bounds", "permanent", str(bad))
    assert code == 2 and "list of rows" in err


def test_bounds_report(capsys):
    payload = run_json(capsys, "bounds", "report", "--n", "4")
    assert payload["top_half_count"] == 4
    assert payload["total_log_lower_bound"] == pytest.approx(
        payload["top_half_log_lower_bound"] + payload["bottom_half_log_lower_bound"]
    )
    code, _, _ = run(capsys, "bounds", "report")
    assert code == 2
    code, _, _ = run(capsys, "bounds", "report", "--n", "7")
    assert code == 2


# ─── sample ──────────────────────────────────────────────────────────────────


def test_sample_assignment_family(capsys):
    payload = run_json(
        capsys, "sample", "--kind", "omega", "--n", "4", "--d", "1",
        "--trials", "2", "--seed", "5",
    )
    assert payload["trials"] == 2
    for entry in payload["per_trial"]:
        assert entry["alpha"] == 0.25
        assert entry["is_vertex"] is True
    assert "caveat" in payload


def test_sample_out_file_matches_stdout(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, stdout, _ = run(
        capsys, "sample", "--kind", "omega", "--n", "3", "--d", "1",
        "--trials", "1", "--seed", "0", "--out", str(out),
    )
    assert code == 0
    assert out.read_text(encoding="utf-8") == stdout


# ─── seeding and determinism ─────────────────────────────────────────────────


def test_seed_env_variable_matches_flag(capsys, monkeypatch):
    flag = run_json(capsys, "construct", "sigma", "--n", "3", "--seed", "7")
    monkeypatch.setenv("SEED", "7")
    env = run_json(capsys, "construct", "sigma", "--n", "3")
    assert env == flag
    monkeypatch.setenv("SEED", "8")
    other = run_json(capsys, "construct", "sigma", "--n", "3")
    assert other != flag


def test_seed_env_must_be_integer(capsys, monkeypatch):
    monkeypatch.setenv("SEED", "not-a-number")
    code, _, err = run(capsys, "construct", "sigma", "--n", "3")
    assert code == 2 and "SEED" in err


def test_flag_beats_environment(capsys, monkeypatch):
    monkeypatch.setenv("SEED", "9")
    payload = run_json(capsys, "construct", "sigma", "--n", "3", "--seed", "7")
    assert payload["meta"]["seed"] == 7


def test_repeated_runs_are_byte_identical(capsys):
    argvs = [
        ("construct", "omega", "--n", "6", "--seed", "4"),
        ("sample", "--kind", "omega", "--n", "3", "--d", "2", "--trials", "1"),
        ("designs", "latin", "--order", "5", "--seed", "1"),
        ("enumerate", "--kind", "omega", "--n", "2", "--d", "2"),
    ]
    for argv in argvs:
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2 and out1.endswith("\n")


def test_verbose_goes_to_stderr_only(capsys):
    code, quiet_out, quiet_err = run(capsys, "designs", "latin", "--order", "3")
    assert code == 0 and quiet_err == ""
    code, loud_out, loud_err = run(capsys, "designs", "latin", "--order", "3", "-v")
    assert code == 0
    assert loud_out == quiet_out
    assert "designs latin ok" in loud_err


# ─── committed fixtures ──────────────────────────────────────────────────────


def test_every_golden_fixture_reverifies(capsys):
    fixtures = sorted(GOLDENS.glob("*.json"))
    assert len(fixtures) == 3
    for path in fixtures:
        payload = run_json(capsys, "verify", str(path))
        assert payload["member"] is True
        assert payload["is_vertex"] is True, f"{path.name} failed"
