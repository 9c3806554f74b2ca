import json
import subprocess
import sys

import pytest
import yaml

from suppvar.cli import (COMMANDS, EXIT_BUDGET, EXIT_OK, EXIT_VALIDATION, JobError, JobSpec, emit, main,
                         parse_poly, run)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def results(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv, "--format", "json")
    assert code == EXIT_OK
    return json.loads(out)["results"]


def test_hh_dims(capsys):
    assert results(capsys, "hh", "--fixture", "A1", "--cap-cohom", "4")["dims"] == [2, 2, 2, 2, 2]


def test_ext_algebra_of_the_free_example(capsys):
    res = results(capsys, "ext-algebra", "--fixture", "A4(2)", "--cap-cohom", "3")
    assert res["dims"] == [1, 2, 4, 8]
    assert res["graded_centre_dims"] == [1, 0, 0, 0]


def test_resolve_csv_header(capsys):
    code, out, _ = run_cli(capsys, "resolve", "--fixture", "A3", "--cap-res", "4", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "degree,b_n"
    assert lines[1:] == [f"{n},{n + 1}" for n in range(5)]


def test_human_output_has_an_echo_header(capsys):
    code, out, _ = run_cli(capsys, "complexity", "--fixture", "A1")
    assert code == EXIT_OK
    assert out.startswith("complexity on A1 over GF(2)")
    assert "seed 0" in out.splitlines()[0]


@pytest.mark.parametrize("command", ["analyze-algebra", "complexity", "variety", "periodic", "realize",
                                     "witness", "pencil", "fg-check"])
def test_commands_run_on_a3(capsys, command):
    argv = [command, "--fixture", "A3", "--cap-res", "6", "--cap-ideal", "6", "--format", "json"]
    if command == "witness":
        argv += ["--module", "simple 0"]
    code, out, _ = run_cli(capsys, *argv)
    assert code == EXIT_OK, out
    doc = json.loads(out)
    assert doc["job"]["command"] == command
    assert doc["job"]["field"] == "GF(2)"


def test_verify_a3_has_no_falsification(capsys):
    code, out, _ = run_cli(capsys, "verify", "--fixture", "A3", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert not any(f.startswith("FALSIFICATION") for f in doc["flags"])
    assert doc["results"]["split_equivalence"]["disagreements"] == 0


def test_fg_check_flags_the_free_example(capsys):
    code, out, _ = run_cli(capsys, "fg-check", "--fixture", "A4(2)", "--cap-cohom", "3", "--cap-res", "8",
                           "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["results"]["verdict"] == "FAIL"
    assert doc["results"]["growth"]["betti"][0] == [2 ** n for n in range(9)]


def test_reports_are_byte_identical(capsys):
    argv = ["variety", "--fixture", "A3", "--seed", "7", "--format", "json"]
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_job_echo_round_trips(capsys):
    _, out, _ = run_cli(capsys, "complexity", "--fixture", "A5", "--seed", "3", "--format", "json")
    echo = json.loads(out)["job"]
    again = JobSpec.from_dict(echo)
    assert again.to_dict() == echo


def test_empty_results_still_emit_the_echo():
    job = JobSpec.from_dict({"command": "hh", "algebra": "A1"})
    report = {"job": job.to_dict(), "versions": {}, "results": {}, "flags": []}
    doc = json.loads(emit(report, "json"))
    assert doc["job"]["field"] == "GF(2)" and doc["results"] == {}


def test_yaml_job_with_quiver_and_named_modules(tmp_path, capsys):
    job = {
        "command": "complexity",
        "field": "GF(3)",
        "algebra": {"quiver": {"vertices": ["1"], "arrows": [["x", "1", "1"]]}, "relations": ["x*x*x"]},
        "modules": {"M": {"syzygy": 1, "of": {"simple": "1"}}},
        "args": {"module": "M"},
        "caps": {"resolution": 6},
    }
    path = tmp_path / "job.yaml"
    path.write_text(yaml.safe_dump(job))
    res = results(capsys, "complexity", "--input", str(path))
    assert res["classification"] == "finite"
    assert res["value"] == 1


def test_literal_matrices_module(tmp_path, capsys):
    job = {"command": "resolve", "algebra": "A1",
           "modules": {"P": {"matrices": {"dims": [2], "arrows": {"x": [[0, 0], [1, 0]]}}}},
           "args": {"module": "P"}}
    path = tmp_path / "job.yaml"
    path.write_text(yaml.safe_dump(job))
    res = results(capsys, "resolve", "--input", str(path), "--cap-res", "3")
    assert res["betti"] == [1, 0, 0, 0]


@pytest.mark.parametrize("bad,where", [
    ({"command": "hh"}, "algebra"),
    ({"command": "nope", "algebra": "A1"}, "command"),
    ({"command": "hh", "algebra": "A1", "caps": {"resolution": 0}}, "caps.resolution"),
    ({"command": "hh", "algebra": "A1", "bogus": 1}, "job"),
    ({"command": "hh", "algebra": "A1", "field": "GF(4)"}, "field"),
    ({"command": "hh", "algebra": "A1", "seed": "x"}, "seed"),
])
def test_validation_errors_name_the_position(bad, where):
    with pytest.raises(JobError) as info:
        JobSpec.from_dict(bad)
    assert info.value.where == where


def test_yaml_syntax_error_reports_line(tmp_path, capsys):
    path = tmp_path / "broken.yaml"
    path.write_text("command: hh\nalgebra: [A1\n")
    code, _, err = run_cli(capsys, "hh", "--input", str(path))
    assert code == EXIT_VALIDATION
    assert "line" in err


def test_unknown_module_is_a_validation_error(capsys):
    code, _, err = run_cli(capsys, "complexity", "--fixture", "A1", "--module", "mystery")
    assert code == EXIT_VALIDATION
    assert "args.module" in err


def test_witness_needs_a_selfinjective_algebra(capsys):
    code, _, err = run_cli(capsys, "witness", "--fixture", "A4(2)", "--cap-cohom", "2", "--cap-res", "4")
    assert code == EXIT_VALIDATION
    assert "selfinjective" in err


def test_budget_exhaustion_is_reported_as_inconclusive(monkeypatch):
    from suppvar import cli
    from suppvar.cohom import BudgetExceeded

    def boom(ws, flags):
        raise BudgetExceeded("element ceiling reached")

    monkeypatch.setitem(cli.HANDLERS, "hh", boom)
    report, code = run(JobSpec.from_dict({"command": "hh", "algebra": "A1"}))
    assert code == EXIT_BUDGET
    assert report["flags"] == ["INCONCLUSIVE: element ceiling reached"]


def test_parse_poly_uses_generator_names():
    job = JobSpec.from_dict({"command": "variety", "algebra": "A3"})
    from suppvar.cli import Workspace
    ws = Workspace(job)
    p = parse_poly(ws.h, "x1^2 + x1*x2", "args.eta")
    assert sorted(p) == [(1, 1), (2, 0)]
    with pytest.raises(JobError):
        parse_poly(ws.h, "x1 + y", "args.eta")


def test_console_script_is_installed():
    out = subprocess.run([sys.executable, "-m", "suppvar.cli", "hh", "--fixture", "A1", "--cap-cohom", "2",
                          "--format", "json"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["results"]["dims"] == [2, 2, 2]


def test_every_command_has_a_handler():
    from suppvar.cli import HANDLERS
    assert set(HANDLERS) == set(COMMANDS)
