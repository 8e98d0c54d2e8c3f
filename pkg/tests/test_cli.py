from __future__ import annotations

import json
import subprocess
import sys

import pytest

from solidtour.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run
from solidtour.core_digraph import format_digraph, transitive_tournament


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def t3_file(tmp_path):
    p = tmp_path / "t3.txt"
    p.write_text(format_digraph(transitive_tournament(3)))
    return str(p)


def spec_file(tmp_path, name, **params):
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps({"generator": name, "params": params}))
    return str(p)


def test_finite_hampath(capsys, t3_file):
    assert call(capsys, "finite", "hampath", t3_file) == (EXIT_OK, "0 1 2\n", "")


def test_finite_hamcycle_json(capsys, tmp_path):
    p = tmp_path / "c3.txt"
    p.write_text("3\n0 1\n1 2\n2 0\n")
    code, out, _ = call(capsys, "finite", "hamcycle", str(p), "--format", "json")
    assert code == EXIT_OK
    body = json.loads(out)
    assert body["valid"] and sorted(body["sequence"]) == [0, 1, 2]


def test_finite_hamcycle_of_transitive_fails(capsys, t3_file):
    code, _, err = call(capsys, "finite", "hamcycle", t3_file)
    assert code == EXIT_FAIL
    assert "error" in json.loads(err)


def test_hamcircle_three_ray_not_strong(capsys, tmp_path):
    code, out, err = call(capsys, "hamcircle", spec_file(tmp_path, "three_ray"), "-N", "8")
    assert code == EXIT_FAIL and out == ""
    assert json.loads(err)["error"] == "NotStronglyConnected"


def test_ends_ladder(capsys, tmp_path):
    code, out, _ = call(capsys, "ends", spec_file(tmp_path, "ladder"), "-N", "8")
    assert code == EXIT_OK
    body = json.loads(out)
    assert [t["label"] for t in body["threads"]] == ["ω_A", "ω_B"]
    assert body["order"] == ["ω_A", "ω_B"]


def test_generator_name_as_spec(capsys):
    code, out, _ = call(capsys, "ends", "three_ray", "-N", "6")
    assert code == EXIT_OK
    assert json.loads(out)["order"] == ["ω_1", "ω_2", "ω_3"]


@pytest.mark.parametrize("argv", [
    ["oracle", "validate", "ladder", "-N", "6"],
    ["levels", "three_ray", "-N", "4"],
    ["hampath", "binary_tree", "-N", "5"],
    ["hamcircle", "one_ended", "-N", "6"],
    ["limit-edges", "three_ray", "-N", "3"],
])
def test_pipelines_exit_zero(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == EXIT_OK, err
    json.loads(out)


def test_oracle_flag(capsys, tmp_path):
    p = spec_file(tmp_path, "ladder")
    assert call(capsys, "ends", "--oracle", p, "-N", "4") == call(capsys, "ends", p, "-N", "4")
    code, _, err = call(capsys, "ends", "--oracle", p, "three_ray")
    assert code == EXIT_USAGE and json.loads(err)["error"] == "UsageError"
    code, _, err = call(capsys, "ends")
    assert code == EXIT_USAGE


def test_levels_dot(capsys):
    code, out, _ = call(capsys, "levels", "ladder", "-N", "2", "--dot")
    assert code == EXIT_OK
    assert out.count("digraph") == 3


def test_hampath_dot(capsys):
    code, out, _ = call(capsys, "hampath", "ladder", "-N", "4", "--format", "dot")
    assert code == EXIT_OK and out.startswith("digraph")


def test_seed_overrides_random_solid(capsys, tmp_path):
    p = spec_file(tmp_path, "random_solid", seed=1)
    _, a, _ = call(capsys, "levels", p, "-N", "4", "--seed", "5")
    _, b, _ = call(capsys, "levels", spec_file(tmp_path, "random_solid", seed=5), "-N", "4")
    assert a == b


def test_out_file(capsys, tmp_path, t3_file):
    target = tmp_path / "out.txt"
    code, out, _ = call(capsys, "finite", "hampath", t3_file, "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text() == "0 1 2\n"


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["ends", "ladder", "-N", "0"],
    ["ends", "ladder", "--format", "svg"],
    ["ends", "no_such_generator"],
    ["finite", "hampath", "/no/such/file"],
])
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == EXIT_USAGE and out == ""
    assert json.loads(err)["error"]


def test_malformed_tournament_is_usage_error(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("3\n0 1\n1 0\n")
    code, _, err = call(capsys, "finite", "hampath", str(p))
    assert code == EXIT_USAGE
    assert "error" in json.loads(err)


def test_bad_spec_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{oops")
    code, _, err = call(capsys, "ends", str(p))
    assert code == EXIT_USAGE and json.loads(err)["error"] == "BadSpec"


def test_deterministic_bytes():
    argv = [sys.executable, "-m", "solidtour.cli", "hampath", "random_solid", "--seed", "3", "-N", "6"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_suite_small(capsys):
    code, out, _ = call(capsys, "suite", "--exhaustive-n", "4", "-N", "4")
    assert code == EXIT_OK
    assert out.splitlines() and all(line.startswith("PASS ") for line in out.splitlines())
