import json

import numpy as np
import pytest
from typer.testing import CliRunner

from cli import app
from tests.golden import A3_CLOSED, A3_NODES
from utils.constants import EXIT_BUDGET_EXCEEDED, EXIT_OK, EXIT_OUTPUT_ERROR, EXIT_VALIDATION_ERROR

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_gen_matches_bundled_file(tmp_path, categories_dir):
    out = tmp_path / "a3.json"
    result = invoke("gen", "--type-a", 3, "--orientation", "RR", "--field", 2, "--out", out)
    assert result.exit_code == EXIT_OK, result.output
    assert read_json(out) == read_json(categories_dir / "a3_rr.json")


def test_gen_single_vertex(tmp_path):
    out = tmp_path / "a1.json"
    assert invoke("gen", "--type-a", 1, "--out", out).exit_code == EXIT_OK
    payload = read_json(out)
    assert payload["quiver"] == {"vertices": 1, "arrows": []}
    assert len(payload["indecomposables"]) == 1

    report = tmp_path / "a1_report.json"
    assert invoke("lattice", out, "--out-json", report).exit_code == EXIT_OK
    data = read_json(report)
    assert data["bimodule"]["dim"] == 0
    assert data["closed"]["count"] == 1


def test_gen_rejects_bad_prime(tmp_path):
    result = invoke("gen", "--type-a", 3, "--field", 4, "--out", tmp_path / "x.json")
    assert result.exit_code == EXIT_VALIDATION_ERROR
    assert not (tmp_path / "x.json").exists()


def test_lattice_report_and_dot(tmp_path, categories_dir):
    report, dot = tmp_path / "report.json", tmp_path / "lattice.dot"
    result = invoke("lattice", categories_dir / "a3_rr.json", "--out-json", report, "--out-dot", dot)
    assert result.exit_code == EXIT_OK, result.output

    data = read_json(report)
    assert data["bimodule"]["dim"] == 5
    assert len(data["lattice"]["nodes"]) == A3_NODES
    assert data["closed"]["count"] == A3_CLOSED
    assert sum(node["closed"] for node in data["lattice"]["nodes"]) == A3_CLOSED
    assert data["checks"]["passed"]
    assert data["checks"]["join_discrepancies"]["count"] > 0

    text = dot.read_text(encoding="utf-8")
    assert text.startswith("digraph lattice {\n  rankdir=BT;\n")
    assert text.count("doublecircle") == A3_CLOSED
    assert text.count(" -> ") == 20


def test_closed_only_dot_is_a_cube(tmp_path, categories_dir):
    dot = tmp_path / "closed.dot"
    result = invoke("lattice", categories_dir / "a3_rl.json", "--out-json", tmp_path / "r.json", "--out-dot", dot, "--closed-only")
    assert result.exit_code == EXIT_OK, result.output

    lines = dot.read_text(encoding="utf-8").splitlines()
    assert sum("[label=" in line for line in lines) == 8
    assert sum(" -> " in line for line in lines) == 12


def test_report_order_matches_hasse_closure(tmp_path, categories_dir):
    report = tmp_path / "report.json"
    invoke("lattice", categories_dir / "a3_rr.json", "--out-json", report)
    data = read_json(report)

    nodes = data["lattice"]["nodes"]
    supports = [set(node["support"]) for node in nodes]
    by_inclusion = np.array([[a <= b for b in supports] for a in supports], dtype=bool)

    reach = np.eye(len(nodes), dtype=bool)
    for lower, upper in data["lattice"]["hasse"]:
        reach[lower, upper] = True
    for k in range(len(nodes)):
        reach |= reach[:, [k]] & reach[[k], :]
    assert np.array_equal(reach, by_inclusion)


@pytest.mark.parametrize("extra", [[], ["--workers", "2"]])
def test_lattice_output_is_deterministic(tmp_path, categories_dir, extra):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    first_dot, second_dot = tmp_path / "first.dot", tmp_path / "second.dot"
    source = categories_dir / "a3_rr.json"
    invoke("lattice", source, "--out-json", first, "--out-dot", first_dot)
    invoke("lattice", source, "--out-json", second, "--out-dot", second_dot, *extra)

    assert first.read_bytes() == second.read_bytes()
    assert first_dot.read_bytes() == second_dot.read_bytes()


def test_lattice_over_another_field(tmp_path, categories_dir):
    two, three = tmp_path / "p2.json", tmp_path / "p3.json"
    invoke("lattice", categories_dir / "a3_rr.json", "--out-json", two)
    result = invoke("lattice", categories_dir / "a3_rr.json", "--out-json", three, "--field", 3)
    assert result.exit_code == EXIT_OK, result.output

    assert read_json(three)["category"]["field"] == 3
    assert read_json(three)["lattice"]["summary"] == read_json(two)["lattice"]["summary"]


def test_lattice_exit_codes(tmp_path, categories_dir):
    source = categories_dir / "a3_rr.json"
    assert invoke("lattice", tmp_path / "missing.json").exit_code == EXIT_VALIDATION_ERROR
    assert invoke("lattice", source, "--field", 4).exit_code == EXIT_VALIDATION_ERROR
    assert invoke("lattice", source, "--node-budget", 3).exit_code == EXIT_BUDGET_EXCEEDED


def test_unwritable_outputs_exit_cleanly(tmp_path, categories_dir):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    source = categories_dir / "a2.json"

    result = invoke("lattice", source, "--out-json", blocker / "r.json")
    assert result.exit_code == EXIT_OUTPUT_ERROR
    assert "Cannot create directory" in result.output
    assert "Traceback" not in result.output

    assert invoke("lattice", source, "--out-json", tmp_path / "r.json", "--out-dot", blocker / "h.dot").exit_code == EXIT_OUTPUT_ERROR
    assert invoke("gen", "--type-a", 2, "--out", blocker / "a2.json").exit_code == EXIT_OUTPUT_ERROR
    assert invoke("verify", source, "--checks", "roundtrip", "--out", blocker / "v.json").exit_code == EXIT_OUTPUT_ERROR
    assert blocker.read_text() == "not a directory"


def test_bad_settings_exit_before_running(tmp_path, categories_dir, monkeypatch):
    monkeypatch.setattr("config.settings.DEFAULT_FIELD", 4)
    result = invoke("lattice", categories_dir / "a2.json", "--out-json", tmp_path / "r.json")
    assert result.exit_code == EXIT_VALIDATION_ERROR
    assert not (tmp_path / "r.json").exists()


def test_verify_unknown_check(categories_dir):
    result = invoke("verify", categories_dir / "a2.json", "--checks", "roundtrip,nonsense")
    assert result.exit_code == EXIT_VALIDATION_ERROR


def test_verify_subset(tmp_path, categories_dir):
    out = tmp_path / "verify.json"
    result = invoke("verify", categories_dir / "a3_rr.json", "--checks", "roundtrip,baer,pushout,modularity,boolean", "--seed", 7, "--out", out)
    assert result.exit_code == EXIT_OK, result.output

    data = read_json(out)
    assert data["seed"] == 7
    assert data["passed"]
    assert [c["name"] for c in data["checks"]] == ["roundtrip", "baer", "pushout", "modularity", "boolean"]
    assert all(c["passed"] and c["witness"] is None for c in data["checks"])


def test_verify_field_stability(tmp_path, categories_dir):
    out = tmp_path / "verify.json"
    result = invoke("verify", categories_dir / "a3_rl.json", "--checks", "field-stability", "--out", out)
    assert result.exit_code == EXIT_OK, result.output
    (check,) = read_json(out)["checks"]
    assert check["cases"] == 3
    assert len({json.dumps(shape, sort_keys=True) for shape in check["details"].values()}) == 1


def test_verify_is_reproducible(tmp_path, categories_dir):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        invoke("verify", categories_dir / "a2.json", "--checks", "obscure,bifunctor", "--seed", 3, "--out", out)
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize("filename", ["a2.json", pytest.param("a3_rr.json", marks=pytest.mark.slow)])
def test_verify_all(tmp_path, categories_dir, filename):
    out = tmp_path / "verify.json"
    result = invoke("verify", categories_dir / filename, "--checks", "all", "--out", out)
    assert result.exit_code == EXIT_OK, result.output

    data = read_json(out)
    assert data["passed"]
    assert len(data["checks"]) == 10
