import json
import logging
import threading

import pytest

from utils.constants import EXIT_OUTPUT_ERROR
from utils.decorators import log_command_usage, log_stage
from utils.exceptions import OutputError
from utils.helpers import (
    atomic_write_text,
    format_dimension_vector,
    format_support,
    parallel_map,
    pluralize,
    to_json,
)


def test_to_json_is_sorted_and_terminated():
    text = to_json({"b": 1, "a": [1, 2]})
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"')
    assert to_json({"a": [1, 2], "b": 1}) == text


def test_atomic_write(tmp_path):
    path = tmp_path / "out" / "report.json"
    atomic_write_text(path, to_json({"ok": True}), validate_json=True)
    assert json.loads(path.read_text(encoding="utf-8")) == {"ok": True}
    assert not (tmp_path / "out" / "report.json.tmp").exists()


def test_atomic_write_keeps_backup(tmp_path):
    path = tmp_path / "report.json"
    path.write_text("old", encoding="utf-8")
    atomic_write_text(path, "new", backup=True)
    assert path.read_text(encoding="utf-8") == "new"
    assert (tmp_path / "report.json.bak").read_text(encoding="utf-8") == "old"


def test_atomic_write_failure_leaves_destination(tmp_path):
    path = tmp_path / "report.json"
    path.write_text("{}", encoding="utf-8")
    with pytest.raises(json.JSONDecodeError):
        atomic_write_text(path, "{broken", validate_json=True)
    assert path.read_text(encoding="utf-8") == "{}"
    assert not (tmp_path / "report.json.tmp").exists()


def test_atomic_write_os_errors_become_output_errors(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("x", encoding="utf-8")
    with pytest.raises(OutputError) as info:
        atomic_write_text(blocker / "report.json", "{}")
    assert info.value.exit_code == EXIT_OUTPUT_ERROR
    assert info.value.witness == {"path": str(blocker / "report.json")}

    taken = tmp_path / "taken"
    taken.mkdir()
    with pytest.raises(OutputError):
        atomic_write_text(taken, "{}")
    assert not (tmp_path / "taken.tmp").exists()


@pytest.mark.parametrize("workers", [1, 4])
def test_parallel_map_keeps_order(workers):
    assert parallel_map(lambda x: x * x, range(20), workers) == [x * x for x in range(20)]


def test_single_worker_runs_inline():
    seen = set()
    parallel_map(lambda _: seen.add(threading.get_ident()), range(50), 1)
    assert seen == {threading.get_ident()}


def test_formatting():
    assert format_dimension_vector((1, 1, 0)) == "110"
    assert format_dimension_vector((10, 1)) == "10,1"
    assert format_support([]) == "0"
    assert format_support(["x", "y"]) == "x, y"
    assert pluralize(1, "node") == "1 node"
    assert pluralize(3, "node") == "3 nodes"


def test_log_stage(caplog):
    @log_stage("counting")
    def count(n):
        return n + 1

    with caplog.at_level(logging.INFO, logger="wexlattice.decorators"):
        assert count(1) == 2
    assert "Stage 'counting' finished" in caplog.text
    assert count.__name__ == "count"


def test_log_stage_on_failure(caplog):
    @log_stage("failing")
    def fail():
        raise RuntimeError("boom")

    with caplog.at_level(logging.INFO, logger="wexlattice.decorators"), pytest.raises(RuntimeError):
        fail()
    assert "Stage 'failing' finished" in caplog.text


def test_log_command_usage(caplog):
    @log_command_usage
    def cmd_demo(value=None, other=None):
        return value

    with caplog.at_level(logging.INFO, logger="wexlattice.decorators"):
        assert cmd_demo(value=3) == 3
    assert "Command 'cmd_demo' invoked with {'value': 3}" in caplog.text
