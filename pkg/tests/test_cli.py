"""Command-line behavior: exit codes, stdout/stderr split, file outputs."""

import json

import pytest
from click.testing import CliRunner

from blindwalk.cli import cli

from conftest import doc_text, make_layout_doc


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


# ---------- validate ----------


def test_validate_ok_prints_nothing(runner, two_rooms_path):
    result = runner.invoke(cli, ["validate", two_rooms_path])
    assert result.exit_code == 0
    assert result.stdout == ""


def test_validate_findings_go_to_stdout_one_per_line(runner, tmp_path):
    doc = make_layout_doc()
    doc["doors"][0]["width"] = 0.4
    path = write(tmp_path, "bad.json", doc_text(doc))
    result = runner.invoke(cli, ["validate", path])
    assert result.exit_code == 1
    lines = result.stdout.splitlines()
    assert len(lines) == 1
    assert "below the 0.8 m minimum" in lines[0]


def test_validate_parse_error_exits_2(runner, tmp_path):
    path = write(tmp_path, "broken.json", "{nope")
    result = runner.invoke(cli, ["validate", path])
    assert result.exit_code == 2
    assert result.stdout == ""
    assert "invalid JSON" in result.stderr


def test_validate_real_override(runner, two_rooms_path):
    result = runner.invoke(cli, ["validate", two_rooms_path, "--real", "2.5x4"])
    assert result.exit_code == 1
    assert result.stdout.count("does not fit") == 2
    ok = runner.invoke(cli, ["validate", two_rooms_path, "--real", "6x6"])
    assert ok.exit_code == 0


def test_validate_rejects_malformed_real_override(runner, two_rooms_path):
    result = runner.invoke(cli, ["validate", two_rooms_path, "--real", "four-by-four"])
    assert result.exit_code == 2
    assert "WIDTHxDEPTH" in result.stderr


# ---------- run ----------


def run_config_file(tmp_path, layout_name="two_rooms.json", **extra) -> str:
    import shutil

    from conftest import LAYOUT_DIR
    import os

    shutil.copy(os.path.join(LAYOUT_DIR, layout_name), tmp_path / layout_name)
    doc = {"layout": layout_name, "ticks": 400, "seed": 5}
    doc.update(extra)
    return write(tmp_path, "run.json", json.dumps(doc))


def test_run_prints_metrics_json_on_stdout(runner, tmp_path):
    config = run_config_file(tmp_path)
    result = runner.invoke(cli, ["run", config])
    assert result.exit_code == 0
    metrics = json.loads(result.stdout)
    assert metrics["ticks"] >= 1
    assert metrics["boundary_violations"] == 0
    assert "simulated 400 ticks" in result.stderr


def test_run_writes_trace_and_input_log(runner, tmp_path):
    config = run_config_file(tmp_path)
    trace_path = tmp_path / "trace.jsonl"
    log_path = tmp_path / "inputs.jsonl"
    result = runner.invoke(
        cli, ["run", config, "--trace", str(trace_path), "--input-log", str(log_path)]
    )
    assert result.exit_code == 0
    trace_lines = trace_path.read_text(encoding="utf-8").splitlines()
    assert all(json.loads(line)["kind"] for line in trace_lines)
    log_lines = log_path.read_text(encoding="utf-8").splitlines()
    assert len(log_lines) == 400


def test_run_bad_config_exits_2(runner, tmp_path):
    path = write(tmp_path, "run.json", '{"layout": "two_rooms.json", "speed": 9}')
    result = runner.invoke(cli, ["run", path])
    assert result.exit_code == 2
    assert "unknown config field" in result.stderr


def test_run_missing_layout_exits_2(runner, tmp_path):
    path = write(tmp_path, "run.json", '{"layout": "missing.json"}')
    result = runner.invoke(cli, ["run", path])
    assert result.exit_code == 2


def test_run_invalid_layout_exits_2(runner, tmp_path):
    doc = make_layout_doc()
    doc["doors"][0]["width"] = 0.4
    write(tmp_path, "two_rooms.json", doc_text(doc))
    config = write(tmp_path, "run.json", '{"layout": "two_rooms.json"}')
    result = runner.invoke(cli, ["run", config])
    assert result.exit_code == 2
    assert "failed validation" in result.stderr


def test_run_with_violations_exits_3(runner, tmp_path):
    # A 3.8 m space forces a compression-floor breach at setup.
    doc = make_layout_doc(real_space={"width": 3.8, "depth": 3.8})
    write(tmp_path, "tight.json", doc_text(doc))
    config = write(tmp_path, "run.json", '{"layout": "tight.json", "ticks": 30, "policy": "idle"}')
    result = runner.invoke(cli, ["run", config])
    assert result.exit_code == 3
    assert "logged violation" in result.stderr
    # Metrics still printed before the verdict.
    assert json.loads(result.stdout)["ticks"] >= 1


def test_run_no_check_skips_the_audit(runner, tmp_path):
    config = run_config_file(tmp_path)
    result = runner.invoke(cli, ["run", config, "--no-check"])
    assert result.exit_code == 0
    assert "audit:" not in result.stderr


# ---------- fit ----------


FIT_CSV = """distance_class,gain,answered_larger
Short,0.90,0
Short,0.90,0
Short,0.95,0
Short,0.95,1
Short,1.00,0
Short,1.00,1
Short,1.05,1
Short,1.05,0
Short,1.10,1
Short,1.10,1
"""


def test_fit_prints_per_class_parameters(runner, tmp_path):
    path = write(tmp_path, "responses.csv", FIT_CSV)
    result = runner.invoke(cli, ["fit", path])
    assert result.exit_code == 0
    out = json.loads(result.stdout)
    assert set(out) == {"Short"}
    fit = out["Short"]
    assert fit["a"] < 0
    assert 0.9 < fit["pse"] < 1.1
    assert fit["x25"] < fit["pse"] < fit["x75"]
    assert fit["warning"] is False


def test_fit_rejects_garbage_exit_2(runner, tmp_path):
    path = write(tmp_path, "responses.csv", "who,what\n1,2\n")
    result = runner.invoke(cli, ["fit", path])
    assert result.exit_code == 2
    assert "line 1" in result.stderr


def test_fit_empty_input_exit_2(runner, tmp_path):
    path = write(tmp_path, "responses.csv", "distance_class,gain,answered_larger\n")
    result = runner.invoke(cli, ["fit", path])
    assert result.exit_code == 2
    assert "no responses" in result.stderr


# ---------- plan ----------


def test_plan_prints_45_shuffled_trials(runner):
    result = runner.invoke(cli, ["plan", "--seed", "9"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "distance_class,gain,repeat_index"
    assert len(lines) == 46
    again = runner.invoke(cli, ["plan", "--seed", "9"])
    assert again.stdout == result.stdout
    other = runner.invoke(cli, ["plan", "--seed", "10"])
    assert other.stdout != result.stdout


def test_plan_requires_seed(runner):
    result = runner.invoke(cli, ["plan"])
    assert result.exit_code == 2


# ---------- logging setup ----------


def test_invalid_log_level_notice(runner, two_rooms_path, monkeypatch):
    monkeypatch.setenv("BLINDWALK_LOG", "shout")
    result = runner.invoke(cli, ["validate", two_rooms_path])
    assert result.exit_code == 0
    assert "ignoring BLINDWALK_LOG='shout'" in result.stderr


def test_plan_fit_round_trip(runner, tmp_path):
    """A planned session, answered by a perfect observer, fits cleanly."""
    plan = runner.invoke(cli, ["plan", "--seed", "3"])
    rows = ["distance_class,gain,answered_larger"]
    for line in plan.stdout.splitlines()[1:]:
        cls, gain, _ = line.split(",")
        # Deterministic observer: larger iff gain above 1 (ties to smaller).
        rows.append(f"{cls},{gain},{1 if float(gain) > 1.0 else 0}")
    path = write(tmp_path, "responses.csv", "\n".join(rows) + "\n")
    result = runner.invoke(cli, ["fit", path])
    assert result.exit_code == 0
    out = json.loads(result.stdout)
    assert set(out) == {"Long", "Middle", "Short"}
    for fit in out.values():
        assert fit["warning"] is True  # unanimous cells: separable data
