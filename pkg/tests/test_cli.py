import json

import pytest

from exploitflow.cli import ExperimentConfig, main


def only_run_dir(base):
    (path,) = [p for p in base.iterdir() if p.is_dir()]
    return path


def test_run_agent_prints_100(tmp_path, capsys):
    assert main(["run", "--scenario", "ur3_ctf", "--actor", "agent", "--seed", "7", "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip() == "100"
    out = only_run_dir(tmp_path)
    assert sorted(p.name for p in out.iterdir()) == ["graph.dot", "qtable.json", "report.json"]
    assert json.loads((out / "report.json").read_text())[0]["cumulative_reward"] == 100


def test_run_brute_toy(tmp_path, capsys):
    # value frozen from the enumeration in test_agents.test_brute_toy_enumerated
    assert main(["run", "--scenario", "toy2", "--actor", "brute", "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip() == "-2728"
    assert not (only_run_dir(tmp_path) / "qtable.json").exists()


def test_run_missing_scenario(tmp_path, capsys):
    code = main(["run", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
    assert code != 0
    assert "error" in capsys.readouterr().err


def test_run_bad_hyperparameter(tmp_path, capsys):
    assert main(["run", "--alpha", "2", "--out", str(tmp_path)]) == 1


def test_bench_three_actors(tmp_path, capsys):
    assert main(["bench", "--scenario", "ur3_ctf", "--seed", "7", "--out", str(tmp_path)]) == 0
    rows = json.loads((only_run_dir(tmp_path) / "report.json").read_text())
    rewards = {r["actor"]: r["cumulative_reward"] for r in rows}
    assert rewards["brute-force"] < rewards["expert"] < rewards["agent"]


def test_bench_single_actor(tmp_path, capsys):
    assert main(["bench", "--actors", "expert", "--out", str(tmp_path)]) == 0
    rows = json.loads((only_run_dir(tmp_path) / "report.json").read_text())
    assert rows == [{"actor": "expert", "cumulative_reward": 8, "steps": 4}]


def test_bench_identical_agent_rows(tmp_path, capsys):
    assert main(["bench", "--actors", "agent,agent", "--seed", "3", "--out", str(tmp_path)]) == 0
    rows = json.loads((only_run_dir(tmp_path) / "report.json").read_text())
    assert len(rows) == 2 and rows[0] == rows[1]


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(actor="llm")
    with pytest.raises(ValueError):
        ExperimentConfig(actor="agent", episode=0)
