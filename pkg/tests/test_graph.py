import json
from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exploitflow import (
    AttackGraph,
    Environment,
    Flow,
    Init,
    RunSummary,
    expert_flow,
    fingerprint,
    greedy_rollout,
    make_agent,
    report,
    report_json,
    train,
)

GOLDEN = Path(__file__).parent / "golden"


def run_names(scenario, names):
    flow = Flow(Environment(scenario))
    flow.run(Init())
    for n in names:
        flow.run(flow.state * scenario.action(n))
    return flow.history


def test_linear_trace(ur3):
    history = run_names(ur3, ["targets", "metasploit"])
    graph = AttackGraph.from_history(history)
    assert len(history) == 3
    assert len(graph.nodes) == 4 and len(graph.edges) == 3


def test_idle_self_loop(ur3):
    history = run_names(ur3, ["idle"] * 5)
    graph = AttackGraph.from_history(history)
    (loop,) = graph.self_loops()
    assert loop.action == "idle" and loop.visits == 5


def test_shared_prefix_deduplicated(ur3):
    a = run_names(ur3, ["targets", "metasploit"])
    b = run_names(ur3, ["targets", "telnet_login @ 192.168.2.10"])
    graph = AttackGraph()
    for step in a + b:
        graph.record(step.before, step.action.name, step.reward, step.after)
    prints = {fingerprint(s.before) for s in a + b} | {fingerprint(s.after) for s in a + b}
    assert set(graph.nodes) == prints
    assert len(prints) == 5  # fresh, empty, after targets, two branches


def naive_graph(history):
    nodes = set()
    edges = Counter()
    for step in history:
        u, v = step.before.one_hot_encode().tobytes(), step.after.one_hot_encode().tobytes()
        nodes |= {u, v}
        edges[(u, v, step.action.name)] += 1
    return nodes, edges


@given(st.lists(st.sampled_from(["idle", "targets", "versions", "metasploit", "ssh_login @ 192.168.2.5"]), max_size=15))
def test_graph_matches_naive_oracle(ur3, names):
    history = run_names(ur3, names)
    graph = AttackGraph.from_history(history)
    nodes, edges = naive_graph(history)
    # map exact encodings to fingerprints: a bijection means the graphs are isomorphic
    to_fp = {}
    for step in history:
        to_fp[step.before.one_hot_encode().tobytes()] = fingerprint(step.before)
        to_fp[step.after.one_hot_encode().tobytes()] = fingerprint(step.after)
    assert len(set(to_fp.values())) == len(nodes)
    assert set(graph.nodes) == {to_fp[n] for n in nodes}
    mapped = {(to_fp[u], to_fp[v], a): c for (u, v, a), c in edges.items()}
    assert {k: e.visits for k, e in graph.edges.items()} == mapped


def test_empty_dot():
    dot = AttackGraph().export_dot()
    assert dot.startswith("digraph attack_graph {") and dot.endswith("}\n")
    assert "->" not in dot and "label=" not in dot


def test_expert_golden_dot(ur3):
    dot = expert_flow(Environment(ur3)).graph.export_dot()
    assert dot == (GOLDEN / "expert_ur3_ctf.dot").read_text()


def test_dot_deterministic(ur3):
    names = ["targets", "idle", "metasploit", "idle", "versions"]
    assert AttackGraph.from_history(run_names(ur3, names)).export_dot() == AttackGraph.from_history(
        run_names(ur3, names)
    ).export_dot()


def test_agent_graph_has_idle_loop(ur3):
    env = Environment(ur3)
    agent = make_agent(env, seed=3)
    train(agent, env)
    dot = greedy_rollout(agent, env).graph.export_dot()
    loops = [line for line in dot.splitlines() if "idle /" in line]
    assert loops
    src, dst = loops[0].split(" [")[0].strip().split(" -> ")
    assert src == dst


def test_root_marked(ur3):
    graph = AttackGraph.from_history(run_names(ur3, ["idle"]))
    assert graph.root in graph.nodes
    assert not any(e.dest == graph.root and e.source != graph.root for e in graph.edges.values())
    assert "peripheries=2" in graph.export_dot()


def test_edge_endpoints_exist(ur3):
    graph = AttackGraph.from_history(run_names(ur3, ["targets", "versions", "metasploit", "idle"]))
    for e in graph.edges.values():
        assert e.source in graph.nodes and e.dest in graph.nodes and e.visits >= 1


# -------------------------------------------------------------------- report

BENCH_RUNS = [
    RunSummary("expert", 8, 4),
    RunSummary("brute-force", -2680, 97),
    RunSummary("agent", 100, 10),
]


def test_report_bench_triple():
    text = report(BENCH_RUNS)
    lines = text.splitlines()[2:]
    assert [line.split()[0] for line in lines] == ["agent", "expert", "brute-force"]
    assert [int(line.split()[1]) for line in lines] == [100, 8, -2680]


def test_report_json():
    rows = json.loads(report_json(BENCH_RUNS))
    assert rows == [
        {"actor": "agent", "cumulative_reward": 100, "steps": 10},
        {"actor": "expert", "cumulative_reward": 8, "steps": 4},
        {"actor": "brute-force", "cumulative_reward": -2680, "steps": 97},
    ]


def test_report_single_row():
    assert len(report([RunSummary("expert", 8)]).splitlines()) == 3


def test_report_needs_runs():
    with pytest.raises(ValueError):
        report([])


@given(st.lists(st.tuples(st.text("abc", min_size=1, max_size=4), st.integers(-3000, 3000)), min_size=1, max_size=8))
def test_report_sorted_descending(rows):
    out = json.loads(report_json([RunSummary(a, r) for a, r in rows]))
    rewards = [r["cumulative_reward"] for r in out]
    assert rewards == sorted(rewards, reverse=True)
