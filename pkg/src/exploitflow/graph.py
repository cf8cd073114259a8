"""Attack graphs built from recorded transitions, plus the actor comparison report."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable

from .state import NetState


def fingerprint(state: NetState) -> str:
    """Stable 64-bit hex digest of a state's canonical encoding."""
    return hashlib.blake2b(state.key(), digest_size=8).hexdigest()


@dataclass
class Edge:
    source: str
    dest: str
    action: str
    reward: int
    visits: int = 1


@dataclass
class AttackGraph:
    nodes: dict[str, str] = field(default_factory=dict)  # fingerprint -> label
    edges: dict[tuple[str, str, str], Edge] = field(default_factory=dict)
    root: str | None = None
    # exact encodings, kept to detect fingerprint collisions
    _encodings: dict[str, bytes] = field(default_factory=dict, repr=False)

    def add_node(self, state: NetState, label: str = "") -> str:
        fp = fingerprint(state)
        key = state.key()
        seen = self._encodings.setdefault(fp, key)
        if seen != key:
            raise RuntimeError(f"fingerprint collision on {fp}")
        if fp not in self.nodes or (label and not self.nodes[fp]):
            self.nodes[fp] = label
        if self.root is None:
            self.root = fp
        return fp

    def record(self, before: NetState, action: str, reward: int, after: NetState) -> None:
        src = self.add_node(before)
        dst = self.add_node(after)
        edge = self.edges.get((src, dst, action))
        if edge is None:
            self.edges[(src, dst, action)] = Edge(src, dst, action, reward)
        else:
            edge.visits += 1

    @classmethod
    def from_history(cls, history: Iterable) -> AttackGraph:
        graph = cls()
        for step in history:
            graph.record(step.before, step.action.name, step.reward, step.after)
        return graph

    def self_loops(self) -> list[Edge]:
        return [e for e in self.edges.values() if e.source == e.dest]

    def out_edges(self, node: str) -> list[Edge]:
        return [e for e in self.edges.values() if e.source == node]

    def export_dot(self) -> str:
        lines = ["digraph attack_graph {", "  rankdir=LR;", '  node [shape=box, fontname="monospace"];']
        for fp in sorted(self.nodes):
            label = fp[:8] + (f"\\n{self.nodes[fp]}" if self.nodes[fp] else "")
            extra = ", peripheries=2" if fp == self.root else ""
            lines.append(f'  "{fp}" [label="{label}"{extra}];')
        for key in sorted(self.edges):
            e = self.edges[key]
            label = f"{_escape(e.action)} / {e.reward} (x{e.visits})"
            lines.append(f'  "{e.source}" -> "{e.dest}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(graph: AttackGraph) -> str:
    return graph.export_dot()


@dataclass(frozen=True)
class RunSummary:
    actor: str
    cumulative_reward: int
    steps: int = 0


def _sorted(runs: Iterable[RunSummary]) -> list[RunSummary]:
    runs = list(runs)
    if not runs:
        raise ValueError("report needs at least one run")
    return sorted(runs, key=lambda r: (-r.cumulative_reward, r.actor))


def report_json(runs: Iterable[RunSummary]) -> str:
    rows = [
        {"actor": r.actor, "cumulative_reward": r.cumulative_reward, "steps": r.steps}
        for r in _sorted(runs)
    ]
    return json.dumps(rows, indent=2) + "\n"


def report(runs: Iterable[RunSummary]) -> str:
    """Plain-text comparison table, best actor first."""
    rows = _sorted(runs)
    width = max(len("actor"), *(len(r.actor) for r in rows))
    out = [f"{'actor':<{width}}  {'cumulative_reward':>17}  {'steps':>5}"]
    out.append("-" * len(out[0]))
    for r in rows:
        out.append(f"{r.actor:<{width}}  {r.cumulative_reward:>17}  {r.steps:>5}")
    return "\n".join(out) + "\n"
