"""Command-line entry point: ``exploitflow run`` and ``exploitflow bench``."""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .agents import ActorRun, QLearn, TrainingConfig, brute_force, expert_flow, greedy_rollout, make_agent, train
from .environment import Environment, load_scenario
from .errors import FlowError
from .graph import RunSummary, report, report_json

ACTORS = ("expert", "agent", "brute")


@dataclass
class ExperimentConfig:
    scenario: str = "ur3_ctf"
    actor: str = "agent"
    seed: int = 0
    rollouts: int = 1000
    episode: int = 10
    alpha: float = 0.1
    gamma: float = 0.9
    epsilon: float = 0.1
    out: Path = field(default_factory=lambda: Path("runs"))

    def __post_init__(self):
        if self.actor not in ACTORS:
            raise ValueError(f"unknown actor {self.actor!r}; choose from {', '.join(ACTORS)}")
        if self.actor == "agent":
            TrainingConfig(self.rollouts, self.episode)
            for name in ("alpha", "gamma", "epsilon"):
                if not 0.0 <= getattr(self, name) <= 1.0:
                    raise ValueError(f"{name} must lie in [0, 1]")

    @property
    def training(self) -> TrainingConfig:
        return TrainingConfig(self.rollouts, self.episode)


def run_actor(cfg: ExperimentConfig, env: Environment) -> tuple[ActorRun, QLearn | None]:
    if cfg.actor == "expert":
        return expert_flow(env), None
    if cfg.actor == "brute":
        return brute_force(env), None
    agent = make_agent(env, seed=cfg.seed, alpha=cfg.alpha, gamma=cfg.gamma, epsilon=cfg.epsilon)
    train(agent, env, cfg.training)
    return greedy_rollout(agent, env, steps=cfg.episode), agent


def run_dir(base: Path, seed: int) -> Path:
    stamp = time.strftime("%Y%m%d-%H%M%S")
    path = base / f"{stamp}-seed{seed}"
    n = 1
    while path.exists():
        path = base / f"{stamp}-seed{seed}-{n}"
        n += 1
    path.mkdir(parents=True)
    return path


def cmd_run(cfg: ExperimentConfig) -> int:
    env = Environment(load_scenario(cfg.scenario))
    result, agent = run_actor(cfg, env)
    out = run_dir(cfg.out, cfg.seed)
    summary = RunSummary(result.actor, result.cumulative_reward, result.steps)
    (out / "report.json").write_text(report_json([summary]))
    (out / "graph.dot").write_text(result.graph.export_dot())
    if agent is not None:
        (out / "qtable.json").write_text(agent.to_json())
    print(result.cumulative_reward)
    print(f"artifacts: {out}", file=sys.stderr)
    return 0


def cmd_bench(configs: list[ExperimentConfig]) -> int:
    if not configs:
        raise ValueError("bench needs at least one actor")
    env = Environment(load_scenario(configs[0].scenario))
    out = run_dir(configs[0].out, configs[0].seed)
    rows = []
    for cfg in configs:
        result, agent = run_actor(cfg, env)
        rows.append(RunSummary(result.actor, result.cumulative_reward, result.steps))
        (out / f"graph-{result.actor}.dot").write_text(result.graph.export_dot())
        if agent is not None:
            (out / "qtable.json").write_text(agent.to_json())
    (out / "report.json").write_text(report_json(rows))
    print(report(rows), end="")
    print(f"artifacts: {out}", file=sys.stderr)
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", default="ur3_ctf", help="bundled scenario name or path to a JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rollouts", type=int, default=1000)
    p.add_argument("--episode", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--out", type=Path, default=Path("runs"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exploitflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one actor and write report.json, graph.dot, qtable.json")
    _add_common(run)
    run.add_argument("--actor", choices=ACTORS, default="agent")
    bench = sub.add_parser("bench", help="compare actors on one scenario")
    _add_common(bench)
    bench.add_argument("--actors", default="brute,expert,agent", help="comma separated subset of actors")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    common = dict(
        scenario=args.scenario,
        seed=args.seed,
        rollouts=args.rollouts,
        episode=args.episode,
        alpha=args.alpha,
        gamma=args.gamma,
        epsilon=args.epsilon,
        out=args.out,
    )
    try:
        if args.command == "run":
            return cmd_run(ExperimentConfig(actor=args.actor, **common))
        actors = [a.strip() for a in args.actors.split(",") if a.strip()]
        return cmd_bench([ExperimentConfig(actor=a, **common) for a in actors])
    except (FlowError, ValueError, OSError) as exc:
        print(f"exploitflow: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
