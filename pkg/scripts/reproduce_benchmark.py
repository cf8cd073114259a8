"""Run brute force, expert and a trained agent on a scenario and print the comparison table.

    python scripts/reproduce_benchmark.py --scenario ur3_ctf --seed 0
"""

import argparse
import time

from exploitflow import (
    Environment,
    RunSummary,
    TrainingConfig,
    brute_force,
    expert_flow,
    greedy_rollout,
    load_scenario,
    make_agent,
    report,
    train,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scenario", default="ur3_ctf")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--rollouts", type=int, default=1000)
    args = parser.parse_args()

    env = Environment(load_scenario(args.scenario))
    runs = [brute_force(env), expert_flow(env)]

    agent = make_agent(env, seed=args.seed)
    start = time.perf_counter()
    train(agent, env, TrainingConfig(rollouts=args.rollouts))
    runs.append(greedy_rollout(agent, env))
    print(f"trained in {time.perf_counter() - start:.2f}s, {len(agent.q)} Q entries")

    print(report(RunSummary(r.actor, r.cumulative_reward, r.steps) for r in runs), end="")
    print()
    for run in runs:
        trace = " * ".join(s.action.name for s in run.history[:6])
        more = " ..." if run.steps > 6 else ""
        print(f"{run.actor:12s} {trace}{more}")


if __name__ == "__main__":
    main()
