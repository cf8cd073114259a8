"""Train the agent over many seeds and report how often the greedy rollout hits the optimum.

Also prints the mean training reward per block of episodes, which is a cheap
learning curve.
"""

import argparse
import statistics
import time

import numpy as np

from exploitflow import Environment, TrainingConfig, greedy_rollout, load_scenario, make_agent, train


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scenario", default="ur3_ctf")
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--rollouts", type=int, default=1000)
    parser.add_argument("--episode", type=int, default=10)
    parser.add_argument("--alpha", type=float, default=0.1)
    parser.add_argument("--gamma", type=float, default=0.9)
    parser.add_argument("--epsilon", type=float, default=0.1)
    parser.add_argument("--blocks", type=int, default=10)
    args = parser.parse_args()

    env = Environment(load_scenario(args.scenario))
    cfg = TrainingConfig(rollouts=args.rollouts, episode=args.episode)
    finals, curves, times = [], [], []
    for seed in range(args.seeds):
        agent = make_agent(env, seed=seed, alpha=args.alpha, gamma=args.gamma, epsilon=args.epsilon)
        t0 = time.perf_counter()
        rep = train(agent, env, cfg)
        times.append(time.perf_counter() - t0)
        finals.append(greedy_rollout(agent, env, steps=args.episode).cumulative_reward)
        curves.append(rep.episode_rewards)

    best = max(finals)
    print(f"greedy reward per seed: {finals}")
    print(f"seeds at best ({best}): {finals.count(best)}/{args.seeds}")
    print(f"training time: mean {statistics.mean(times):.2f}s, max {max(times):.2f}s")

    if curves and curves[0]:
        blocks = np.array_split(np.array(curves, dtype=float), args.blocks, axis=1)
        print("mean episode reward by training block:")
        for i, block in enumerate(blocks):
            if block.size:
                print(f"  block {i:2d}: {block.mean():8.1f}")


if __name__ == "__main__":
    main()
