"""The three actors: tabular Q-Learning, a scripted expert and brute force."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .environment import Environment, SimulatedMsfAdapter
from .exploit import Init, Kind, Targets, Versions
from .flow import Flow, Step
from .graph import AttackGraph


class QLearn:
    """Tabular Q-Learning over hashable state keys and named actions.

    Missing entries read as 0. The first update of an entry stores the raw
    reward; later updates move the entry toward ``value`` by ``alpha``.
    """

    def __init__(
        self,
        actions: Sequence[str],
        epsilon: float = 0.1,
        alpha: float = 0.1,
        gamma: float = 0.9,
        seed: int | None = None,
    ):
        for name, v in (("epsilon", epsilon), ("alpha", alpha), ("gamma", gamma)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if not actions:
            raise ValueError("QLearn needs at least one action")
        self.q: dict[tuple[Hashable, str], float] = {}
        self.epsilon = epsilon
        self.alpha = alpha
        self.gamma = gamma
        self.actions = list(actions)
        self.rng = random.Random(seed)

    def get_q(self, state, action: str) -> float:
        return self.q.get((state, action), 0.0)

    def learn_q(self, state, action: str, reward: float, value: float) -> None:
        oldv = self.q.get((state, action))
        if oldv is None:
            self.q[(state, action)] = reward
        else:
            self.q[(state, action)] = oldv + self.alpha * (value - oldv)

    def choose_action(self, state, return_q: bool = False):
        q = [self.get_q(state, a) for a in self.actions]
        max_q = max(q)
        if self.rng.random() < self.epsilon:
            min_q = min(q)
            mag = max(abs(min_q), abs(max_q))
            # perturb every value instead of picking a uniformly random action
            q = [q[i] + self.rng.random() * mag - 0.5 * mag for i in range(len(self.actions))]
            max_q = max(q)
        if q.count(max_q) > 1:
            best = [i for i in range(len(self.actions)) if q[i] == max_q]
            i = self.rng.choice(best)
        else:
            i = q.index(max_q)
        action = self.actions[i]
        if return_q:
            return action, q
        return action

    def learn(self, state1, action1: str, reward: float, state2) -> None:
        maxqnew = max(self.get_q(state2, a) for a in self.actions)
        self.learn_q(state1, action1, reward, reward + self.gamma * maxqnew)

    # serialization: {state-key hex: {action: value}}
    def to_dict(self) -> dict:
        table: dict[str, dict[str, float]] = {}
        for (state, action), value in self.q.items():
            key = state.hex() if isinstance(state, bytes) else str(state)
            table.setdefault(key, {})[action] = value
        return {k: dict(sorted(v.items())) for k, v in sorted(table.items())}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, table: dict, actions: Sequence[str], **kwargs) -> QLearn:
        agent = cls(actions, **kwargs)
        for key, row in table.items():
            for action, value in row.items():
                agent.q[(bytes.fromhex(key), action)] = value
        return agent


@dataclass(frozen=True)
class TrainingConfig:
    rollouts: int = 1000
    episode: int = 10
    eval_mode: bool = False

    def __post_init__(self):
        if self.rollouts < 0:
            raise ValueError("rollouts must be non-negative")
        if self.episode < 1:
            raise ValueError("episode length must be at least 1")


@dataclass
class TrainingReport:
    episode_rewards: list[int]
    agent: QLearn


@dataclass
class ActorRun:
    actor: str
    cumulative_reward: int
    history: list[Step] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.history)

    @property
    def graph(self) -> AttackGraph:
        return AttackGraph.from_history(self.history)


def agent_actions(env: Environment) -> list[str]:
    """Names of the scenario's actions available to a learning agent."""
    scenario = env.scenario
    return [n for n in scenario.action_names if scenario.action(n).kind is not Kind.INIT]


def make_agent(env: Environment, seed: int | None = None, **hyper) -> QLearn:
    return QLearn(agent_actions(env), seed=seed, **hyper)


def train(agent: QLearn, env: Environment, config: TrainingConfig = TrainingConfig()) -> TrainingReport:
    """Online training loop; learns each transition one step behind.

    The flow is reset every ``config.episode`` steps. A reset clears the
    history, so the final transition of every episode is never learned.
    """
    actions = {name: env.scenario.action(name) for name in agent.actions}
    flow = Flow(env, model=agent)
    flow.reset()
    saved_epsilon = agent.epsilon
    if config.eval_mode:
        agent.epsilon = 0.0
    episode_rewards: list[int] = []
    try:
        age = 1
        while age <= config.rollouts:
            if flow.last_state() is not None:
                agent.learn(
                    flow.last_state().key(),
                    flow.last_action().name,
                    flow.last_reward(),
                    flow.state.key(),
                )
            name = agent.choose_action(flow.state.key())
            flow.run(flow.state * actions[name])
            if age % config.episode == 0:
                episode_rewards.append(flow.cumulative_reward)
                flow.reset()
            age += 1
    finally:
        agent.epsilon = saved_epsilon
    return TrainingReport(episode_rewards, agent)


def greedy_rollout(agent: QLearn, env: Environment, steps: int = 10) -> ActorRun:
    """Follow the learned table with exploration switched off."""
    actions = {name: env.scenario.action(name) for name in agent.actions}
    flow = Flow(env, model=agent)
    flow.reset()
    saved = agent.epsilon
    agent.epsilon = 0.0
    try:
        for _ in range(steps):
            name = agent.choose_action(flow.state.key())
            flow.run(flow.state * actions[name])
    finally:
        agent.epsilon = saved
    return ActorRun("agent", flow.cumulative_reward, list(flow.history))


def expert_flow(
    env: Environment,
    target: str = "192.168.2.10",
    username: str = "root",
    password: str = "easybot",
    port: int = 22,
) -> ActorRun:
    """Hand-written best-case route: recon, then ssh into every host with port 22 open."""
    flow = Flow(env)
    msf = SimulatedMsfAdapter(env.scenario)
    recon = Targets()
    versions = Versions()
    state = flow.run(Init() * recon * versions, target=target)
    for ip in list(state.states):
        if any(p.port == port and p.open for p in state.states[ip].ports):
            expl = msf.get_name("auxiliary", "scanner/ssh/ssh_login")
            expl.set_options({"RHOSTS": ip, "USERNAME": username, "PASSWORD": password})
            if not expl.missing():
                state = flow.run(state * expl, target=ip)
    return ActorRun("expert", flow.cumulative_reward, list(flow.history))


def brute_force(env: Environment, subset: Sequence[str] | None = None) -> ActorRun:
    """Run every permutation of ``subset`` back to back after a single init.

    The flow is never reset between permutations.
    """
    names = list(subset) if subset is not None else list(env.scenario.brute_force)
    if not names:
        raise ValueError("brute force needs at least one action")
    exploits = [env.scenario.action(n) for n in names]
    flow = Flow(env)
    flow.run(Init())
    for perm in itertools.permutations(exploits):
        for expl in perm:
            flow.run(flow.state * expl)
    return ActorRun("brute-force", flow.cumulative_reward, list(flow.history))
