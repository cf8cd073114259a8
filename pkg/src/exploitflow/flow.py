"""Execution of flow expressions and per-step history tracking."""

from __future__ import annotations

from dataclasses import dataclass

from .environment import Environment
from .errors import MissingOptions
from .exploit import Exploit, FlowExpr
from .state import NetState


@dataclass(frozen=True)
class Step:
    before: NetState
    action: Exploit
    reward: int
    after: NetState
    success: bool = True


class Flow:
    """Runs expressions against an environment, one action at a time.

    A fresh flow holds a host-less state; running :class:`~exploitflow.Init`
    populates the scenario's IP universe. :meth:`reset` goes straight to the
    empty universe state and keeps the learning model.
    """

    def __init__(self, env: Environment, model=None):
        self.env = env
        self.learning_model = model
        self._state = NetState(env.scenario.monitored_ports, env.scenario.exploit_names)
        self.history: list[Step] = []
        self.cumulative_reward = 0

    @property
    def state(self) -> NetState:
        return self._state

    def set_learning_model(self, model) -> None:
        self.learning_model = model

    def run(self, expr: FlowExpr | Exploit, target: str | None = None) -> NetState:
        if isinstance(expr, Exploit):
            expr = FlowExpr((expr,))
        if expr.seed is not None:
            self._state = expr.seed.copy()
        for action in expr.actions:
            if action.missing():
                missing = [o for o in action.required_options if not action.options.get(o)]
                raise MissingOptions(f"{action.name}: missing options {missing}")
            before = self._state
            outcome = self.env.execute(action, before, target)
            after = self.env.empty_state() if outcome.reset else before.copy()
            if not outcome.reset:
                for ip, host in outcome.delta.items():
                    after.merge(host, ip)
            self.history.append(Step(before, action, outcome.reward, after, outcome.success))
            self.cumulative_reward += outcome.reward
            self._state = after
        return self._state

    def reset(self) -> None:
        self._state = self.env.empty_state()
        self.history.clear()
        self.cumulative_reward = 0

    def last_state(self) -> NetState | None:
        return self.history[-1].before if self.history else None

    def last_action(self) -> Exploit | None:
        return self.history[-1].action if self.history else None

    def last_reward(self) -> int | None:
        return self.history[-1].reward if self.history else None
