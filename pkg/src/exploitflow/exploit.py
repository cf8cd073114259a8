"""Actions and the composition algebra.

Every discrete step of a flow, recon or offensive, is an :class:`Exploit`.
Exploits compose with ``*`` into a :class:`FlowExpr`; a :class:`NetState` on
the left seeds the expression so execution resumes from that state::

    expr = init * targets * versions
    expr = state * ssh_login
"""

from __future__ import annotations

import copy
import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import CompositionError
from .state import NetState


class ExploitCategory(enum.Enum):
    """Kill-chain stage of an action. ``NONE`` is for non-exploits."""

    RECONNAISSANCE = "reconnaissance"
    WEAPONIZATION = "weaponization"
    DELIVERY = "delivery"
    EXPLOITATION = "exploitation"
    INSTALLATION = "installation"
    COMMAND_AND_CONTROL = "command-and-control"
    NONE = "none"


class Kind(str, enum.Enum):
    INIT = "init"
    IDLE = "idle"
    RECON_TARGETS = "recon_targets"
    RECON_VERSIONS = "recon_versions"
    OFFENSIVE = "offensive"


class Exploit:
    """A single action with its options and simulated-execution metadata.

    ``exploit`` names the catalog entry the action instantiates (used for
    launch bookkeeping); for offensive actions it defaults to ``name``.
    """

    kind: Kind = Kind.OFFENSIVE
    default_category = ExploitCategory.EXPLOITATION

    def __init__(
        self,
        name: str,
        *,
        category: ExploitCategory | None = None,
        exploit: str | None = None,
        target: str | None = None,
        options: Mapping[str, str] | None = None,
        required_options: Iterable[str] = (),
        ports: Iterable[int] | None = None,
        reward: int | None = None,
    ):
        self.name = name
        self.category = category if category is not None else self.default_category
        self.exploit = exploit if exploit is not None else name
        self.target = target
        self.options: dict[str, str] = dict(options or {})
        self.required_options = tuple(required_options)
        self.ports = tuple(ports) if ports is not None else None
        self.reward = reward if reward is not None else self.base_reward()

    def base_reward(self) -> int:
        return -100 if self.kind is Kind.OFFENSIVE else 0

    def set_options(self, options: Mapping[str, str]) -> None:
        self.options.update(options)

    def missing(self) -> bool:
        return any(not self.options.get(opt) for opt in self.required_options)

    def resolve_target(self, default: str | None = None) -> str | None:
        return self.target or self.options.get("RHOSTS") or default

    def copy(self) -> Exploit:
        return copy.deepcopy(self)

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        target = f" @ {self.target}" if self.target else ""
        return f"<{type(self).__name__} {self.name}{target}>"

    def __eq__(self, other):
        if not isinstance(other, Exploit):
            return NotImplemented
        return (type(self), self.name, self.exploit, self.target, self.options, self.ports) == (
            type(other), other.name, other.exploit, other.target, other.options, other.ports
        )

    def __hash__(self):
        return hash((type(self), self.name, self.target))


class Init(Exploit):
    kind = Kind.INIT
    default_category = ExploitCategory.NONE

    def __init__(self, name: str = "init", **kwargs):
        super().__init__(name, **kwargs)


class Idle(Exploit):
    kind = Kind.IDLE
    default_category = ExploitCategory.NONE

    def __init__(self, name: str = "idle", **kwargs):
        super().__init__(name, **kwargs)


class Targets(Exploit):
    """Fingerprinting: find which hosts of the network are live."""

    kind = Kind.RECON_TARGETS
    default_category = ExploitCategory.RECONNAISSANCE

    def __init__(self, name: str = "targets", **kwargs):
        super().__init__(name, **kwargs)

    def base_reward(self) -> int:
        return -10


class Versions(Exploit):
    """Footprinting: port and service-version scan of the targeted hosts."""

    kind = Kind.RECON_VERSIONS
    default_category = ExploitCategory.RECONNAISSANCE

    def __init__(self, name: str = "versions", **kwargs):
        super().__init__(name, **kwargs)

    def base_reward(self) -> int:
        return -10


KIND_CLASSES: dict[Kind, type[Exploit]] = {
    Kind.INIT: Init,
    Kind.IDLE: Idle,
    Kind.RECON_TARGETS: Targets,
    Kind.RECON_VERSIONS: Versions,
    Kind.OFFENSIVE: Exploit,
}


@dataclass(frozen=True)
class FlowExpr:
    actions: tuple[Exploit, ...] = ()
    seed: NetState | None = None

    def __mul__(self, other):
        return compose(self, other)

    def __len__(self):
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)


def _as_expr(obj) -> FlowExpr:
    if isinstance(obj, FlowExpr):
        return obj
    if isinstance(obj, Exploit):
        return FlowExpr((obj,))
    if isinstance(obj, NetState):
        return FlowExpr((), seed=obj)
    raise CompositionError(f"cannot compose {type(obj).__name__}")


def compose(lhs, rhs) -> FlowExpr:
    """Concatenate two operands into one expression.

    A :class:`NetState` may only appear on the left and becomes the seed.
    """
    if isinstance(rhs, NetState):
        raise CompositionError("a state can only seed an expression from the left")
    left, right = _as_expr(lhs), _as_expr(rhs)
    if right.seed is not None:
        raise CompositionError("right operand is already seeded")
    if isinstance(lhs, NetState) and not right.actions:
        raise CompositionError("seeding an expression requires at least one action")
    seed = left.seed
    if seed is not None:
        seed = seed.copy()
    return FlowExpr(left.actions + right.actions, seed=seed)
