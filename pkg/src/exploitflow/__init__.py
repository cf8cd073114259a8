"""Composable exploitation flows over a simulated network, with learning actors."""

from .agents import (
    ActorRun,
    QLearn,
    TrainingConfig,
    TrainingReport,
    brute_force,
    expert_flow,
    greedy_rollout,
    make_agent,
    train,
)
from .environment import (
    Accounting,
    Environment,
    RewardScheme,
    Scenario,
    SimulatedMsfAdapter,
    load_scenario,
)
from .errors import (
    CompositionError,
    EncodingShapeError,
    FlowError,
    HostExists,
    MissingOptions,
    ScenarioError,
    TargetNotInScenario,
    UnknownStateType,
)
from .exploit import Exploit, ExploitCategory, FlowExpr, Idle, Init, Kind, Targets, Versions, compose
from .flow import Flow, Step
from .graph import AttackGraph, RunSummary, export_dot, fingerprint, report, report_json
from .state import EncodingParams, ExploitRecord, HostState, NetState, PortStatus, encoding_size

__version__ = "0.1.0"
