"""Deterministic simulator of a CTF-style network scenario.

The environment answers each action with an observation (per-host state
replacements), a reward and a success flag. It never touches a real network:
recon reads the declared host specs and offensive exploits succeed purely
from the declared vulnerabilities and the options they are launched with.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import MissingOptions, ScenarioError, TargetNotInScenario
from .exploit import KIND_CLASSES, Exploit, ExploitCategory, Kind
from .state import HostState, NetState, PortStatus, ip_sort_key

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RewardScheme:
    idle: int = 0
    recon_base: int = -10
    footprint_per_ip: int = -1
    exploit_success: int = 100
    exploit_failure: int = -100


@dataclass(frozen=True)
class Accounting:
    """Reward-accounting rules the published reward scheme leaves open.

    footprint_unit
        ``"ip"`` charges ``footprint_per_ip`` once per scanned host,
        ``"endpoint"`` once per scanned (host, port) pair.
    untargeted_versions
        What a version scan covers when no target is given: ``"all_live"``
        scans every live host, ``"none"`` scans nothing.
    repeat_success
        ``"penalize"``: an exploit already launched against a host cannot
        succeed there again. ``"reward"``: every qualifying launch succeeds.
    """

    footprint_unit: str = "ip"
    untargeted_versions: str = "all_live"
    repeat_success: str = "penalize"

    def __post_init__(self):
        if self.footprint_unit not in ("ip", "endpoint"):
            raise ScenarioError(f"bad footprint_unit {self.footprint_unit!r}")
        if self.untargeted_versions not in ("all_live", "none"):
            raise ScenarioError(f"bad untargeted_versions {self.untargeted_versions!r}")
        if self.repeat_success not in ("penalize", "reward"):
            raise ScenarioError(f"bad repeat_success {self.repeat_success!r}")


@dataclass(frozen=True)
class Service:
    port: int
    service: str = ""
    version: str | None = None
    cpe: str | None = None


@dataclass(frozen=True)
class Vulnerability:
    exploit: str
    requires: Mapping[str, str] = field(default_factory=dict)

    def satisfied_by(self, options: Mapping[str, str]) -> bool:
        return all(options.get(k) == v for k, v in self.requires.items())


@dataclass(frozen=True)
class HostSpec:
    ip: str
    ports: tuple[Service, ...] = ()
    credentials: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    vulnerable_to: tuple[Vulnerability, ...] = ()
    live: bool = True
    label: str = ""

    def service(self, port: int) -> Service | None:
        for svc in self.ports:
            if svc.port == port:
                return svc
        return None


@dataclass(frozen=True)
class ExploitSpec:
    name: str
    kind: Kind = Kind.OFFENSIVE
    category: ExploitCategory = ExploitCategory.EXPLOITATION
    module: str | None = None
    port: int | None = None
    required_options: tuple[str, ...] = ()


@dataclass(frozen=True)
class Scenario:
    name: str
    hosts: tuple[HostSpec, ...]
    monitored_ports: tuple[int, ...]
    exploit_catalog: tuple[ExploitSpec, ...]
    scan_ports: tuple[int, ...] = ()
    actions: tuple[Mapping, ...] = ()
    brute_force: tuple[str, ...] = ()
    seed: int = 0
    rewards: RewardScheme = RewardScheme()
    accounting: Accounting = Accounting()

    @property
    def ips(self) -> list[str]:
        """TARGET_IP_ADDRESSES: the scenario's IP universe in canonical order."""
        return sorted((h.ip for h in self.hosts), key=ip_sort_key)

    @property
    def exploit_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.exploit_catalog)

    @property
    def complete_ports(self) -> tuple[int, ...]:
        return self.scan_ports or self.monitored_ports

    def host(self, ip: str) -> HostSpec:
        for h in self.hosts:
            if h.ip == ip:
                return h
        raise TargetNotInScenario(f"{ip} is not part of scenario {self.name!r}")

    def catalog_entry(self, name: str) -> ExploitSpec:
        for e in self.exploit_catalog:
            if e.name == name:
                return e
        raise KeyError(name)

    def empty_state(self) -> NetState:
        return NetState.empty(self.ips, self.monitored_ports, self.exploit_names)

    @property
    def action_names(self) -> list[str]:
        return [a["name"] for a in self.actions]

    def action(self, name: str) -> Exploit:
        """Fresh instance of one of the scenario's preconfigured actions."""
        for spec in self.actions:
            if spec["name"] == name:
                return self._build_action(spec)
        raise KeyError(f"scenario {self.name!r} has no action {name!r}")

    def _build_action(self, spec: Mapping) -> Exploit:
        if "exploit" in spec:
            entry = self.catalog_entry(spec["exploit"])
            kind, category, required = entry.kind, entry.category, entry.required_options
        else:
            kind = Kind(spec["kind"])
            category, required = None, ()
        cls = KIND_CLASSES[kind]
        kwargs = dict(
            category=category,
            exploit=spec.get("exploit"),
            target=spec.get("target"),
            options=spec.get("options"),
            required_options=required,
            ports=spec.get("ports"),
        )
        return cls(spec["name"], **kwargs)

    def with_accounting(self, **changes) -> Scenario:
        return replace(self, accounting=replace(self.accounting, **changes))


# --------------------------------------------------------------------------- loading


def _parse(data: Mapping, name: str) -> Scenario:
    if data.get("version") != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported scenario schema version {data.get('version')!r}")
    try:
        catalog = tuple(
            ExploitSpec(
                name=e["name"],
                kind=Kind(e.get("kind", "offensive")),
                category=ExploitCategory(e.get("category", "exploitation")),
                module=e.get("module"),
                port=e.get("port"),
                required_options=tuple(e.get("required_options", ())),
            )
            for e in data.get("exploits", [])
        )
        hosts = tuple(
            HostSpec(
                ip=h["ip"],
                ports=tuple(
                    Service(p["port"], p.get("service", ""), p.get("version"), p.get("cpe"))
                    for p in h.get("ports", [])
                ),
                credentials={k: dict(v) for k, v in h.get("credentials", {}).items()},
                vulnerable_to=tuple(
                    Vulnerability(v["exploit"], dict(v.get("requires", {})))
                    for v in h.get("vulnerable_to", [])
                ),
                live=h.get("live", True),
                label=h.get("label", ""),
            )
            for h in data.get("hosts", [])
        )
        scenario = Scenario(
            name=data.get("name", name),
            hosts=hosts,
            monitored_ports=tuple(data.get("monitored_ports", [])),
            exploit_catalog=catalog,
            scan_ports=tuple(data.get("scan_ports", [])),
            actions=tuple(dict(a) for a in data.get("actions", [])),
            brute_force=tuple(data.get("brute_force", [])),
            seed=int(data.get("seed", 0)),
            rewards=RewardScheme(**data.get("rewards", {})),
            accounting=Accounting(**data.get("accounting", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"malformed scenario {name!r}: {exc}") from exc
    _validate(scenario)
    return scenario


def _validate(scenario: Scenario) -> None:
    ips = [h.ip for h in scenario.hosts]
    if len(set(ips)) != len(ips):
        raise ScenarioError("duplicate host ip")
    names = scenario.exploit_names
    if len(set(names)) != len(names):
        raise ScenarioError("duplicate exploit name in catalog")
    if len(set(scenario.monitored_ports)) != len(scenario.monitored_ports):
        raise ScenarioError("duplicate monitored port")
    for port in scenario.monitored_ports + scenario.scan_ports:
        if not 1 <= port <= 65535:
            raise ScenarioError(f"port out of range: {port}")
    for host in scenario.hosts:
        for vuln in host.vulnerable_to:
            if vuln.exploit not in names:
                raise ScenarioError(f"host {host.ip}: unknown exploit {vuln.exploit!r}")
    action_names = scenario.action_names
    if len(set(action_names)) != len(action_names):
        raise ScenarioError("duplicate action name")
    for spec in scenario.actions:
        if "exploit" in spec and spec["exploit"] not in names:
            raise ScenarioError(f"action {spec['name']!r}: unknown exploit {spec['exploit']!r}")
        if "exploit" not in spec and "kind" not in spec:
            raise ScenarioError(f"action {spec['name']!r} needs an exploit or a kind")
        target = spec.get("target")
        if target is not None and target not in ips:
            raise ScenarioError(f"action {spec['name']!r}: target {target} not in scenario")
    for name in scenario.brute_force:
        if name not in action_names:
            raise ScenarioError(f"brute_force references unknown action {name!r}")


BUNDLED = ("ur3_ctf", "toy2")


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario from a JSON file, or a bundled one by name."""
    path_str = str(path)
    if path_str in BUNDLED:
        text = resources.files("exploitflow").joinpath(f"scenarios/{path_str}.json").read_text()
        name = path_str
    else:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario {p}: {exc}") from exc
        name = p.stem
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {name!r} is not valid JSON: {exc}") from exc
    return _parse(data, name)


def parse_scenario(data: Mapping, name: str = "scenario") -> Scenario:
    return _parse(data, name)


# --------------------------------------------------------------------------- simulation


@dataclass(frozen=True)
class Outcome:
    delta: dict[str, HostState]
    reward: int
    success: bool
    reset: bool = False


class Environment:
    """Executes actions against a :class:`Scenario`. Stateless between calls."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario

    @property
    def rewards(self) -> RewardScheme:
        return self.scenario.rewards

    def empty_state(self) -> NetState:
        return self.scenario.empty_state()

    def _check_target(self, ip: str) -> HostSpec:
        return self.scenario.host(ip)

    def _host_state(self, current: NetState, ip: str) -> HostState:
        host = current.states.get(ip)
        if host is None:
            host = HostState.empty(ip, self.scenario.monitored_ports, self.scenario.exploit_names)
        return host

    def _mark(self, host: HostState, exploit: str | None) -> HostState:
        if exploit is not None and exploit in self.scenario.exploit_names:
            return host.with_launched(exploit)
        return host

    def execute(self, action: Exploit, current: NetState, target: str | None = None) -> Outcome:
        kind = action.kind
        if kind is Kind.INIT:
            return Outcome(dict(self.empty_state().states), 0, True, reset=True)
        if kind is Kind.IDLE:
            return Outcome({}, self.rewards.idle, True)
        if kind is Kind.RECON_TARGETS:
            return self._targets(action, current)
        if kind is Kind.RECON_VERSIONS:
            return self._versions(action, current, action.resolve_target(target))
        return self._offensive(action, current, action.resolve_target(target))

    def _targets(self, action: Exploit, current: NetState) -> Outcome:
        delta = {}
        for spec in self.scenario.hosts:
            if spec.live:
                delta[spec.ip] = self._mark(self._host_state(current, spec.ip), action.exploit)
        return Outcome(delta, self.rewards.recon_base, True)

    def _versions(self, action: Exploit, current: NetState, target: str | None) -> Outcome:
        if target is not None:
            self._check_target(target)
            ips = [target]
        elif self.scenario.accounting.untargeted_versions == "all_live":
            ips = [h.ip for h in self.scenario.hosts if h.live]
        else:
            ips = []
        ports = action.ports if action.ports is not None else self.scenario.complete_ports
        monitored = set(self.scenario.monitored_ports)
        delta = {}
        scanned = 0
        for ip in ips:
            spec = self._check_target(ip)
            if not spec.live:
                continue
            scanned += 1
            host = self._host_state(current, ip)
            for port in ports:
                if port not in monitored:
                    continue
                svc = spec.service(port)
                if svc is None:
                    host = host.with_port(PortStatus(port))
                else:
                    host = host.with_port(PortStatus(port, True, svc.version, svc.cpe))
            delta[ip] = self._mark(host, action.exploit)
        units = scanned * len(ports) if self.scenario.accounting.footprint_unit == "endpoint" else scanned
        reward = self.rewards.recon_base + self.rewards.footprint_per_ip * units
        return Outcome(delta, reward, True)

    def _offensive(self, action: Exploit, current: NetState, target: str | None) -> Outcome:
        if target is None:
            raise MissingOptions(f"{action.name}: no target (set target or RHOSTS)")
        spec = self._check_target(target)
        host = self._host_state(current, target)
        success = spec.live and self.succeeds(action, spec)
        if (
            success
            and self.scenario.accounting.repeat_success == "penalize"
            and action.exploit in self.scenario.exploit_names
            and host.launched(action.exploit)
        ):
            success = False
        reward = self.rewards.exploit_success if success else self.rewards.exploit_failure
        return Outcome({target: self._mark(host, action.exploit)}, reward, success)

    def succeeds(self, action: Exploit, spec: HostSpec) -> bool:
        """History-free vulnerability check for one offensive action."""
        try:
            entry = self.scenario.catalog_entry(action.exploit)
        except KeyError:
            return False
        if entry.port is not None and spec.service(entry.port) is None:
            return False
        return any(
            v.exploit == action.exploit and v.satisfied_by(action.options) for v in spec.vulnerable_to
        )


class SimulatedMsfAdapter:
    """Stand-in for an exploitation-framework adapter.

    Looks modules up in the scenario's exploit catalog by their module path,
    e.g. ``get_name("auxiliary", "scanner/ssh/ssh_login")``.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario

    def get_name(self, module_type: str, module_name: str) -> Exploit:
        path = f"{module_type}/{module_name}"
        for entry in self.scenario.exploit_catalog:
            if entry.module == path and entry.kind is Kind.OFFENSIVE:
                return Exploit(
                    entry.name,
                    category=entry.category,
                    required_options=entry.required_options,
                )
        raise KeyError(f"no module {path!r} in scenario {self.scenario.name!r}")
