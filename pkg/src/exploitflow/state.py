"""Host-keyed network state and its one-hot encoding.

A :class:`NetState` maps every IP of a scenario to a :class:`HostState`.
Each host carries the same ordered port slots and exploit slots, which is
what makes the flat one-hot encoding well defined.

Per-host layout of the encoding (``l = b = 1``)::

    for each monitored port i:  n identity bits (one-hot at i) + 1 open bit
    for each exploit j:         m identity bits (one-hot at j) + 1 launched bit
    s system bits (always zero, no metadata is encoded)

Hosts are concatenated in ascending IP order.
"""

from __future__ import annotations

import ipaddress
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from .errors import EncodingShapeError, HostExists, UnknownStateType


@dataclass(frozen=True)
class PortStatus:
    port: int
    open: bool = False
    version: str | None = None
    cpe: str | None = None

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port out of range: {self.port}")
        if not self.open and (self.version is not None or self.cpe is not None):
            raise ValueError(f"port {self.port}: version/cpe given for a closed port")


@dataclass(frozen=True)
class ExploitRecord:
    name: str
    launched: bool = False


@dataclass(frozen=True)
class HostState:
    """Snapshot of one host: fixed-order port slots and exploit slots."""

    ip: str
    ports: tuple[PortStatus, ...] = ()
    exploits: tuple[ExploitRecord, ...] = ()

    @classmethod
    def empty(cls, ip: str, ports: Iterable[int], exploits: Iterable[str]) -> HostState:
        return cls(
            ip=ip,
            ports=tuple(PortStatus(p) for p in ports),
            exploits=tuple(ExploitRecord(e) for e in exploits),
        )

    @property
    def open_ports(self) -> list[int]:
        return [p.port for p in self.ports if p.open]

    def port(self, number: int) -> PortStatus:
        for p in self.ports:
            if p.port == number:
                return p
        raise KeyError(number)

    def launched(self, exploit: str) -> bool:
        for rec in self.exploits:
            if rec.name == exploit:
                return rec.launched
        raise KeyError(exploit)

    def with_port(self, status: PortStatus) -> HostState:
        ports = tuple(status if p.port == status.port else p for p in self.ports)
        if ports == self.ports and status not in self.ports:
            raise KeyError(f"port {status.port} is not monitored")
        return replace(self, ports=ports)

    def with_launched(self, exploit: str) -> HostState:
        if exploit not in {r.name for r in self.exploits}:
            raise KeyError(f"exploit {exploit!r} is not tracked")
        exploits = tuple(
            ExploitRecord(r.name, True) if r.name == exploit else r for r in self.exploits
        )
        return replace(self, exploits=exploits)

    def one_hot_encode(self) -> np.ndarray:
        n, m = len(self.ports), len(self.exploits)
        port_block = np.zeros((n, n + 1), dtype=np.uint8)
        port_block[:, :n] = np.eye(n, dtype=np.uint8)
        port_block[:, n] = [p.open for p in self.ports]
        exploit_block = np.zeros((m, m + 1), dtype=np.uint8)
        exploit_block[:, :m] = np.eye(m, dtype=np.uint8)
        exploit_block[:, m] = [r.launched for r in self.exploits]
        return np.concatenate([port_block.ravel(), exploit_block.ravel()])

    def to_dict(self) -> dict:
        return {
            "ip": self.ip,
            "ports": [
                {"port": p.port, "open": p.open, "version": p.version, "cpe": p.cpe}
                for p in self.ports
            ],
            "exploits": [{"name": r.name, "launched": r.launched} for r in self.exploits],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> HostState:
        return cls(
            ip=data["ip"],
            ports=tuple(
                PortStatus(p["port"], p["open"], p.get("version"), p.get("cpe"))
                for p in data["ports"]
            ),
            exploits=tuple(ExploitRecord(r["name"], r["launched"]) for r in data["exploits"]),
        )


@dataclass(frozen=True)
class EncodingParams:
    """Dimensions of the one-hot encoding.

    Each of the y hosts carries n port slots (l state bits apiece) and m
    exploit slots (b state bits apiece). The s trailing bits per host are
    reserved for system metadata.
    """

    y: int
    n: int
    l: int = 1  # noqa: E741
    m: int = 0
    b: int = 1
    s: int = 0

    def __post_init__(self):
        for name in ("y", "n", "l", "m", "b", "s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def per_host(self) -> int:
        return self.n * (self.n + self.l) + self.m * (self.m + self.b) + self.s


def encoding_size(params: EncodingParams) -> int:
    return params.y * params.per_host


def ip_sort_key(ip: str):
    try:
        return (0, ipaddress.ip_address(ip))
    except ValueError:
        return (1, ip)


@dataclass
class NetState:
    """Map from IP to :class:`HostState` over a scenario's IP universe."""

    ports: tuple[int, ...] = ()
    exploits: tuple[str, ...] = ()
    states: dict[str, HostState] = field(default_factory=dict)

    @classmethod
    def empty(cls, ips: Iterable[str], ports: Iterable[int], exploits: Iterable[str]) -> NetState:
        state = cls(tuple(ports), tuple(exploits))
        # initialize all states as empty
        for ip in ips:
            state.add_new(ip)
        return state

    def add_new(self, ip: str) -> None:
        if ip in self.states:
            raise HostExists(f"host {ip} already present")
        self.states[ip] = HostState.empty(ip, self.ports, self.exploits)

    def merge(self, new: HostState | NetState, target: str | None = None) -> None:
        """Overwrite entries of this state with those of ``new``.

        A single host replaces the entry at ``target`` whether it exists or
        not; a whole state overwrites every host it contains.
        """
        if isinstance(new, HostState):
            self.states[target if target is not None else new.ip] = new
        elif isinstance(new, NetState):
            for ip, host in new.states.items():
                self.states[ip] = host
        else:
            raise UnknownStateType(f"Unknown state type: {type(new).__name__}")

    def copy(self) -> NetState:
        # HostState is immutable, a shallow dict copy is a full snapshot
        return NetState(self.ports, self.exploits, dict(self.states))

    def ordered_ips(self) -> list[str]:
        return sorted(self.states, key=ip_sort_key)

    def params(self) -> EncodingParams:
        return EncodingParams(y=len(self.states), n=len(self.ports), m=len(self.exploits))

    def one_hot_encode(self, params: EncodingParams | None = None) -> np.ndarray:
        if params is None:
            params = self.params()
        if params.l != 1 or params.b != 1:
            raise EncodingShapeError("only one state bit per port and per exploit is supported")
        if params.y != len(self.states):
            raise EncodingShapeError(f"expected {params.y} hosts, state has {len(self.states)}")
        chunks = []
        for ip in self.ordered_ips():
            host = self.states[ip]
            if len(host.ports) != params.n or len(host.exploits) != params.m:
                raise EncodingShapeError(
                    f"host {ip}: {len(host.ports)} ports / {len(host.exploits)} exploits, "
                    f"expected {params.n} / {params.m}"
                )
            chunks.append(host.one_hot_encode())
            if params.s:
                chunks.append(np.zeros(params.s, dtype=np.uint8))
        if not chunks:
            return np.zeros(0, dtype=np.uint8)
        return np.concatenate(chunks)

    def key(self) -> bytes:
        """Exact byte key of the encoding, used to index the Q-table."""
        bits = self.one_hot_encode()
        return len(bits).to_bytes(4, "big") + np.packbits(bits).tobytes()

    def __mul__(self, other):
        from .exploit import compose

        return compose(self, other)

    def to_dict(self) -> dict:
        return {
            "ports": list(self.ports),
            "exploits": list(self.exploits),
            "hosts": [self.states[ip].to_dict() for ip in self.ordered_ips()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> NetState:
        state = cls(tuple(data["ports"]), tuple(data["exploits"]))
        for host in data["hosts"]:
            state.states[host["ip"]] = HostState.from_dict(host)
        return state
