"""Run configuration: YAML loading, validation, seed derivation.

One config file drives a single run; an optional `sweep` section turns it
into a family of runs along one axis (V, D, or error_rate) with independent
replication seeds derived from the master seed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

import yaml

from . import topology as topo_mod
from .policy import POLICY_NAMES
from .traffic import ArrivalSpec, HotSpotSpec, PredictionSpec


class ConfigError(ValueError):
    """Invalid configuration; carries every detected problem."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid config:\n  - " + "\n  - ".join(problems))


@dataclass(frozen=True)
class TopologySpec:
    kind: str = "fat_tree"
    k: int = 4
    core: int = 2
    agg: int = 4
    edge_per_agg: int = 4
    hosts_per_edge: int = 8
    n_switches: int = 20
    ports: int = 6
    hosts_per_switch: int = 2
    n_controllers: int | None = None
    seed: int = 1


SWEEP_AXES = ("V", "D", "error_rate")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    replications: int = 1


@dataclass
class SimConfig:
    topology: TopologySpec = field(default_factory=TopologySpec)
    arrivals: ArrivalSpec = field(default_factory=ArrivalSpec)
    hotspot: HotSpotSpec | None = None
    prediction: PredictionSpec = field(default_factory=PredictionSpec)
    policy_name: str = "poscad"
    v: float = 10.0
    gamma: float = 1.0
    beta1: float = 1.0
    beta2: float = 1.0
    devolution: bool = True
    controller_capacity: int = 600
    switch_capacity: int = 10
    computation_cost: float | None = None  # None: mean hop count
    horizon: int = 100_000
    warmup: int = 10_000
    master_seed: int = 1
    sweep: SweepSpec | None = None

    def build_topology(self):
        t = self.topology
        if t.kind == "fat_tree":
            return topo_mod.build_fat_tree(t.k, t.n_controllers)
        if t.kind == "f10":
            return topo_mod.build_f10(t.k, t.n_controllers)
        if t.kind == "three_tier":
            return topo_mod.build_three_tier(
                t.core, t.agg, t.edge_per_agg, t.hosts_per_edge, t.n_controllers
            )
        if t.kind == "jellyfish":
            n_ctrl = t.n_controllers if t.n_controllers is not None else 4
            return topo_mod.build_jellyfish(
                t.n_switches, t.ports, t.hosts_per_switch, n_ctrl, t.seed
            )
        raise ConfigError([f"topology.kind: unknown kind {t.kind!r}"])

    def build_costs(self, topo):
        return topo_mod.comm_costs(topo, self.computation_cost)

    def echo(self) -> dict:
        t = self.topology
        topo_echo: dict[str, Any] = {"kind": t.kind}
        if t.kind in ("fat_tree", "f10"):
            topo_echo["k"] = t.k
        elif t.kind == "three_tier":
            topo_echo.update(
                core=t.core, agg=t.agg, edge_per_agg=t.edge_per_agg,
                hosts_per_edge=t.hosts_per_edge,
            )
        else:
            topo_echo.update(
                n_switches=t.n_switches, ports=t.ports,
                hosts_per_switch=t.hosts_per_switch, seed=t.seed,
            )
        if t.n_controllers is not None:
            topo_echo["n_controllers"] = t.n_controllers
        out = {
            "topology": topo_echo,
            "arrivals": {
                "process": self.arrivals.process,
                "mean_rate": self.arrivals.mean_rate,
                "slot_ms": self.arrivals.slot_ms,
                "a_max": self.arrivals.a_max,
            },
            "prediction": {
                "mean_window": self.prediction.mean_window,
                "error_rate": self.prediction.error_rate,
                **(
                    {"window_seed": self.prediction.window_seed}
                    if self.prediction.window_seed is not None
                    else {}
                ),
            },
            "policy": {
                "name": self.policy_name,
                "V": self.v,
                "gamma": self.gamma,
                "beta1": self.beta1,
                "beta2": self.beta2,
                "devolution": self.devolution,
            },
            "capacities": {
                "controller": self.controller_capacity,
                "switch": self.switch_capacity,
            },
            "run": {
                "horizon": self.horizon,
                "warmup": self.warmup,
                "master_seed": self.master_seed,
            },
        }
        if self.hotspot is not None:
            out["hotspot"] = {
                "pod_index": self.hotspot.pod_index,
                "rate": self.hotspot.rate,
            }
        if self.computation_cost is not None:
            out["computation_cost"] = self.computation_cost
        return out

    def with_axis(self, axis: str, value) -> "SimConfig":
        """Copy with one sweep axis overridden."""
        import copy

        out = copy.deepcopy(self)
        if axis == "V":
            out.v = float(value)
        elif axis == "D":
            out.prediction = PredictionSpec(
                mean_window=int(value),
                error_rate=self.prediction.error_rate,
                window_seed=self.prediction.window_seed,
            )
        elif axis == "error_rate":
            out.prediction = PredictionSpec(
                mean_window=self.prediction.mean_window,
                error_rate=float(value),
                window_seed=self.prediction.window_seed,
            )
        else:
            raise ConfigError([f"sweep.axis: unknown axis {axis!r}"])
        return out

    def with_seed(self, seed: int) -> "SimConfig":
        import copy

        out = copy.deepcopy(self)
        out.master_seed = int(seed)
        return out


def replication_seed(master_seed: int, replication: int) -> int:
    """Stable per-replication seed: blake2b over (master seed, index)."""
    digest = hashlib.blake2b(
        f"{master_seed}:{replication}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big") % (2**63)


def _get(d: dict, path: str, default=None):
    cur: Any = d
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return default
        cur = cur[part]
    return cur


def _check_num(problems, d, path, lo=None, hi=None, integer=False, default=None):
    val = _get(d, path, default)
    if val is None:
        problems.append(f"{path}: missing")
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        problems.append(f"{path}: expected a number, got {val!r}")
        return None
    if integer and int(val) != val:
        problems.append(f"{path}: expected an integer, got {val!r}")
        return None
    if lo is not None and val < lo:
        problems.append(f"{path}: must be >= {lo}, got {val!r}")
        return None
    if hi is not None and val > hi:
        problems.append(f"{path}: must be <= {hi}, got {val!r}")
        return None
    return int(val) if integer else float(val)


def from_dict(raw: dict) -> SimConfig:
    """Build and validate a SimConfig; every problem is reported at once."""
    problems: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError(["config root must be a mapping"])

    kind = _get(raw, "topology.kind", "fat_tree")
    topo_kwargs: dict[str, Any] = {"kind": kind}
    if kind in ("fat_tree", "f10"):
        k = _check_num(problems, raw, "topology.k", lo=2, integer=True, default=4)
        if k is not None:
            if k % 2 != 0:
                problems.append(f"topology.k: must be even, got {k}")
            else:
                topo_kwargs["k"] = k
    elif kind == "three_tier":
        for key, dflt in (("core", 2), ("agg", 4), ("edge_per_agg", 4), ("hosts_per_edge", 8)):
            v = _check_num(problems, raw, f"topology.{key}", lo=1, integer=True, default=dflt)
            if v is not None:
                topo_kwargs[key] = v
    elif kind == "jellyfish":
        for key, dflt, lo in (
            ("n_switches", 20, 3),
            ("ports", 6, 3),
            ("hosts_per_switch", 2, 1),
            ("seed", 1, 0),
        ):
            v = _check_num(problems, raw, f"topology.{key}", lo=lo, integer=True, default=dflt)
            if v is not None:
                topo_kwargs[key] = v
    else:
        problems.append(
            f"topology.kind: unknown kind {kind!r} "
            f"(expected fat_tree, three_tier, jellyfish, or f10)"
        )
    n_ctrl = _get(raw, "topology.n_controllers")
    if n_ctrl is not None:
        v = _check_num(problems, raw, "topology.n_controllers", lo=1, integer=True)
        if v is not None:
            topo_kwargs["n_controllers"] = v

    process = _get(raw, "arrivals.process", "poisson")
    if process not in ("poisson", "pareto", "empirical"):
        problems.append(f"arrivals.process: unknown process {process!r}")
        process = "poisson"
    mean_rate = _check_num(problems, raw, "arrivals.mean_rate", lo=0, default=5.88)
    slot_ms = _check_num(problems, raw, "arrivals.slot_ms", lo=1e-9, default=10.0)
    a_max = _check_num(problems, raw, "arrivals.a_max", lo=1, integer=True, default=1000)
    pareto_shape = _check_num(problems, raw, "arrivals.pareto_shape", lo=2.000001, default=2.5)
    empirical_file = _get(raw, "arrivals.empirical_file")
    if process == "empirical" and not empirical_file:
        problems.append("arrivals.empirical_file: required for the empirical process")

    hotspot = None
    if _get(raw, "hotspot") is not None:
        pod = _check_num(problems, raw, "hotspot.pod_index", lo=0, integer=True, default=0)
        rate = _check_num(problems, raw, "hotspot.rate", lo=1e-12, default=200.0)
        if pod is not None and rate is not None:
            hotspot = HotSpotSpec(pod_index=pod, rate=rate)

    d_mean = _check_num(problems, raw, "prediction.mean_window", lo=0, integer=True, default=0)
    err = _check_num(problems, raw, "prediction.error_rate", lo=0.0, hi=0.5, default=0.0)
    window_seed = _get(raw, "prediction.window_seed")
    if window_seed is not None:
        window_seed = _check_num(problems, raw, "prediction.window_seed", lo=0, integer=True)

    policy_name = _get(raw, "policy.name", "poscad")
    if policy_name not in POLICY_NAMES:
        problems.append(
            f"policy.name: unknown policy {policy_name!r} (expected one of {', '.join(POLICY_NAMES)})"
        )
    v_param = _check_num(problems, raw, "policy.V", lo=0.0, default=10.0)
    gamma = _check_num(problems, raw, "policy.gamma", lo=0.0, default=1.0)
    beta1 = _check_num(problems, raw, "policy.beta1", lo=1e-12, default=1.0)
    beta2 = _check_num(problems, raw, "policy.beta2", lo=1e-12, default=1.0)
    devolution = _get(raw, "policy.devolution", True)
    if not isinstance(devolution, bool):
        problems.append(f"policy.devolution: expected true/false, got {devolution!r}")
        devolution = True

    bc = _check_num(problems, raw, "capacities.controller", lo=1, integer=True, default=600)
    bs = _check_num(problems, raw, "capacities.switch", lo=0, integer=True, default=10)

    comp_cost = _get(raw, "computation_cost")
    if comp_cost is not None:
        comp_cost = _check_num(problems, raw, "computation_cost", lo=1e-12)

    horizon = _check_num(problems, raw, "run.horizon", lo=1, integer=True, default=100_000)
    warmup = _check_num(problems, raw, "run.warmup", lo=0, integer=True, default=10_000)
    seed = _check_num(problems, raw, "run.master_seed", lo=0, integer=True, default=1)
    if horizon is not None and warmup is not None and horizon <= warmup:
        problems.append(f"run.horizon: must exceed run.warmup ({horizon} <= {warmup})")

    sweep = None
    if _get(raw, "sweep") is not None:
        axis = _get(raw, "sweep.axis")
        if axis not in SWEEP_AXES:
            problems.append(f"sweep.axis: expected one of {SWEEP_AXES}, got {axis!r}")
        values = _get(raw, "sweep.values")
        if not isinstance(values, (list, tuple)) or not values:
            problems.append("sweep.values: expected a non-empty list")
            values = ()
        reps = _check_num(problems, raw, "sweep.replications", lo=1, integer=True, default=1)
        if axis in SWEEP_AXES and values and reps is not None:
            sweep = SweepSpec(axis=axis, values=tuple(values), replications=reps)

    if problems:
        raise ConfigError(problems)

    return SimConfig(
        topology=TopologySpec(**topo_kwargs),
        arrivals=ArrivalSpec(
            process=process,
            mean_rate=mean_rate,
            slot_ms=slot_ms,
            a_max=a_max,
            pareto_shape=pareto_shape,
            empirical_file=empirical_file,
        ),
        hotspot=hotspot,
        prediction=PredictionSpec(mean_window=d_mean, error_rate=err, window_seed=window_seed),
        policy_name=policy_name,
        v=v_param,
        gamma=gamma,
        beta1=beta1,
        beta2=beta2,
        devolution=devolution,
        controller_capacity=bc,
        switch_capacity=bs,
        computation_cost=comp_cost,
        horizon=horizon,
        warmup=warmup,
        master_seed=seed,
        sweep=sweep,
    )


def load(path: str) -> SimConfig:
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {path}"])
    except yaml.YAMLError as exc:
        raise ConfigError([f"config file is not valid YAML: {exc}"])
    if raw is None:
        raise ConfigError(["config file is empty"])
    return from_dict(raw)
