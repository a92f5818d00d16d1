"""Slot-by-slot simulation loop.

Each slot runs seven ordered phases:

  1. reveal this slot's actual arrivals and reconcile each switch's d=0
     window layer (confirming or retiring earlier pre-admissions),
  2. snapshot all queue sizes,
  3. per-switch decisions from the snapshot only,
  4. admissions and enqueues (local queue or the chosen controller),
  5. FIFO service at every switch and controller,
  6. window slide with the fresh far-slot prediction,
  7. metrics capture and exact backlog-recursion checks.

A request can arrive, be admitted, and complete within one slot (response
time zero).  The loop is sequential and deterministic under the master
seed: per-switch decisions use per-switch tie-break streams and iterate in
switch-id order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import state as st
from .metrics import Aggregator, SlotRecord, slot_costs, weighted_backlog
from .policy import PolicyParams, SlotPolicy
from .traffic import TAG_TIES, TrafficModel, substream


class InvariantViolation(RuntimeError):
    """A queue-update identity or decision-feasibility check failed."""


@dataclass(frozen=True)
class SlotSnapshot:
    """Queue sizes at the start of a slot, after reveal; immutable."""

    t: int
    q0: tuple[int, ...]
    qp: tuple[int, ...]
    qs: tuple[int, ...]
    qc: tuple[int, ...]


class World:
    """Mutable simulation state wired to a policy and traffic model."""

    def __init__(
        self,
        m: np.ndarray,
        p: np.ndarray,
        policy,
        traffic: TrafficModel,
        switch_capacity: int,
        controller_capacity: int,
        beta1: float,
        beta2: float,
        gamma: float,
        master_seed: int,
        switch_capacity_fn=None,
        controller_capacity_fn=None,
    ):
        self.m = m
        self.p = p
        self.policy = policy
        self.traffic = traffic
        self.n_switches = m.shape[0]
        self.n_controllers = m.shape[1]
        self.bs = int(switch_capacity)
        self.bc = int(controller_capacity)
        self.bs_fn = switch_capacity_fn
        self.bc_fn = controller_capacity_fn
        self.beta1 = beta1
        self.beta2 = beta2
        self.gamma = gamma
        self._m_rows = m.tolist()
        self._p_list = [float(x) for x in p]
        self.switches = [
            st.SwitchState(
                i,
                traffic.window(i),
                [traffic.predicted(i, d) for d in range(traffic.window(i) + 1)],
            )
            for i in range(self.n_switches)
        ]
        self.controllers = [
            st.ControllerState(j, self.bc) for j in range(self.n_controllers)
        ]
        self.tie_rngs = [
            substream(master_seed, TAG_TIES, i) for i in range(self.n_switches)
        ]


def run_slot(world: World, t: int, probe=None) -> SlotRecord:
    switches = world.switches
    controllers = world.controllers
    completions = 0
    sum_response = 0
    phantoms = 0

    # phase 1: reveal arrivals, reconcile pre-admissions of this slot
    actual_rows = world.traffic._actual
    for i, sw in enumerate(switches):
        if sw.slot != t:
            raise InvariantViolation(f"switch {i} window at slot {sw.slot}, engine at {t}")
        res = sw.reveal_actual(actual_rows[i][t])
        if res is not None:
            completions += res.preserved_real
            phantoms += res.preserved_phantom

    # phase 2: snapshot
    q0s, qps, qss = [], [], []
    for sw in switches:
        q0s.append(sw.untreated[0])
        qps.append(sum(sw.untreated))
        qss.append(sw.local.size)
    qc_list = [c.queue.size for c in controllers]
    snap = SlotSnapshot(t, tuple(q0s), tuple(qps), tuple(qss), tuple(qc_list))

    # phase 3: decisions from the snapshot only
    decide = world.policy.decide
    tie_rngs = world.tie_rngs
    choices: list[int | None] = []
    ys: list[int] = []
    for i in range(world.n_switches):
        choice, y = decide(i, q0s[i], qps[i], qss[i], qc_list, tie_rngs[i])
        if not (q0s[i] <= y <= qps[i]):
            raise InvariantViolation(
                f"slot {t} switch {i}: Y={y} outside [{q0s[i]}, {qps[i]}]"
            )
        if choice is not None and not (0 <= choice < world.n_controllers):
            raise InvariantViolation(f"slot {t} switch {i}: bad controller {choice}")
        choices.append(choice)
        ys.append(y)
        if probe is not None:
            probe(t, i, snap, choice, y)

    # phases 4-6: admissions/enqueues, service, window slide.  Per-switch
    # work is fused into one pass; controller service still runs after every
    # enqueue, and window slides touch no queue, so the phase contract (all
    # decisions -> all enqueues -> service -> slide) is preserved.
    upload_in = [0] * world.n_controllers
    local_in = [0] * world.n_switches
    charge_f = 0.0
    charge_g = 0.0
    bs_used = [world.bs] * world.n_switches
    bc_used = [world.bc] * world.n_controllers
    m_rows = world._m_rows
    p_list = world._p_list
    predicted_rows = world.traffic._predicted
    far = [0] * world.n_switches
    for i, sw in enumerate(switches):
        y = ys[i]
        batches = sw.admit(y)
        choice = choices[i]
        if choice is None:
            queue = sw.local
            local_in[i] = y
            if y:
                charge_g += p_list[i] * y
        else:
            queue = controllers[choice].queue
            upload_in[choice] += y
            if y:
                charge_f += m_rows[i][choice] * y
        for b in batches:
            queue.push(b, t)
        if world.bs_fn is not None:
            bs_used[i] = int(world.bs_fn(i, t))
        res = sw.local.serve(bs_used[i], t)
        completions += res.completions
        sum_response += res.sum_response_slots
        phantoms += res.phantom_completions
        for origin, arrival, n in res.preserved:
            switches[origin].cohorts[arrival].preserved += n
        far[i] = predicted_rows[i][t + sw.window + 1]
        sw.slide(far[i])
    for j, ctrl in enumerate(controllers):
        if world.bc_fn is not None:
            bc_used[j] = int(world.bc_fn(j, t))
        res = ctrl.queue.serve(bc_used[j], t)
        completions += res.completions
        sum_response += res.sum_response_slots
        phantoms += res.phantom_completions
        for origin, arrival, n in res.preserved:
            switches[origin].cohorts[arrival].preserved += n

    # phase 7: metrics and exact update-recursion checks
    f, g = slot_costs(choices, ys, world.m, world.p, world.gamma)
    if f != charge_f or g != charge_g:
        raise InvariantViolation(
            f"slot {t}: decision costs ({f}, {g}) != per-admission charges "
            f"({charge_f}, {charge_g})"
        )
    qs_now_list, qp_now_list = [], []
    for i, sw in enumerate(switches):
        qs_i = sw.local.size
        qp_i = sum(sw.untreated)
        qs_now_list.append(qs_i)
        qp_now_list.append(qp_i)
        expect = qss[i] + local_in[i] - bs_used[i]
        if expect < 0:
            expect = 0
        if qs_i != expect:
            raise InvariantViolation(
                f"slot {t} switch {i}: local backlog {qs_i} != recursion {expect}"
            )
        if qp_i != qps[i] - ys[i] + far[i]:
            raise InvariantViolation(
                f"slot {t} switch {i}: window backlog {qp_i} != recursion "
                f"{qps[i] - ys[i] + far[i]}"
            )
    qc_now_list = []
    for j, ctrl in enumerate(controllers):
        qc_j = ctrl.queue.size
        qc_now_list.append(qc_j)
        expect = qc_list[j] + upload_in[j] - bc_used[j]
        if expect < 0:
            expect = 0
        if qc_j != expect:
            raise InvariantViolation(
                f"slot {t} controller {j}: backlog {qc_j} != recursion {expect}"
            )

    qc_now = tuple(qc_now_list)
    qs_now = tuple(qs_now_list)
    qp_now = tuple(qp_now_list)
    h = weighted_backlog(qc_now, qs_now, qp_now, world.beta1, world.beta2)
    return SlotRecord(
        t=t,
        f=f,
        g=g,
        h=h,
        per_controller_backlogs=qc_now,
        per_switch_backlogs=qs_now,
        completions=completions,
        sum_response_slots=sum_response,
        phantom_completions=phantoms,
    )


@dataclass
class RunResult:
    summary: object
    records: list[SlotRecord] | None = None


def build_world(config) -> World:
    """Assemble topology, costs, traffic, and policy from a SimConfig."""
    from .config import SimConfig  # local import to avoid a cycle

    assert isinstance(config, SimConfig)
    topo = config.build_topology()
    costs = config.build_costs(topo)
    hot_idxs: frozenset[int] = frozenset()
    if config.hotspot is not None:
        from .topology import hot_pod_switches

        hot_names = set(hot_pod_switches(topo, config.hotspot.pod_index))
        hot_idxs = frozenset(
            i for i, sid in enumerate(costs.switch_ids) if sid in hot_names
        )
    traffic = TrafficModel(
        n_switches=len(costs.switch_ids),
        spec=config.arrivals,
        prediction=config.prediction,
        horizon=config.horizon,
        master_seed=config.master_seed,
        hot_switch_idxs=hot_idxs,
        hot_rate=config.hotspot.rate if config.hotspot else None,
    )
    params = PolicyParams(
        V=config.v,
        gamma=config.gamma,
        beta1=config.beta1,
        beta2=config.beta2,
        devolution=config.devolution,
    )
    params.validate()
    policy = SlotPolicy(config.policy_name, params, costs.M, costs.P)
    return World(
        m=costs.M,
        p=costs.P,
        policy=policy,
        traffic=traffic,
        switch_capacity=config.switch_capacity,
        controller_capacity=config.controller_capacity,
        beta1=config.beta1,
        beta2=config.beta2,
        gamma=config.gamma,
        master_seed=config.master_seed,
    )


def run(config, probe=None, slot_callback=None, collect_records=False) -> RunResult:
    """Simulate config.horizon slots; averages cover post-warmup slots."""
    world = build_world(config)
    agg = Aggregator(
        warmup=config.warmup, slot_ms=config.arrivals.slot_ms, gamma=config.gamma
    )
    records: list[SlotRecord] | None = [] if collect_records else None
    for t in range(config.horizon):
        rec = run_slot(world, t, probe=probe)
        agg.add(rec)
        if slot_callback is not None:
            slot_callback(rec)
        if records is not None:
            records.append(rec)
    summary = agg.summary(config.echo(), world.traffic.truncations)
    return RunResult(summary=summary, records=records)
