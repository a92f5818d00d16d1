"""Per-slot cost/backlog accounting and run-level summaries.

Costs per slot: uploading Y requests from switch i to controller j charges
M[i][j] per request (communication); processing locally charges P[i] per
request (computation, weighted by gamma in the reported total).  The
weighted backlog combines controller, switch, and window queues.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SLOT_CSV_HEADER = "t,f,g,total_cost,h,qc_var,completions,avg_resp_slots,phantoms"


def slot_costs(
    choices: list[int | None],
    y: list[int],
    m: np.ndarray,
    p: np.ndarray,
    gamma: float,
) -> tuple[float, float]:
    """Communication and computation cost of one slot's decisions.

    Each switch contributes to exactly one of the two sums (or neither when
    it admits nothing).
    """
    f = 0.0
    g = 0.0
    for i, choice in enumerate(choices):
        if y[i] == 0:
            continue
        if choice is None:
            g += float(p[i]) * y[i]
        else:
            f += float(m[i, choice]) * y[i]
    return f, g


def weighted_backlog(
    qc: list[int], qs: list[int], qp: list[int], beta1: float, beta2: float
) -> float:
    return float(sum(qc)) + beta1 * float(sum(qs)) + beta2 * float(sum(qp))


def lyapunov(
    qc: list[int], qs: list[int], qp: list[int], beta1: float, beta2: float
) -> float:
    """Quadratic congestion potential; diagnostic only."""
    sq = lambda xs: float(sum(x * x for x in xs))
    return 0.5 * (sq(qc) + beta1 * sq(qs) + beta2 * sq(qp))


@dataclass
class SlotRecord:
    t: int
    f: float
    g: float
    h: float
    per_controller_backlogs: tuple[int, ...]
    per_switch_backlogs: tuple[int, ...]
    completions: int
    sum_response_slots: int
    phantom_completions: int

    def qc_variance(self) -> float:
        qc = self.per_controller_backlogs
        n = len(qc)
        mean = sum(qc) / n
        return sum((x - mean) ** 2 for x in qc) / n

    def total_cost(self, gamma: float) -> float:
        return self.f + gamma * self.g

    def csv_row(self, gamma: float) -> str:
        avg_resp = (
            repr(self.sum_response_slots / self.completions) if self.completions else "nan"
        )
        return ",".join(
            (
                str(self.t),
                repr(self.f),
                repr(self.g),
                repr(self.total_cost(gamma)),
                repr(self.h),
                repr(self.qc_variance()),
                str(self.completions),
                avg_resp,
                str(self.phantom_completions),
            )
        )


@dataclass
class Aggregator:
    """Streaming accumulator over post-warmup slots."""

    warmup: int
    slot_ms: float
    gamma: float
    slots: int = 0
    sum_cost: float = 0.0
    sum_h: float = 0.0
    sum_qc_var: float = 0.0
    completions: int = 0
    sum_response_slots: int = 0
    phantom_completions: int = 0

    def add(self, rec: SlotRecord) -> None:
        if rec.t < self.warmup:
            return
        self.slots += 1
        self.sum_cost += rec.total_cost(self.gamma)
        self.sum_h += rec.h
        self.sum_qc_var += rec.qc_variance()
        self.completions += rec.completions
        self.sum_response_slots += rec.sum_response_slots
        self.phantom_completions += rec.phantom_completions

    def summary(self, config_echo: dict, truncations: int) -> "RunSummary":
        n = max(self.slots, 1)
        resp_slots = self.sum_response_slots / self.completions if self.completions else 0.0
        return RunSummary(
            avg_total_cost=self.sum_cost / n,
            avg_backlog=self.sum_h / n,
            backlog_variance_across_controllers=self.sum_qc_var / n,
            avg_response_slots=resp_slots,
            avg_response_ms=resp_slots * self.slot_ms,
            completions=self.completions,
            phantom_completions=self.phantom_completions,
            truncated_slots=truncations,
            slots_averaged=self.slots,
            config=config_echo,
        )


@dataclass
class RunSummary:
    avg_total_cost: float
    avg_backlog: float
    backlog_variance_across_controllers: float
    avg_response_slots: float
    avg_response_ms: float
    completions: int
    phantom_completions: int
    truncated_slots: int
    slots_averaged: int
    config: dict = field(default_factory=dict)

    def to_text(self) -> str:
        """Deterministic structured text (YAML-compatible key: value lines)."""
        lines = ["summary:"]
        for key in (
            "avg_total_cost",
            "avg_backlog",
            "backlog_variance_across_controllers",
            "avg_response_slots",
            "avg_response_ms",
        ):
            lines.append(f"  {key}: {getattr(self, key)!r}")
        for key in ("completions", "phantom_completions", "truncated_slots", "slots_averaged"):
            lines.append(f"  {key}: {getattr(self, key)}")
        lines.append("config:")
        lines.extend(_render_dict(self.config, indent=2))
        return "\n".join(lines) + "\n"


def _render_dict(d: dict, indent: int) -> list[str]:
    pad = " " * indent
    out = []
    for k in sorted(d):
        v = d[k]
        if isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out.extend(_render_dict(v, indent + 2))
        else:
            out.append(f"{pad}{k}: {v!r}")
    return out
