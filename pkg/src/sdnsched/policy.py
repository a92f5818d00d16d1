"""Per-slot, per-switch scheduling decisions.

The drift-plus-penalty policy scores each option with two quantities:

    l   = beta2*Qp - beta1*Qs - V*gamma*P          (admit-more pressure)
    u_j = (beta1*Qs - Qc_j) + V*(gamma*P - M_j)    (gain of uploading to j)

If every u_j is negative the switch keeps requests local and admits the
whole window only when l > 0; otherwise it uploads to the controller with
the largest u_j (ties uniformly at random) and admits the whole window only
when l + u_j* > 0.  This maximizes  l*Y + (sum_j u_j X_j)*Y  over feasible
(X, Y) exactly.

Baselines (static, random, jsq) always upload and admit only the current
slot's untreated requests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PolicyParams:
    V: float = 10.0
    gamma: float = 1.0
    beta1: float = 1.0
    beta2: float = 1.0
    devolution: bool = True

    def validate(self) -> None:
        if self.V < 0:
            raise ValueError("V must be >= 0")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.beta1 <= 0 or self.beta2 <= 0:
            raise ValueError("beta1 and beta2 must be > 0")


POLICY_NAMES = ("poscad", "static", "random", "jsq")


def compute_l(params: PolicyParams, qp: int, qs: int, p: float) -> float:
    return params.beta2 * qp - params.beta1 * qs - params.V * params.gamma * p


def compute_u(params: PolicyParams, qs: int, qc: int, p: float, m: float) -> float:
    return (params.beta1 * qs - qc) + params.V * (params.gamma * p - m)


def _argmax_tie(scores: list[float], rng: np.random.Generator) -> int:
    best = max(scores)
    if scores.count(best) == 1:
        return scores.index(best)
    ties = [j for j, s in enumerate(scores) if s == best]
    return ties[int(rng.random() * len(ties))]


def poscad_decide(
    params: PolicyParams,
    q0: int,
    qp: int,
    qs: int,
    qc: list[int],
    p: float,
    m_row: list[float],
    rng: np.random.Generator,
) -> tuple[int | None, int]:
    """One switch's decision: (controller index or None for local, Y).

    With devolution disabled the local option is removed outright: the
    best-scoring controller is chosen even when every u_j is negative.
    """
    if q0 > qp:
        raise ValueError(f"q0={q0} exceeds qp={qp}")
    l = compute_l(params, qp, qs, p)
    u = [compute_u(params, qs, qc[j], p, m_row[j]) for j in range(len(qc))]
    if params.devolution and all(uj < 0 for uj in u):
        return None, (qp if l > 0 else q0)
    j_star = _argmax_tie(u, rng)
    return j_star, (qp if l + u[j_star] > 0 else q0)


def static_decide(m_row: list[float]) -> int:
    """Fixed choice: minimum communication cost, ties to the lowest id."""
    return int(np.argmin(m_row))


def random_decide(n_controllers: int, rng: np.random.Generator) -> int:
    return int(rng.integers(n_controllers))


def jsq_decide(qc: list[int], rng: np.random.Generator) -> int:
    """Controller with the shortest backlog, ties uniformly at random."""
    best = min(qc)
    if qc.count(best) == 1:
        return qc.index(best)
    ties = [j for j, v in enumerate(qc) if v == best]
    return ties[int(rng.random() * len(ties))]


def subproblem_objective(
    params: PolicyParams,
    choice: int | None,
    y: int,
    qp: int,
    qs: int,
    qc: list[int],
    p: float,
    m_row: list[float],
) -> float:
    """Objective value l*Y + u_choice*Y attained by a (choice, Y) pair."""
    l = compute_l(params, qp, qs, p)
    gain = 0.0 if choice is None else compute_u(params, qs, qc[choice], p, m_row[choice])
    return (l + gain) * y


def brute_force_best(
    params: PolicyParams,
    q0: int,
    qp: int,
    qs: int,
    qc: list[int],
    p: float,
    m_row: list[float],
    devolution: bool = True,
) -> float:
    """Exhaustive maximum of the per-switch objective over feasible
    (choice, Y); independent check for poscad_decide."""
    choices: list[int | None] = list(range(len(qc)))
    if devolution:
        choices.append(None)
    best = -np.inf
    for choice in choices:
        for y in range(q0, qp + 1):
            val = subproblem_objective(params, choice, y, qp, qs, qc, p, m_row)
            if val > best:
                best = val
    return best


class SlotPolicy:
    """Adapter from the per-switch decision functions to the engine.

    decide(i, q0, qp, qs, qc, rng) -> (controller index or None, Y).  The
    upload scores depend on the slot only through queue sizes, so the
    V*(gamma*P - M) and V*gamma*P parts are precomputed per switch.
    """

    def __init__(self, name: str, params: PolicyParams, m: np.ndarray, p: np.ndarray):
        if name not in POLICY_NAMES:
            raise ValueError(f"unknown policy {name!r}; pick one of {POLICY_NAMES}")
        self.name = name
        self.params = params
        self.m = m
        self.p = p
        self._static = [static_decide(list(m[i])) for i in range(m.shape[0])]
        self._u_const = (params.V * (params.gamma * p[:, None] - m)).tolist()
        self._l_const = (params.V * params.gamma * p).tolist()

    def decide(self, i: int, q0: int, qp: int, qs: int, qc: list[int], rng) -> tuple[int | None, int]:
        if self.name == "poscad":
            params = self.params
            uc = self._u_const[i]
            b1qs = params.beta1 * qs
            u = [b1qs - qc[j] + uc[j] for j in range(len(qc))]
            u_max = max(u)
            l = params.beta2 * qp - b1qs - self._l_const[i]
            if params.devolution and u_max < 0:
                return None, (qp if l > 0 else q0)
            if u.count(u_max) == 1:
                j_star = u.index(u_max)
            else:
                ties = [j for j, s in enumerate(u) if s == u_max]
                j_star = ties[int(rng.random() * len(ties))]
            return j_star, (qp if l + u_max > 0 else q0)
        if self.name == "static":
            return self._static[i], q0
        if self.name == "random":
            return random_decide(len(qc), rng), q0
        return jsq_decide(qc, rng), q0
