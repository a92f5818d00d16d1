#!/usr/bin/env python3
"""Explore desk-scale scenario constants for the acceptance families.

Prints the family metrics for candidate hot-spot rates and seeds so the
frozen acceptance configuration can be chosen with real margins.
"""

import argparse
import time

from sdnsched.config import from_dict
from sdnsched import engine


def base_raw(hot_rate, horizon, warmup, seed):
    return {
        "topology": {"kind": "fat_tree", "k": 4, "n_controllers": 2},
        "arrivals": {"process": "poisson", "mean_rate": 5.88},
        "hotspot": {"pod_index": 0, "rate": hot_rate},
        "prediction": {"mean_window": 0, "error_rate": 0.0},
        "policy": {"name": "poscad", "V": 10.0, "devolution": True},
        "capacities": {"controller": 600, "switch": 50},
        "run": {"horizon": horizon, "warmup": warmup, "master_seed": seed},
    }


def run_one(raw, **mods):
    import copy

    r = copy.deepcopy(raw)
    for key, val in mods.items():
        r[key].update(val) if isinstance(val, dict) else r.update({key: val})
    t0 = time.time()
    res = engine.run(from_dict(r))
    s = res.summary
    return s, time.time() - t0


def family_cost_backlog(raw):
    print("== total cost / backlog vs V (devolution on) ==")
    rows = {}
    for v in (1, 10, 100, 1000, 10000):
        s, dt = run_one(raw, policy={"name": "poscad", "V": float(v), "devolution": True})
        rows[v] = s
        print(
            f"V={v:<6} cost={s.avg_total_cost:10.2f} h={s.avg_backlog:10.1f} "
            f"resp={s.avg_response_ms:8.3f}ms qcvar={s.backlog_variance_across_controllers:12.1f} [{dt:.1f}s]"
        )
    costs = [rows[v].avg_total_cost for v in (1, 10, 100, 1000, 10000)]
    mono = all(costs[i + 1] <= costs[i] * 1.01 for i in range(4))
    ratio = rows[10000].avg_backlog / rows[1].avg_backlog
    print(f"cost non-increasing(1%): {mono}; backlog ratio V=1e4/V=1: {ratio:.2f} (need >=3)")

    print("== devolution off: poscad V=1e4 vs static ==")
    s_p, _ = run_one(raw, policy={"name": "poscad", "V": 10000.0, "devolution": False})
    s_s, _ = run_one(raw, policy={"name": "static", "V": 10000.0, "devolution": False})
    gap = s_p.avg_total_cost / s_s.avg_total_cost - 1
    print(
        f"poscad={s_p.avg_total_cost:.2f} static={s_s.avg_total_cost:.2f} gap={gap*100:.2f}% (need <=15%)"
    )
    return mono, ratio, gap


def family_variance(raw):
    print("== qc variance vs V (devolution on) + static ==")
    from sdnsched.config import replication_seed

    means = {}
    for v in (1, 100, 10000):
        vals = []
        for rep in range(3):
            seed = replication_seed(raw["run"]["master_seed"], rep)
            s, _ = run_one(
                raw,
                policy={"name": "poscad", "V": float(v), "devolution": True},
                run={**raw["run"], "master_seed": seed},
            )
            vals.append(s.backlog_variance_across_controllers)
        means[v] = sum(vals) / 3
        print(f"V={v:<6} qc_var mean = {means[v]:.1f}")
    stat = []
    for rep in range(3):
        seed = replication_seed(raw["run"]["master_seed"], rep)
        s, _ = run_one(
            raw,
            policy={"name": "static", "V": 1.0, "devolution": False},
            run={**raw["run"], "master_seed": seed},
        )
        stat.append(s.backlog_variance_across_controllers)
    stat_mean = sum(stat) / 3
    print(f"static qc_var mean = {stat_mean:.1f}")
    ok = means[1] <= means[100] <= means[10000] and stat_mean > means[10000]
    print(f"ordering holds: {ok}")
    return ok


def family_prediction(raw, v_for_d):
    print(f"== response vs D at V={v_for_d}, r=0 ==")
    rows = {}
    for d in (0, 2, 4, 6, 10):
        s, dt = run_one(
            raw,
            policy={"name": "poscad", "V": float(v_for_d), "devolution": True},
            prediction={"mean_window": d, "error_rate": 0.0},
        )
        rows[d] = s
        print(
            f"D={d:<3} resp={s.avg_response_ms:8.4f}ms cost={s.avg_total_cost:10.2f} [{dt:.1f}s]"
        )
    resp = [rows[d].avg_response_ms for d in (0, 2, 4, 6, 10)]
    mono = all(resp[i + 1] <= resp[i] * 1.05 for i in range(4))
    ratio6 = rows[6].avg_response_ms / rows[0].avg_response_ms
    cost_gap = abs(rows[2].avg_total_cost / rows[0].avg_total_cost - 1)
    print(
        f"non-increasing(5%): {mono}; resp(6)/resp(0) = {ratio6*100:.1f}% (need <15%); "
        f"cost(D2)/cost(D0) gap = {cost_gap*100:.2f}% (need <=2%)"
    )
    return mono, ratio6, cost_gap


def family_errors(raw, reps=3):
    print(f"== response vs r at V=10, D=2 (means over {reps} replications) ==")
    from sdnsched.config import replication_seed

    def mean_point(d, r):
        resp, cost = 0.0, 0.0
        for rep in range(reps):
            seed = replication_seed(raw["run"]["master_seed"], rep)
            s, _ = run_one(
                raw,
                policy={"name": "poscad", "V": 10.0, "devolution": True},
                prediction={"mean_window": d, "error_rate": r},
                run={**raw["run"], "master_seed": seed},
            )
            resp += s.avg_response_ms
            cost += s.avg_total_cost
        return resp / reps, cost / reps

    rows = {}
    for r in (0.0, 0.1, 0.3, 0.5):
        rows[r] = mean_point(2, r)
        print(f"r={r:<4} resp={rows[r][0]:9.5f}ms cost={rows[r][1]:10.2f}")
    resp6, _ = mean_point(6, 0.1)
    print(f"D=6,r=0.1 resp={resp6:.5f}ms")
    resp = [rows[r][0] for r in (0.0, 0.1, 0.3, 0.5)]
    mono = all(resp[i + 1] >= resp[i] for i in range(3))
    ratio = resp6 / rows[0.1][0]
    cost_gap = rows[0.5][1] / rows[0.0][1] - 1
    print(
        f"non-decreasing: {mono}; resp(D6)/resp(D2)@r=0.1 = {ratio*100:.1f}% (need <=50%); "
        f"cost(r=.5)/cost(r=0) = +{cost_gap*100:.2f}% (need <=10%)"
    )
    return mono, ratio, cost_gap


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--hot-rate", type=float, default=175.0)
    ap.add_argument("--horizon", type=int, default=30_000)
    ap.add_argument("--warmup", type=int, default=3_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--v-for-d", type=float, default=10.0)
    ap.add_argument("--switch-cap", type=int, default=50)
    ap.add_argument(
        "--families", default="cost,var,pred,err", help="comma list: cost,var,pred,err"
    )
    args = ap.parse_args()
    raw = base_raw(args.hot_rate, args.horizon, args.warmup, args.seed)
    raw["capacities"]["switch"] = args.switch_cap
    fams = args.families.split(",")
    print(f"--- hot_rate={args.hot_rate} horizon={args.horizon} seed={args.seed} ---")
    if "cost" in fams:
        family_cost_backlog(raw)
    if "var" in fams:
        family_variance(raw)
    if "pred" in fams:
        family_prediction(raw, args.v_for_d)
    if "err" in fams:
        family_errors(raw)


if __name__ == "__main__":
    main()
