"""Data-center topology construction and hop-count communication costs.

Four topology families are supported: k-ary fat-tree, canonical three-tier,
jellyfish (random regular inter-switch graph), and the AB-rewired fat-tree
("f10" kind).  Switches and hosts are vertices of one undirected graph;
controllers are pinned to hosts.  For the deterministic families one
controller is deployed per pod (on the first host under the pod's first edge
switch) unless a smaller controller count is requested, in which case the
first pods are used.  Per-pair communication costs are shortest-path hop
counts from each switch to each controller host.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np


class TopologyError(ValueError):
    """Invalid construction parameters or infeasible controller placement."""


@dataclass
class Topology:
    kind: str
    switches: list[str]
    hosts: list[str]
    controllers: dict[str, str]  # controller id -> host id
    adjacency: dict[str, list[str]]
    pods: list[list[str]] = field(default_factory=list)  # switch ids per pod

    def edges(self) -> set[frozenset]:
        out = set()
        for u, nbrs in self.adjacency.items():
            for v in nbrs:
                out.add(frozenset((u, v)))
        return out

    def degree(self, node: str) -> int:
        return len(self.adjacency[node])

    def controller_hosts(self) -> list[str]:
        return [self.controllers[c] for c in sorted(self.controllers, key=_num)]

    def controller_ids(self) -> list[str]:
        return sorted(self.controllers, key=_num)

    def validate(self) -> None:
        if not _connected(self.adjacency):
            raise TopologyError("topology graph is not connected")
        hosts_used = list(self.controllers.values())
        if len(set(hosts_used)) != len(hosts_used):
            raise TopologyError("two controllers share one host")
        for c, h in self.controllers.items():
            if h not in set(self.hosts):
                raise TopologyError(f"controller {c} bound to unknown host {h}")


@dataclass
class CostMatrix:
    switch_ids: list[str]
    controller_ids: list[str]
    M: np.ndarray  # (n_switches, n_controllers) hop counts
    P: np.ndarray  # (n_switches,) unit computation costs


def _num(node_id: str) -> int:
    return int(node_id[1:])


def _add_edge(adj: dict[str, list[str]], u: str, v: str) -> None:
    if v not in adj[u]:
        adj[u].append(v)
        adj[v].append(u)


def _connected(adj: dict[str, list[str]]) -> bool:
    if not adj:
        return False
    seen = {next(iter(adj))}
    stack = list(seen)
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(adj)


def bfs_hops(adj: dict[str, list[str]], source: str) -> dict[str, int]:
    """Hop counts from source to every reachable node (plain BFS)."""
    dist = {source: 0}
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def _place_pod_controllers(
    pods: list[list[str]],
    edge_switches: dict[str, list[str]],
    hosts_of: dict[str, list[str]],
    n_controllers: int | None,
) -> dict[str, str]:
    """One controller per pod, on the first host under the pod's first edge switch.

    With an explicit n_controllers, only the first n pods receive one.
    """
    n = len(pods) if n_controllers is None else n_controllers
    if n < 1 or n > len(pods):
        raise TopologyError(
            f"n_controllers={n} must be between 1 and the pod count {len(pods)}"
        )
    controllers = {}
    for idx in range(n):
        pod = pods[idx]
        first_edge = next(s for s in pod if edge_switches.get(s))
        controllers[f"c{idx}"] = hosts_of[first_edge][0]
    return controllers


def build_fat_tree(k: int, n_controllers: int | None = None) -> Topology:
    """k-ary fat-tree: (k/2)^2 cores, k pods of k/2 agg + k/2 edge switches,
    k/2 hosts per edge switch."""
    if k < 2 or k % 2 != 0:
        raise TopologyError(f"fat-tree arity k must be a positive even integer, got {k}")
    half = k // 2
    n_core = half * half
    switches: list[str] = [f"s{i}" for i in range(n_core + k * k)]
    cores = switches[:n_core]
    adj: dict[str, list[str]] = {s: [] for s in switches}
    hosts: list[str] = []
    hosts_of: dict[str, list[str]] = {}
    edge_map: dict[str, list[str]] = {}
    pods: list[list[str]] = []
    h_idx = 0
    for p in range(k):
        base = n_core + p * k
        aggs = [switches[base + a] for a in range(half)]
        edges = [switches[base + half + e] for e in range(half)]
        pods.append(aggs + edges)
        for a, agg in enumerate(aggs):
            for e in edges:
                _add_edge(adj, agg, e)
            for c in range(half):
                _add_edge(adj, agg, cores[a * half + c])
        for e in edges:
            edge_map[e] = []
            hosts_of[e] = []
            for _ in range(half):
                h = f"h{h_idx}"
                h_idx += 1
                hosts.append(h)
                adj[h] = []
                _add_edge(adj, e, h)
                hosts_of[e].append(h)
                edge_map[e].append(h)
    controllers = _place_pod_controllers(pods, edge_map, hosts_of, n_controllers)
    topo = Topology("fat_tree", switches, hosts, controllers, adj, pods)
    topo.validate()
    return topo


def build_f10(k: int, n_controllers: int | None = None) -> Topology:
    """Fat-tree with two pod wiring types: odd pods connect aggregation
    switches to cores in a strided pattern instead of consecutive blocks.

    Vertex set, pod structure and degree multiset match build_fat_tree(k).
    """
    topo = build_fat_tree(k, n_controllers)
    half = k // 2
    n_core = half * half
    cores = topo.switches[:n_core]
    for p in range(1, k, 2):
        base = n_core + p * k
        aggs = [topo.switches[base + a] for a in range(half)]
        for a, agg in enumerate(aggs):
            for c in range(half):
                old = cores[a * half + c]
                topo.adjacency[agg].remove(old)
                topo.adjacency[old].remove(agg)
        for a, agg in enumerate(aggs):
            for c in range(half):
                _add_edge(topo.adjacency, agg, cores[c * half + a])
    topo.kind = "f10"
    topo.validate()
    return topo


def build_three_tier(
    core: int,
    agg_per_core_group: int,
    edge_per_agg: int,
    hosts_per_edge: int,
    n_controllers: int | None = None,
) -> Topology:
    """Canonical three-tier: full core-aggregation mesh, edge switches under
    one aggregation switch each.  A pod is one aggregation switch together
    with its edge switches."""
    sizes = (core, agg_per_core_group, edge_per_agg, hosts_per_edge)
    if any(v < 1 for v in sizes):
        raise TopologyError(f"all tier sizes must be >= 1, got {sizes}")
    n_agg = agg_per_core_group
    n_edge = n_agg * edge_per_agg
    switches = [f"s{i}" for i in range(core + n_agg + n_edge)]
    cores = switches[:core]
    aggs = switches[core : core + n_agg]
    edges = switches[core + n_agg :]
    adj: dict[str, list[str]] = {s: [] for s in switches}
    for agg in aggs:
        for c in cores:
            _add_edge(adj, agg, c)
    hosts: list[str] = []
    hosts_of: dict[str, list[str]] = {}
    edge_map: dict[str, list[str]] = {}
    pods: list[list[str]] = []
    h_idx = 0
    for a, agg in enumerate(aggs):
        my_edges = edges[a * edge_per_agg : (a + 1) * edge_per_agg]
        pods.append([agg] + my_edges)
        for e in my_edges:
            _add_edge(adj, agg, e)
            edge_map[e] = []
            hosts_of[e] = []
            for _ in range(hosts_per_edge):
                h = f"h{h_idx}"
                h_idx += 1
                hosts.append(h)
                adj[h] = []
                _add_edge(adj, e, h)
                hosts_of[e].append(h)
                edge_map[e].append(h)
    controllers = _place_pod_controllers(pods, edge_map, hosts_of, n_controllers)
    topo = Topology("three_tier", switches, hosts, controllers, adj, pods)
    topo.validate()
    return topo


_PLACEMENT_RETRIES = 1000


def build_jellyfish(
    n_switches: int,
    ports: int,
    hosts_per_switch: int,
    n_controllers: int,
    seed: int,
) -> Topology:
    """Random regular inter-switch graph; controllers live on hosts whose
    top-of-rack switches are distinct and pairwise non-adjacent.

    Deterministic under seed.  Fails after bounded retries when the
    non-adjacency placement is infeasible.
    """
    degree = ports - hosts_per_switch
    if degree < 2:
        raise TopologyError(
            f"need ports - hosts_per_switch >= 2 for the inter-switch graph, "
            f"got {ports} - {hosts_per_switch} = {degree}"
        )
    if (n_switches * degree) % 2 != 0:
        raise TopologyError(
            f"no {degree}-regular graph on {n_switches} switches (odd degree sum)"
        )
    if n_controllers < 1 or n_controllers > n_switches * hosts_per_switch:
        raise TopologyError(f"cannot place {n_controllers} controllers")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 5]))
    g = None
    for _ in range(100):
        cand = nx.random_regular_graph(degree, n_switches, seed=int(rng.integers(2**31)))
        if nx.is_connected(cand):
            g = cand
            break
    if g is None:
        raise TopologyError("could not draw a connected random regular graph")

    switches = [f"s{i}" for i in range(n_switches)]
    adj: dict[str, list[str]] = {s: [] for s in switches}
    for u, v in sorted(g.edges()):
        _add_edge(adj, f"s{u}", f"s{v}")
    hosts: list[str] = []
    tor_of: dict[str, str] = {}
    for i in range(n_switches):
        for _ in range(hosts_per_switch):
            h = f"h{len(hosts)}"
            hosts.append(h)
            adj[h] = []
            _add_edge(adj, f"s{i}", h)
            tor_of[h] = f"s{i}"

    neighbors = {s: set(adj[s]) for s in switches}
    for _ in range(_PLACEMENT_RETRIES):
        order = list(hosts)
        rng.shuffle(order)
        chosen: list[str] = []
        tors: list[str] = []
        for h in order:
            t = tor_of[h]
            # same ToR or an adjacent ToR conflicts with an already chosen host
            if any(t == u or t in neighbors[u] for u in tors):
                continue
            chosen.append(h)
            tors.append(t)
            if len(chosen) == n_controllers:
                break
        if len(chosen) == n_controllers:
            controllers = {f"c{i}": h for i, h in enumerate(chosen)}
            topo = Topology("jellyfish", switches, hosts, controllers, adj, [])
            topo.validate()
            return topo
    raise TopologyError(
        f"cannot place {n_controllers} controllers on pairwise non-adjacent "
        f"top-of-rack switches after {_PLACEMENT_RETRIES} retries"
    )


def comm_costs(topo: Topology, p_override: float | None = None) -> CostMatrix:
    """Hop-count matrix M (switch x controller) and unit computation costs P.

    P defaults to the topology-wide mean of M; an explicit override applies
    to every switch.
    """
    switch_ids = list(topo.switches)
    controller_ids = topo.controller_ids()
    m = np.zeros((len(switch_ids), len(controller_ids)), dtype=np.int64)
    for j, c in enumerate(controller_ids):
        dist = bfs_hops(topo.adjacency, topo.controllers[c])
        for i, s in enumerate(switch_ids):
            m[i, j] = dist[s]
    if np.any(m < 1):
        raise TopologyError("a controller host coincides with a switch")
    p_val = float(np.mean(m)) if p_override is None else float(p_override)
    p = np.full(len(switch_ids), p_val, dtype=np.float64)
    return CostMatrix(switch_ids, controller_ids, m, p)


def hot_pod_switches(topo: Topology, pod_index: int) -> list[str]:
    """Switches belonging to the given pod (deterministic kinds only)."""
    if not topo.pods:
        raise TopologyError(f"{topo.kind} topology has no pods")
    if pod_index < 0 or pod_index >= len(topo.pods):
        raise TopologyError(f"pod_index {pod_index} out of range")
    return list(topo.pods[pod_index])


def dump_text(topo: Topology, costs: CostMatrix) -> str:
    """Structured text rendering: nodes, edges, controller placement, and
    the M matrix as a CSV section."""
    lines = [f"kind: {topo.kind}"]
    lines.append(
        f"counts: switches={len(topo.switches)} hosts={len(topo.hosts)} "
        f"controllers={len(topo.controllers)} pods={len(topo.pods)}"
    )
    lines.append("[switches] " + " ".join(topo.switches))
    lines.append("[hosts] " + " ".join(topo.hosts))
    lines.append(
        "[controllers] "
        + " ".join(f"{c}->{topo.controllers[c]}" for c in topo.controller_ids())
    )
    for i, pod in enumerate(topo.pods):
        lines.append(f"[pod {i}] " + " ".join(pod))
    lines.append("[edges]")
    for e in sorted(topo.edges(), key=lambda fs: sorted(fs)):
        u, v = sorted(e)
        lines.append(f"{u} {v}")
    lines.append("[M matrix csv]")
    lines.append("switch," + ",".join(costs.controller_ids))
    for i, s in enumerate(costs.switch_ids):
        lines.append(s + "," + ",".join(str(int(x)) for x in costs.M[i]))
    lines.append("[P] " + repr(float(costs.P[0])))
    return "\n".join(lines) + "\n"
