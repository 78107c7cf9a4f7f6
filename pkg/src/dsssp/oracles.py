"""Exact oracles and invariant auditors.

Everything here recomputes from scratch on a snapshot or live view and is
side-effect-free on the structures it inspects.  Estimate verdicts derive
solely from recomputed exact values.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .graphs import INF, ReverseView, sat_add

# APSP-style sweeps above this size sample vertex pairs instead.
APSP_EXACT_CAP = 512


def dijkstra(view, r: int, depth: int = INF) -> dict[int, int]:
    """Exact distances from r on any graph-like view, truncated at depth."""
    dist = {r: 0}
    heap = [(0, r)]
    while heap:
        d, u = heapq.heappop(heap)
        if d != dist.get(u, INF):
            continue
        for v, w, _ in view.out_edges(u):
            nd = d + w
            if nd <= depth and nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra_oracle(view, r: int) -> dict[int, int]:
    """Distance table from r; absent key means unreachable."""
    return dijkstra(view, r)


def dijkstra_to(view, r: int, depth: int = INF) -> dict[int, int]:
    """Exact distances to r (runs on the reversed view)."""
    return dijkstra(ReverseView(view), r, depth)


def dijkstra_between(view, s: int, t: int) -> tuple[int, list[int]]:
    """Distance and one shortest vertex path from s to t (INF, [] if none)."""
    dist = {s: 0}
    prev: dict[int, int] = {}
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d != dist.get(u, INF):
            continue
        if u == t:
            path = [t]
            while path[-1] != s:
                path.append(prev[path[-1]])
            path.reverse()
            return d, path
        for v, w, _ in view.out_edges(u):
            nd = d + w
            if nd < dist.get(v, INF):
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    return INF, []


def hop_bounded_oracle(view, s: int, h: int, arcs=None) -> dict[int, int]:
    """Exact h-hop-bounded distances via h rounds of relaxation.

    `arcs` optionally overrides the edge set: an iterable of (u, v, w).
    """
    if arcs is None:
        arcs = [
            (u, v, w)
            for u in view.vertex_ids()
            for v, w, _ in view.out_edges(u)
        ]
    dist = {s: 0}
    for _ in range(h):
        changed = False
        nxt = dict(dist)
        for u, v, w in arcs:
            du = dist.get(u, INF)
            if du >= INF:
                continue
            nd = du + w
            if nd < nxt.get(v, INF):
                nxt[v] = nd
                changed = True
        dist = nxt
        if not changed:
            break
    return dist


def weak_diameter(base_view, members) -> int:
    """Max pairwise distance among `members`, measured in the full view."""
    members = list(members)
    worst = 0
    for x in members:
        dist = dijkstra(base_view, x)
        for y in members:
            d = dist.get(y, INF)
            if d >= INF:
                return INF
            worst = max(worst, d)
    return worst


# -- estimate-contract checking ------------------------------------------


@dataclass
class OracleReport:
    stage: int
    vertex: int
    exact: int
    estimate: int
    verdict: str

    @property
    def ratio(self) -> float:
        if self.exact <= 0 or self.exact >= INF or self.estimate >= INF:
            return math.inf
        return self.estimate / self.exact


def check_estimate(stage, vertex, exact, estimate, *, lo_ok=None, hi_bound=None,
                   in_range=True) -> OracleReport:
    """Classify one (exact, estimate) pair.

    lower bound: estimate >= exact always; upper: estimate <= hi_bound when
    `in_range` (hi_bound is the contract's numeric ceiling for this pair).
    """
    if exact >= INF:
        verdict = "ok" if estimate >= INF else "lb_violation"
    elif estimate < exact:
        verdict = "lb_violation"
    elif not in_range or hi_bound is None:
        verdict = "oor"
    elif estimate > hi_bound:
        verdict = "ub_violation"
    else:
        verdict = "ok"
    return OracleReport(stage, vertex, exact, estimate, verdict)


# -- approximate-topological-order audit -----------------------------------


@dataclass
class AuditVerdict:
    name: str
    ok: bool
    detail: str = ""
    advisory: bool = False


def audit_ato(ato, *, sample_rng=None, check_diameter=True) -> list[AuditVerdict]:
    """Exact checks of the maintained order's contract.

    Verifies: partition of V, interval disjointness and nesting, forward
    consistency on the pruned graph, weak-diameter budget, center uniqueness
    and pruned-edge permanence.  The per-vertex separator-participation count
    is reported as advisory only.
    """
    order = ato.order
    g = ato.graph
    n = g.n
    out: list[AuditVerdict] = []

    node_ids = sorted(order.node_ids())
    seen: dict[int, int] = {}
    for nid in node_ids:
        for v in order.members(nid):
            if v in seen:
                out.append(AuditVerdict("partition", False, f"vertex {v} in two nodes"))
                break
            seen[v] = nid
    ok_cover = len(seen) == n
    if not any(v.name == "partition" for v in out):
        out.append(AuditVerdict("partition", ok_cover,
                                "" if ok_cover else f"covers {len(seen)}/{n}"))

    ok_iv, detail = True, ""
    intervals = []
    for nid in node_ids:
        s = order.start(nid)
        size = order.size(nid)
        if not (0 <= s and s + size <= n):
            ok_iv, detail = False, f"node {nid} interval [{s},{s + size}) out of range"
        intervals.append((s, s + size, nid))
    intervals.sort()
    for (a_lo, a_hi, a_id), (b_lo, b_hi, b_id) in zip(intervals, intervals[1:]):
        if b_lo < a_hi:
            ok_iv, detail = False, f"intervals of {a_id} and {b_id} overlap"
    out.append(AuditVerdict("interval_disjoint", ok_iv, detail))

    ok_nest, detail = True, ""
    for nid in node_ids:
        lo, hi = order.start(nid), order.start(nid) + order.size(nid)
        for p_lo, p_hi in order.ancestor_intervals(nid):
            if not (p_lo <= lo and hi <= p_hi):
                ok_nest, detail = False, f"node {nid} escapes ancestor interval"
    out.append(AuditVerdict("interval_nesting", ok_nest, detail))

    ok_fwd, detail = True, ""
    pruned = ato.pruned
    for u in pruned.vertex_ids():
        nu = order.node_of(u)
        for v, _, _ in pruned.out_edges(u):
            nv = order.node_of(v)
            if nu != nv and order.start(nu) >= order.start(nv):
                ok_fwd, detail = False, f"pruned edge ({u},{v}) goes backward"
    out.append(AuditVerdict("forward_consistency", ok_fwd, detail))

    if check_diameter:
        ok_diam, detail = True, ""
        budget = ato.diam_budget
        big = [nid for nid in node_ids if order.size(nid) > 1]
        if n > APSP_EXACT_CAP and sample_rng is not None and len(big) > 8:
            big = sample_rng.sample(big, 8)
        for nid in big:
            members = order.members(nid)
            d = weak_diameter(g, members)
            if d * n > budget * len(members):
                ok_diam = False
                detail = f"node {nid}: diam {d} > {budget}*{len(members)}/{n}"
                break
        out.append(AuditVerdict("weak_diameter", ok_diam, detail))

    ok_c, detail = True, ""
    for nid in node_ids:
        hit = [s for s in ato.center_vertices() if order.node_of(s) == nid]
        if len(hit) != 1:
            ok_c, detail = False, f"node {nid} has {len(hit)} centers"
    out.append(AuditVerdict("center_unique", ok_c, detail))

    ok_f = all(not pruned_has_edge(pruned, eid, g) for eid in ato.removed_edges)
    out.append(AuditVerdict("pruned_permanent", ok_f,
                            "" if ok_f else "removed separator edge visible again"))

    counts = ato.participation_counts
    mean = (sum(counts.values()) / len(counts)) if counts else 0.0
    alarm = 4 * max(1, math.ceil(math.log2(max(ato.depth, 2))))
    out.append(AuditVerdict("participation", mean <= alarm,
                            f"mean {mean:.2f} vs alarm {alarm}", advisory=True))
    return out


def pruned_has_edge(pruned, eid: int, g) -> bool:
    u, v = g.edge_endpoints(eid)
    return any(e == eid for _, _, e in pruned.out_edges(u))


def ato_passes(verdicts) -> bool:
    return all(v.ok for v in verdicts if not v.advisory)


# -- separator Monte-Carlo statistics ---------------------------------------


@dataclass
class EdgeCutStats:
    cut: int = 0
    conditioned: int = 0

    def frequency(self) -> float:
        return self.cut / self.conditioned if self.conditioned else 0.0


def separator_stats(view, root, d, confidence, trials, rng):
    """Empirical per-edge cut frequencies for the ball-growing separator.

    Returns (stats-by-eid, fail_count).  `conditioned` counts trials whose
    ball contained the edge tail, matching the conditional bound.
    """
    from .separator import out_separator

    stats: dict[int, EdgeCutStats] = {}
    edges = [(u, v, w, eid) for u in view.vertex_ids() for v, w, eid in view.out_edges(u)]
    for _, _, _, eid in edges:
        stats[eid] = EdgeCutStats()
    fails = 0
    for _ in range(trials):
        res = out_separator(root, view, d, confidence, rng)
        if res.failed:
            fails += 1
            continue
        cut = set(res.cut_eids)
        for u, _, _, eid in edges:
            if u in res.ball:
                st = stats[eid]
                st.conditioned += 1
                if eid in cut:
                    st.cut += 1
    return stats, fails


def binomial_sigma(p: float, trials: int) -> float:
    if trials <= 0:
        return 0.0
    return math.sqrt(max(p * (1.0 - p), 1e-12) / trials)
