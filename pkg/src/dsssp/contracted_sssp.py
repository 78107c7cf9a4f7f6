"""Bucketed (1+eps)-approximate restricted SSSP over a contracted node graph.

The engine maintains one distance estimate per node of a refining partition
with interval labels.  In-neighbors of each node are bucketed by the gap
between their intervals; a node popped for repair at estimate value V only
scans buckets whose index j has step[j] dividing V, where step[j] =
ceil(2^j * eps / quality).  Larger gaps are scanned less often, which is
what trades the additive error for the work bound.

With a singleton partition and a topological order this is exactly the DAG
algorithm (quality = n / depth makes step[j] = ceil(2^j * eps * depth / n)).

Estimates here use the eps passed in; callers wanting a public (1+eps)
contract pass eps/2 (the composite layers do this).
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction

from .graphs import DELETE, INF, UpdateEvent
from .oracles import dijkstra_between
from .scc_order import SccOrder, strongly_connected_components


class SameNode(Exception):
    pass


class NoPath(Exception):
    pass


def interval_gap(start_x: int, size_x: int, start_y: int, size_y: int) -> int:
    """Distance between the closest endpoints of two disjoint intervals."""
    if start_x == start_y:
        raise SameNode("interval gap of a node with itself")
    if start_x < start_y:
        return start_y - (start_x + size_x - 1)
    return start_x - (start_y + size_y - 1)


class StaticOrder:
    """Singleton partition with fixed positions (the DAG configuration)."""

    def __init__(self, positions):
        self._pos = list(positions)
        self.n = len(self._pos)

    def node_ids(self):
        return range(self.n)

    def node_of(self, v: int) -> int:
        return v

    def members(self, nid: int):
        return (nid,)

    def size(self, nid: int) -> int:
        return 1

    def start(self, nid: int) -> int:
        return self._pos[nid]


def topo_positions(view) -> list[int]:
    """Topological positions of an acyclic view; raises on a cycle."""
    order = SccOrder(view)
    pos = [0] * view.n
    for nid in order.node_ids():
        members = order.members(nid)
        if len(members) != 1:
            raise ValueError("view is not acyclic")
        pos[members[0]] = order.start(nid)
    return pos


class _PairHeap:
    """Lazy min-heap over the surviving original edges of one node pair."""

    __slots__ = ("heap", "alive")

    def __init__(self):
        self.heap: list[tuple[int, int]] = []
        self.alive: dict[int, int] = {}

    def insert(self, eid: int, w: int):
        self.alive[eid] = w
        heapq.heappush(self.heap, (w, eid))

    def discard(self, eid: int):
        self.alive.pop(eid, None)

    def min(self):
        while self.heap:
            w, eid = self.heap[0]
            if self.alive.get(eid) == w:
                return w, eid
            heapq.heappop(self.heap)
        return None

    def __len__(self):
        return len(self.alive)


class ContractedSssp:
    """Deterministic restricted-SSSP engine over (graph, order) from a root."""

    def __init__(self, graph, order, root: int, depth: int, eps, quality,
                 diam_slack: int = 0, *, stride: bool = False):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.g = graph
        self.order = order
        self.root = root
        self.depth = depth
        self.eps = Fraction(eps)
        self.quality = Fraction(quality)
        if self.eps <= 0 or self.quality <= 0:
            raise ValueError("eps and quality must be positive")
        self.diam_slack = diam_slack
        self.stride = stride
        self.delta_max = _ceil(
            (1 + self.eps) * depth + self.eps * graph.n / self.quality
        )
        self.jmax = max(1, graph.n - 1).bit_length()
        self.steps = [
            max(1, _ceil(Fraction(2 ** j) * self.eps / self.quality))
            for j in range(self.jmax + 1)
        ]
        # engine node keys: scc node ids, with split inheritance aliased
        self._scc2key: dict[int, int] = {}
        self._key2scc: dict[int, int] = {}
        self.est: dict[int, int] = {}
        self.pair_heaps: dict[tuple[int, int], _PairHeap] = {}
        self.edge_pair: dict[int, tuple[int, int]] = {}
        self.in_pairs: dict[int, set[int]] = {}
        self.out_pairs: dict[int, set[int]] = {}
        self.buckets: dict[int, dict[int, set[int]]] = {}
        self.bucket_of: dict[tuple[int, int], int] = {}
        self.cert: dict[int, int] = {}
        self.tree_children: dict[int, set[int]] = {}
        self._dirty: set[int] = set()
        self._queue: list[tuple[int, int]] = []
        self.counters = {
            "scans": 0, "repairs": 0, "bucket_moves": 0, "splits": 0,
            "bucket_rescans": 0,
        }
        self.per_j_scans = [0] * (self.jmax + 1)
        self._ready = False
        self._build()
        self._ready = True

    # -- construction -------------------------------------------------------

    def _key(self, scc_nid: int) -> int:
        return self._scc2key[scc_nid]

    def _node_key_of_vertex(self, v: int) -> int:
        return self._scc2key[self.order.node_of(v)]

    def _start(self, key: int) -> int:
        return self.order.start(self._key2scc[key])

    def _size(self, key: int) -> int:
        return self.order.size(self._key2scc[key])

    def _chi(self, ka: int, kb: int) -> int:
        return interval_gap(
            self._start(ka), self._size(ka), self._start(kb), self._size(kb)
        )

    def _build(self):
        for nid in self.order.node_ids():
            self._scc2key[nid] = nid
            self._key2scc[nid] = nid
        for u, v, w, eid in self.g.alive_edges():
            ka = self._node_key_of_vertex(u)
            kb = self._node_key_of_vertex(v)
            self._pair_insert(ka, kb, eid, w)
        root_key = self._node_key_of_vertex(self.root)
        dist = {root_key: 0}
        parent_edge: dict[int, int] = {}
        heap = [(0, root_key)]
        while heap:
            d, k = heapq.heappop(heap)
            if d != dist.get(k, INF):
                continue
            for kb in self.out_pairs.get(k, ()):
                m = self.pair_heaps[(k, kb)].min()
                if m is None:
                    continue
                w, eid = m
                nd = d + w
                if nd <= self.delta_max and nd < dist.get(kb, INF):
                    dist[kb] = nd
                    parent_edge[kb] = eid
                    heapq.heappush(heap, (nd, kb))
        for key in list(self._key2scc):
            self.est[key] = dist.get(key, INF)
        for kb, eid in parent_edge.items():
            self._attach(kb, eid)
        for kb, sources in self.in_pairs.items():
            table = self.buckets.setdefault(kb, {})
            for ka in sources:
                j = self._chi(ka, kb).bit_length() - 1
                table.setdefault(j, set()).add(ka)
                self.bucket_of[(kb, ka)] = j

    def _pair_insert(self, ka: int, kb: int, eid: int, w: int):
        pair = (ka, kb)
        h = self.pair_heaps.get(pair)
        fresh = False
        if h is None:
            h = self.pair_heaps[pair] = _PairHeap()
            fresh = True
        h.insert(eid, w)
        self.edge_pair[eid] = pair
        if ka != kb:
            self.out_pairs.setdefault(ka, set()).add(kb)
            self.in_pairs.setdefault(kb, set()).add(ka)
            if fresh and self._ready:
                # pair appeared after init: bucket it exactly
                self._assign_bucket(kb, ka)

    def _assign_bucket(self, kb: int, ka: int):
        j = self._chi(ka, kb).bit_length() - 1
        old = self.bucket_of.get((kb, ka))
        if old == j:
            return
        if old is not None:
            self.buckets[kb][old].discard(ka)
            self.counters["bucket_moves"] += 1
        self.buckets.setdefault(kb, {}).setdefault(j, set()).add(ka)
        self.bucket_of[(kb, ka)] = j

    def _drop_pair(self, ka: int, kb: int):
        self.pair_heaps.pop((ka, kb), None)
        if ka != kb:
            self.out_pairs.get(ka, set()).discard(kb)
            self.in_pairs.get(kb, set()).discard(ka)
            j = self.bucket_of.pop((kb, ka), None)
            if j is not None:
                self.buckets.get(kb, {}).get(j, set()).discard(ka)

    def _attach(self, kb: int, eid: int):
        self.cert[kb] = eid
        tail = self.g.edge_endpoints(eid)[0]
        self.tree_children.setdefault(self._node_key_of_vertex(tail), set()).add(kb)

    def _detach(self, kb: int):
        eid = self.cert.pop(kb, None)
        if eid is None:
            return
        tail = self.g.edge_endpoints(eid)[0]
        self.tree_children.get(self._node_key_of_vertex(tail), set()).discard(kb)

    def _root_key(self) -> int:
        return self._node_key_of_vertex(self.root)

    def _mark_dirty(self, key: int):
        if key == self._root_key() or self.est.get(key, INF) >= INF:
            return
        self._detach(key)
        if key not in self._dirty:
            self._dirty.add(key)
        heapq.heappush(self._queue, (self.est[key], key))

    def _set_est(self, key: int, value: int):
        old = self.est[key]
        if value < old:
            raise AssertionError(f"estimate of node {key} would decrease")
        self.est[key] = value

    # -- updates --------------------------------------------------------------

    def handle_update(self, event: UpdateEvent, splits=()):
        """Apply one graph update plus this stage's refinement record.

        The edge is re-keyed before split processing so no repair step can
        witness through the stale entry.
        """
        eid = self.g.edge_id(event.u, event.v)
        pair = self.edge_pair.get(eid)
        if pair is not None:
            h = self.pair_heaps[pair]
            h.discard(eid)
            if event.kind != DELETE and event.new_weight < INF:
                h.insert(eid, event.new_weight)
            elif len(h) == 0:
                self._drop_pair(*pair)
            head_key = pair[1]
            if self.cert.get(head_key) == eid:
                self._mark_dirty(head_key)
        if splits:
            self._process_splits(splits)
        self._repair()

    def _process_splits(self, splits):
        self.counters["splits"] += len(splits)
        plans = []
        for ev in splits:
            kp = self._scc2key.pop(ev.parent)
            sizes = [(self.order.size(c), -c) for c in ev.children]
            inherit = ev.children[max(range(len(sizes)), key=lambda i: sizes[i])]
            parent_size = sum(self.order.size(c) for c in ev.children)
            self._scc2key[inherit] = kp
            self._key2scc[kp] = inherit
            for c in ev.children:
                if c == inherit:
                    continue
                self._scc2key[c] = c
                self._key2scc[c] = c
                self.est[c] = self.est[kp]
            plans.append((ev, kp, inherit, parent_size))
        for ev, kp, inherit, _ in plans:
            for c in ev.children:
                if c == inherit:
                    continue
                self._migrate_edges(c)
        for ev, kp, inherit, _ in plans:
            self._redistribute_tree(ev, kp, inherit)
        for ev, kp, inherit, parent_size in plans:
            for c in ev.children:
                key = kp if c == inherit else c
                level = _rescan_level(self.order.size(c), parent_size)
                self._rescan_buckets(key, level)

    def _migrate_edges(self, child: int):
        for v in self.order.members(child):
            for y, w, eid in self.g.out_edges(v):
                self._move_edge(eid, child, self._node_key_of_vertex(y), w)
            for x, w, eid in self.g.in_edges(v):
                self._move_edge(eid, self._node_key_of_vertex(x), child, w)

    def _move_edge(self, eid: int, ka: int, kb: int, w: int):
        old = self.edge_pair.get(eid)
        if old == (ka, kb):
            return
        if old is not None:
            h = self.pair_heaps.get(old)
            if h is not None:
                h.discard(eid)
                if len(h) == 0:
                    self._drop_pair(*old)
        self._pair_insert(ka, kb, eid, w)

    def _redistribute_tree(self, ev, kp: int, inherit: int):
        root_key = self._root_key()
        old_cert = self.cert.pop(kp, None)
        for z in self.tree_children.pop(kp, set()):
            eid = self.cert.get(z)
            if eid is None:
                continue
            tail = self.g.edge_endpoints(eid)[0]
            self.tree_children.setdefault(
                self._node_key_of_vertex(tail), set()
            ).add(z)
        keeper = None
        if old_cert is not None:
            head = self.g.edge_endpoints(old_cert)[1]
            keeper = self._node_key_of_vertex(head)
            self._attach(keeper, old_cert)
        for c in ev.children:
            key = kp if c == inherit else c
            if key == keeper or key == root_key:
                continue
            if self.est.get(key, INF) < INF:
                self._mark_dirty(key)

    def _rescan_buckets(self, key: int, level: int):
        table = self.buckets.get(key, {})
        for j in range(min(level + 1, self.jmax) + 1):
            for ka in list(table.get(j, ())):
                self.counters["bucket_rescans"] += 1
                self._assign_bucket(key, ka)
        for kb in list(self.out_pairs.get(key, ())):
            j = self.bucket_of.get((kb, key))
            if j is not None and j <= level:
                self.counters["bucket_rescans"] += 1
                self._assign_bucket(kb, key)

    # -- repair loop ------------------------------------------------------------

    def _eligible_level(self, value: int) -> int:
        for j in range(self.jmax, -1, -1):
            if value % self.steps[j] == 0:
                return j
        return 0

    def _repair(self):
        while self._queue:
            val, key = heapq.heappop(self._queue)
            if key not in self._dirty or val != self.est.get(key):
                continue
            if val >= INF:
                self._dirty.discard(key)
                continue
            level = self._eligible_level(val)
            table = self.buckets.get(key, {})
            witness = None
            for j in range(level + 1):
                self.per_j_scans[j] += len(table.get(j, ()))
                for ka in table.get(j, ()):
                    self.counters["scans"] += 1
                    ph = self.pair_heaps.get((ka, key))
                    m = ph.min() if ph is not None else None
                    if m is None:
                        continue
                    w, eid = m
                    ea = self.est.get(ka, INF)
                    if ea < INF and ea + w <= val:
                        witness = eid
                        break
                if witness is not None:
                    break
            if witness is not None:
                self._attach(key, witness)
                self._dirty.discard(key)
                continue
            self.counters["repairs"] += 1
            if val >= self.delta_max:
                new = INF
            elif self.stride:
                new = self._stride_target(key, val)
            else:
                new = val + 1
            self._set_est(key, new)
            if new >= INF:
                self._dirty.discard(key)
            else:
                heapq.heappush(self._queue, (new, key))
            for z in list(self.tree_children.get(key, ())):
                self._mark_dirty(z)

    def _stride_target(self, key: int, val: int) -> int:
        best = INF
        for ka in self.in_pairs.get(key, ()):
            ph = self.pair_heaps.get((ka, key))
            m = ph.min() if ph is not None else None
            if m is None:
                continue
            w, _ = m
            ea = self.est.get(ka, INF)
            if ea >= INF:
                continue
            base = max(val + 1, ea + w)
            step = self.steps[self.bucket_of[(key, ka)]]
            cand = _ceil_to_multiple(base, step)
            if cand < best:
                best = cand
        if best > self.delta_max:
            return INF
        return best

    # -- queries ----------------------------------------------------------------

    def node_estimate(self, key: int) -> int:
        return self.est.get(key, INF)

    def query(self, v: int) -> int:
        e = self.est.get(self._node_key_of_vertex(v), INF)
        if e >= INF:
            return INF
        return e + self.diam_slack

    def estimates_snapshot(self) -> dict[int, int]:
        return {v: self.query(v) for v in self.g.vertex_ids()}

    def path(self, v: int):
        """Node-level certificate chain and a stitched vertex path to v."""
        key = self._node_key_of_vertex(v)
        if self.est.get(key, INF) >= INF:
            raise NoPath(f"vertex {v} currently unreachable")
        root_key = self._root_key()
        chain: list[int] = []
        seen = set()
        while key != root_key:
            if key in seen:
                raise AssertionError("certificate chain has a cycle")
            seen.add(key)
            eid = self.cert.get(key)
            if eid is None:
                raise NoPath(f"no settled certificate for vertex {v}")
            chain.append(eid)
            key = self._node_key_of_vertex(self.g.edge_endpoints(eid)[0])
        chain.reverse()
        vertex_path = [self.root]
        for eid in chain:
            a, b = self.g.edge_endpoints(eid)
            if vertex_path[-1] != a:
                _, inner = dijkstra_between(self.g, vertex_path[-1], a)
                if not inner:
                    raise NoPath("intra-node connection vanished mid-walk")
                vertex_path.extend(inner[1:])
            vertex_path.append(b)
        if vertex_path[-1] != v:
            _, inner = dijkstra_between(self.g, vertex_path[-1], v)
            if not inner:
                raise NoPath("intra-node connection vanished mid-walk")
            vertex_path.extend(inner[1:])
        node_path = [self._node_key_of_vertex(self.root)]
        for eid in chain:
            node_path.append(self._node_key_of_vertex(self.g.edge_endpoints(eid)[1]))
        return node_path, vertex_path

    # -- audits -------------------------------------------------------------------

    def audit_buckets(self) -> list[str]:
        """Claim-style slack check: members sit in their gap's bucket or one
        below; returns human-readable violations (empty when clean)."""
        bad = []
        for kb, sources in self.in_pairs.items():
            for ka in sources:
                if len(self.pair_heaps.get((ka, kb), ())) == 0:
                    continue
                j_true = self._chi(ka, kb).bit_length() - 1
                j_cur = self.bucket_of.get((kb, ka))
                if j_cur is None or j_cur not in (j_true, j_true - 1):
                    bad.append(
                        f"pair ({ka}->{kb}): gap bucket {j_true}, stored {j_cur}"
                    )
        return bad

    def check_scan_budget(self, slack: int = 64) -> list[str]:
        """Generous per-bucket-index charging alarm, never a hard failure."""
        alarms = []
        q_over_eps = float(self.quality) / float(self.eps)
        extra = self.g.n * (self.jmax + 1) + self.counters["bucket_rescans"]
        for j, count in enumerate(self.per_j_scans):
            budget = slack * (2 ** (j + 2)) * (self.delta_max * q_over_eps / 2 ** j + 1)
            if count > budget + slack * extra:
                alarms.append(f"bucket index {j}: {count} scans > budget {budget:.0f}")
        return alarms


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _ceil_to_multiple(x: int, step: int) -> int:
    return -(-x // step) * step


def _rescan_level(child_size: int, parent_size: int) -> int:
    """Largest j with a multiple of 2^j inside [child_size, parent_size - 1]."""
    hi = parent_size - 1
    best = 0
    j = 1
    while 2 ** j <= hi:
        if (hi // 2 ** j) * 2 ** j >= child_size:
            best = j
        j += 1
    return best


def dag_engine(graph, root: int, depth: int, eps, *, stride: bool = False,
               positions=None) -> ContractedSssp:
    """The DAG configuration: singleton partition, quality n/depth, no slack."""
    if positions is None:
        positions = topo_positions(graph)
    order = StaticOrder(positions)
    quality = Fraction(max(graph.n, 1), depth)
    return ContractedSssp(
        graph, order, root, depth, eps, quality, diam_slack=0, stride=stride
    )
