"""Approximate topological order of a general decremental digraph.

Maintains a pruned copy of the graph whose strongly connected pieces all
have small weak diameter, together with nested interval labels from the
SCC order.  Diameter violations are detected by restricted-SSSP structures
rooted at one random center per piece and repaired by removing random ball
separators plus a partition pass, exactly in the maintenance loop's order:
cut, relabel, re-center, settle, re-check.

Center structures keep running on the vertex-induced subgraph they were
born on (never migrated or truncated), which is what keeps the update
sequence independent of the structure's own randomness under an oblivious
adversary.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .es_tree import es_tree_factory, static_factory
from .graphs import DELETE, INF, FilteredView, UpdateEvent, restrict
from .scc_order import SccOrder, SplitEvent
from .separator import PartitionFailed, out_separator, partition
from .rng import stream


class AtoFailed(Exception):
    pass


class AtoInitFailed(AtoFailed):
    pass


class AtoUpdateFailed(AtoFailed):
    pass


class _Center:
    __slots__ = ("vertex", "structure", "host_members", "last_change", "last_node")

    def __init__(self, vertex, structure, host_members):
        self.vertex = vertex
        self.structure = structure
        self.host_members = host_members
        self.last_change = -1
        self.last_node = None


class ApproxTopoOrder:
    """One maintained copy: pruned graph, interval labels, centers.

    depth is the distance scale delta; the weak-diameter budget of the
    produced order is 2 * alpha * depth with alpha = 2.
    """

    ALPHA = 2

    def __init__(self, graph, depth: int, fail_exp: float, seed: int,
                 sssp_factory=None, name="ato", partition_factory=None):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.graph = graph
        self.depth = depth
        self.fail_exp = fail_exp
        self.name = name
        self.rng = stream(seed, name, "separators")
        self.center_rng = stream(seed, name, "centers")
        self.sssp_factory = sssp_factory or es_tree_factory
        # partition runs one-shot at a fixed version; exact static structures
        # satisfy the 2-approximate contract it needs
        self.partition_factory = partition_factory or static_factory
        self.diam_budget = 2 * self.ALPHA * depth
        self.removed_edges: set[int] = set()
        self.pruned = FilteredView(graph, self.removed_edges)
        self.confidence = (fail_exp + 2) * math.log(max(graph.n, 2))
        self.participation_counts: dict[int, int] = {}
        self.split_log: list[SplitEvent] = []
        self._centers: dict[int, _Center] = {}
        self._stale_structures: list[_Center] = []
        self.counters = {"separator_calls": 0, "partition_calls": 0,
                         "resolve_iterations": 0, "splits": 0}
        self._init_prune()
        self.order = SccOrder(self.pruned)
        for nid in sorted(self.order.node_ids()):
            self._sample_center(nid)
        self._resolve()
        self.split_log = []

    # -- initialization ---------------------------------------------------

    def _init_prune(self):
        from .scc_order import strongly_connected_components

        g = self.graph
        n = g.n
        if n == 0:
            return
        top = math.ceil(math.log2(self.depth)) if self.depth > 1 else 0
        try:
            for i in range(top + 1):
                comps = strongly_connected_components(self.pruned)
                for comp in comps:
                    if len(comp) * (2 ** i) <= n:
                        cut = partition(
                            restrict(g, comp),
                            Fraction(self.depth, 2 ** i),
                            self.confidence,
                            self.rng,
                            self.partition_factory,
                        )
                        self.removed_edges |= cut
        except PartitionFailed as exc:
            raise AtoInitFailed(str(exc)) from exc

    def _sample_center(self, nid: int):
        members = self.order.members(nid)
        if len(members) == 1:
            self._centers[nid] = _Center(members[0], None, frozenset(members))
            return
        vertex = members[self.center_rng.randrange(len(members))]
        cap = max(1, _ceil_frac(self.depth * len(members), self.graph.n))
        host = restrict(self.graph, members)
        structure = self.sssp_factory(host, vertex, cap)
        self._centers[nid] = _Center(vertex, structure, frozenset(members))

    # -- public API ---------------------------------------------------------

    def handle_update(self, event: UpdateEvent) -> list[SplitEvent]:
        """Process one already-applied update to the base graph."""
        g = self.graph
        eid = g.edge_id(event.u, event.v)
        splits: list[SplitEvent] = []
        gone = event.kind == DELETE or (
            event.new_weight is not None and event.new_weight >= INF
        )
        if gone and eid not in self.removed_edges:
            if self.order.node_of(event.u) == self.order.node_of(event.v):
                splits.extend(self._apply_pruned_deletions([(event.u, event.v)]))
        for center in self._live_structures():
            if event.u in center.host_members and event.v in center.host_members:
                center.structure.handle_update(event, eid)
        splits.extend(self._resolve())
        self.split_log.extend(splits)
        return splits

    def center_vertices(self):
        return [c.vertex for c in self._centers.values()]

    def center_of(self, nid: int) -> int:
        return self._centers[nid].vertex

    def order_stretch(self, path) -> int:
        """Sum over path edges of the absolute interval-start difference."""
        self._check_path(path)
        order = self.order
        total = 0
        for u, v in zip(path, path[1:]):
            total += abs(order.start(order.node_of(u)) - order.start(order.node_of(v)))
        return total

    def backward_stretch(self, path) -> int:
        """Backward-gap magnitude: sum of max(0, start(u) - start(v))."""
        self._check_path(path)
        order = self.order
        total = 0
        for u, v in zip(path, path[1:]):
            total += max(
                0, order.start(order.node_of(u)) - order.start(order.node_of(v))
            )
        return total

    def to_json(self) -> str:
        order = self.order
        nodes = [
            {"id": nid, "start": order.start(nid), "members": list(order.members(nid))}
            for nid in sorted(order.node_ids())
        ]
        return json.dumps(
            {
                "version": self.graph.version,
                "nodes": nodes,
                "removed_edges": sorted(self.removed_edges),
            }
        )

    # -- maintenance ----------------------------------------------------------

    def _check_path(self, path):
        if not path:
            raise ValueError("empty path")
        for u, v in zip(path, path[1:]):
            try:
                self.graph.weight(u, v)
            except Exception as exc:
                raise BrokenPath(f"({u},{v}) is not a live edge") from exc

    def _live_structures(self):
        return [c for c in self._centers.values() if c.structure is not None]

    def _apply_pruned_deletions(self, pairs) -> list[SplitEvent]:
        events = self.order.split_on_deletions(pairs)
        self.counters["splits"] += len(events)
        for ev in events:
            parent_center = self._centers.pop(ev.parent)
            kept = None
            for child in ev.children:
                if parent_center.vertex in self.order.members(child):
                    kept = child
                    break
            for child in ev.children:
                if child == kept:
                    # structure keeps running on its frozen host
                    self._centers[child] = parent_center
                    if self.order.size(child) == 1 and parent_center.structure:
                        self._retire(child)
                else:
                    self._sample_center(child)
        return events

    def _retire(self, nid: int):
        center = self._centers[nid]
        if center.structure is not None:
            self._stale_structures.append(center)
        self._centers[nid] = _Center(center.vertex, None, frozenset([center.vertex]))

    def _find_violation(self):
        """Smallest (node, witness) whose center estimate exceeds the budget.

        Estimates are rechecked only when the node changed or its structure
        reported progress since the last look (per-center watermark)."""
        order = self.order
        n = self.graph.n
        for nid in sorted(order.node_ids()):
            center = self._centers[nid]
            if center.structure is None:
                continue
            size = order.size(nid)
            if size == 1:
                continue
            changed = (
                center.last_node != nid
                or center.structure.change_count != center.last_change
            )
            if not changed:
                continue
            threshold = self.depth * size  # compare est * n > depth * size
            members = order.members(nid)
            worst = None
            for t in members:
                if t == center.vertex:
                    continue
                if center.structure.dist_to(t) * n > threshold:
                    worst = (nid, t, "to_center")
                    break
                if center.structure.dist_from(t) * n > threshold:
                    worst = (nid, t, "from_center")
                    break
            if worst is not None:
                return worst
            center.last_node = nid
            center.last_change = center.structure.change_count
        return None

    def _resolve(self) -> list[SplitEvent]:
        """Cut separators until every center certifies its piece's diameter."""
        splits: list[SplitEvent] = []
        guard = 0
        while True:
            violation = self._find_violation()
            if violation is None:
                return splits
            guard += 1
            if guard > 4 * self.graph.n * max(1, self.graph.n):
                raise AtoUpdateFailed("resolve loop failed to settle")
            nid, witness, direction = violation
            self.counters["resolve_iterations"] += 1
            members = self.order.members(nid)
            size = len(members)
            n = self.graph.n
            ball_depth = Fraction(size * self.depth, 2 * n)
            piece = restrict(self.pruned, members)
            self.counters["separator_calls"] += 1
            if direction == "to_center":
                res = out_separator(
                    witness, piece, ball_depth, self.confidence, self.rng
                )
            else:
                from .graphs import ReverseView

                res = out_separator(
                    witness, ReverseView(piece), ball_depth, self.confidence, self.rng
                )
            if res.failed:
                raise AtoUpdateFailed(
                    f"separator draw failed at stage {self.graph.version}"
                )
            for v in res.ball:
                self.participation_counts[v] = self.participation_counts.get(v, 0) + 1
            self.counters["partition_calls"] += 1
            try:
                extra = partition(
                    restrict(self.pruned, res.ball),
                    Fraction(size * self.depth, 4 * n),
                    self.confidence,
                    self.rng,
                    self.partition_factory,
                )
            except PartitionFailed as exc:
                raise AtoUpdateFailed(str(exc)) from exc
            new_cut = (set(res.cut_eids) | extra) - self.removed_edges
            self.removed_edges |= new_cut
            pairs = [self.graph.edge_endpoints(e) for e in new_cut]
            splits.extend(self._apply_pruned_deletions(pairs))


class BrokenPath(Exception):
    pass


def _ceil_frac(a: int, b: int) -> int:
    return -(-a // b)


class TopoOrderBundle:
    """Independent copies sharing the base graph, distinct random streams."""

    def __init__(self, graph, depth: int, fail_exp: float, copies: int, seed: int,
                 sssp_factory=None, name="bundle"):
        if copies < 1:
            raise ValueError("need at least one copy")
        self.graph = graph
        self.depth = depth
        self.copies: list[ApproxTopoOrder] = []
        for i in range(copies):
            try:
                self.copies.append(
                    ApproxTopoOrder(
                        graph, depth, fail_exp, seed,
                        sssp_factory=sssp_factory, name=f"{name}/copy{i}",
                    )
                )
            except AtoFailed as exc:
                raise AtoFailed(f"copy {i}: {exc}") from exc

    def __len__(self):
        return len(self.copies)

    def handle_update(self, event: UpdateEvent) -> list[list[SplitEvent]]:
        out = []
        for i, copy in enumerate(self.copies):
            try:
                out.append(copy.handle_update(event))
            except AtoFailed as exc:
                raise AtoFailed(f"copy {i}: {exc}") from exc
        return out

    def min_order_stretch(self, path) -> int:
        return min(copy.order_stretch(path) for copy in self.copies)


def default_bundle_width(n: int, fail_exp: float) -> int:
    return max(1, math.ceil(40 * fail_exp * math.log2(max(n, 2))))


def bundle_maintain(graph, depth: int, fail_exp: float, copies: int | None,
                    seed: int, sssp_factory=None, name="bundle") -> TopoOrderBundle:
    if copies is None:
        copies = default_bundle_width(graph.n, fail_exp)
    return TopoOrderBundle(
        graph, depth, fail_exp, copies, seed, sssp_factory=sssp_factory, name=name
    )
