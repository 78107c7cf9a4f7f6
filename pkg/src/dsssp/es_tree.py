"""Even-Shiloach shortest-path trees to a depth cap, for weighted digraphs.

The exact baseline and the default restricted-SSSP implementation: estimates
never decrease, every finite estimate is witnessed by a parent edge, and
estimates past the cap are INF.  Weighted support uses the +1 increment loop
(one in-neighborhood rescan per estimate value plus rescans charged to
parent increments), which keeps the classic O(m*depth) work accounting
checkable via counters.
"""

from __future__ import annotations

import heapq

from .graphs import INF, ReverseView, UpdateEvent


class _Side:
    """One direction of the tree: monotone estimates plus parent edges."""

    def __init__(self, host, root: int, depth: int):
        self.host = host
        self.root = root
        self.depth = depth
        self.dist: dict[int, int] = {}
        self.parent_of: dict[int, int] = {}
        self.parent_eid: dict[int, int] = {}
        self.parent_w: dict[int, int] = {}
        self.children: dict[int, set[int]] = {}
        self.scans = 0
        self.scan_rounds: dict[int, int] = {}
        self.change_count = 0
        self._init_dijkstra()

    def _init_dijkstra(self):
        dist = self.dist
        dist[self.root] = 0
        heap = [(0, self.root)]
        best_edge: dict[int, tuple[int, int, int]] = {}
        while heap:
            d, u = heapq.heappop(heap)
            if d != dist.get(u, INF):
                continue
            for v, w, eid in self.host.out_edges(u):
                nd = d + w
                if nd <= self.depth and nd < dist.get(v, INF):
                    dist[v] = nd
                    best_edge[v] = (u, eid, w)
                    heapq.heappush(heap, (nd, v))
        for v, (u, eid, w) in best_edge.items():
            self.parent_of[v] = u
            self.parent_eid[v] = eid
            self.parent_w[v] = w
            self.children.setdefault(u, set()).add(v)

    def estimate(self, v: int) -> int:
        return self.dist.get(v, INF)

    def handle(self, tail: int, head: int, eid: int, new_weight):
        """React to deletion (new_weight None) or increase of (tail, head)."""
        if self.parent_eid.get(head) != eid:
            return
        if new_weight is not None and new_weight < INF:
            self.parent_w[head] = new_weight
            if self.dist.get(tail, INF) + new_weight <= self.dist.get(head, INF):
                return  # certificate survived the increase
        self._detach(head)
        self._repair({head})

    def _detach(self, v: int):
        p = self.parent_of.pop(v, None)
        self.parent_eid.pop(v, None)
        self.parent_w.pop(v, None)
        if p is not None:
            self.children.get(p, set()).discard(v)

    def _repair(self, dirty: set[int]):
        heap = [(self.dist[v], v) for v in dirty if v in self.dist]
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if v not in dirty or d != self.dist.get(v, INF):
                continue
            witness = None
            self.scan_rounds[v] = self.scan_rounds.get(v, 0) + 1
            for x, w, eid in self.host.in_edges(v):
                self.scans += 1
                dx = self.dist.get(x, INF)
                if dx < INF and dx + w <= d:
                    witness = (x, eid, w)
                    break
            if witness is not None:
                x, eid, w = witness
                self.parent_of[v] = x
                self.parent_eid[v] = eid
                self.parent_w[v] = w
                self.children.setdefault(x, set()).add(v)
                dirty.discard(v)
                continue
            # no witness at this value: raise the estimate by one
            self.change_count += 1
            nd = d + 1
            if nd > self.depth:
                del self.dist[v]
                dirty.discard(v)
                nd = INF
            else:
                self.dist[v] = nd
                heapq.heappush(heap, (nd, v))
            for c in list(self.children.get(v, ())):
                if nd + self.parent_w[c] <= self.dist.get(c, INF):
                    continue  # certificate still holds after the increase
                self._detach(c)
                if c in self.dist and c not in dirty:
                    dirty.add(c)
                    heapq.heappush(heap, (self.dist[c], c))


class EsTree:
    """Truncated shortest-path tree(s) from a root under deletions.

    directions: "out" (distances from root), "in" (to root), or "both".
    """

    def __init__(self, host, root: int, depth: int, directions: str = "out"):
        if depth < 1:
            raise ValueError("depth cap must be >= 1")
        if not host.contains(root):
            raise ValueError(f"root {root} not in host view")
        self.host = host
        self.root = root
        self.depth = depth
        self.directions = directions
        self.fwd = _Side(host, root, depth) if directions in ("out", "both") else None
        self.bwd = (
            _Side(ReverseView(host), root, depth) if directions in ("in", "both") else None
        )

    def dist_from(self, v: int) -> int:
        if self.fwd is None:
            raise ValueError("tree was not built in the out direction")
        return self.fwd.estimate(v)

    def dist_to(self, v: int) -> int:
        if self.bwd is None:
            raise ValueError("tree was not built in the in direction")
        return self.bwd.estimate(v)

    def handle_update(self, event: UpdateEvent, eid: int):
        """Repair after the host already applied `event` to edge `eid`."""
        if not (self.host.contains(event.u) and self.host.contains(event.v)):
            return
        if self.fwd is not None:
            self.fwd.handle(event.u, event.v, eid, event.new_weight)
        if self.bwd is not None:
            # reversed view: the edge runs v -> u there
            self.bwd.handle(event.v, event.u, eid, event.new_weight)

    @property
    def change_count(self) -> int:
        total = 0
        if self.fwd is not None:
            total += self.fwd.change_count
        if self.bwd is not None:
            total += self.bwd.change_count
        return total

    @property
    def scans(self) -> int:
        total = 0
        if self.fwd is not None:
            total += self.fwd.scans
        if self.bwd is not None:
            total += self.bwd.scans
        return total


def es_build(host, root: int, depth: int, directions: str = "out") -> EsTree:
    return EsTree(host, root, depth, directions)


class EsTreeRestricted:
    """Def-4.1-style adapter: exact estimates are 1- hence 2-approximate.

    Overestimates always; exact whenever the true distance is at most the
    depth cap.
    """

    alpha = 1

    def __init__(self, host, root: int, depth: int):
        self.host = host
        self.root = root
        self.depth = depth
        self.tree = EsTree(host, root, depth, directions="both")

    def dist_from(self, v: int) -> int:
        return self.tree.dist_from(v)

    def dist_to(self, v: int) -> int:
        return self.tree.dist_to(v)

    def handle_update(self, event: UpdateEvent, eid: int):
        self.tree.handle_update(event, eid)

    @property
    def change_count(self) -> int:
        return self.tree.change_count


class StaticRestricted:
    """One-shot exact restricted SSSP (two truncated Dijkstras).

    Valid wherever a restricted structure is built, queried within a single
    graph version, and discarded; never updated.
    """

    alpha = 1

    def __init__(self, host, root: int, depth: int):
        from .oracles import dijkstra, dijkstra_to

        self.host = host
        self.root = root
        self.depth = depth
        self._from = dijkstra(host, root, depth)
        self._to = dijkstra_to(host, root, depth)

    def dist_from(self, v: int) -> int:
        return self._from.get(v, INF)

    def dist_to(self, v: int) -> int:
        return self._to.get(v, INF)


def es_tree_factory(host, root: int, depth: int) -> EsTreeRestricted:
    """Default restricted-SSSP factory used by the order maintainer."""
    return EsTreeRestricted(host, root, depth)


def static_factory(host, root: int, depth: int) -> StaticRestricted:
    return StaticRestricted(host, root, depth)
