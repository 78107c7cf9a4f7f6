"""SCC partition with nested interval labels, maintained under deletions.

Each strongly connected component owns a left-closed interval of [0, n)
whose length equals its size; when a component splits, the children receive
consecutive disjoint subintervals of the parent's interval, ordered by the
topological order of the condensation restricted to the parent.  Rerunning
the static computation after any update sequence yields the same partition.

Maintenance is by recomputation inside the affected component only; the
asymptotics of the incremental literature are deliberately not matched.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass


def strongly_connected_components(view, vertices=None) -> list[list[int]]:
    """Tarjan's algorithm, iterative, deterministic for a fixed view."""
    if vertices is None:
        vertices = list(view.vertex_ids())
    else:
        vertices = sorted(vertices)
    vset = set(vertices)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter([v for v, _, _ in view.out_edges(root) if v in vset]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if v not in index:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack.add(v)
                    work.append(
                        (v, iter([x for x, _, _ in view.out_edges(v) if x in vset]))
                    )
                    advanced = True
                    break
                if v in on_stack:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                pu = work[-1][0]
                low[pu] = min(low[pu], low[u])
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == u:
                        break
                comp.sort()
                comps.append(comp)
    return comps


def condensation_topo_order(view, comps) -> list[int]:
    """Indices of `comps` in a topological order of the condensation.

    Ties are broken by ascending minimum vertex id for determinism.
    """
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    succs: list[set[int]] = [set() for _ in comps]
    indeg = [0] * len(comps)
    for i, comp in enumerate(comps):
        for u in comp:
            for v, _, _ in view.out_edges(u):
                j = comp_of.get(v)
                if j is not None and j != i and j not in succs[i]:
                    succs[i].add(j)
                    indeg[j] += 1
    heap = [(comps[i][0], i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in sorted(succs[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (comps[j][0], j))
    if len(order) != len(comps):
        raise RuntimeError("condensation had a cycle; SCC computation is broken")
    return order


@dataclass(frozen=True)
class SplitEvent:
    """A node split: children carry fresh ids, packed inside the parent."""

    parent: int
    children: tuple[int, ...]


class SccOrder:
    """Maintained (partition, interval labels) of a decremental view."""

    def __init__(self, view):
        self.view = view
        self._members: dict[int, tuple[int, ...]] = {}
        self._start: dict[int, int] = {}
        self._node_of: dict[int, int] = {}
        # node id -> (parent id, start, size) at creation, for nesting audits
        self._lineage: dict[int, tuple[int | None, int, int]] = {}
        self._next_id = 0
        comps = strongly_connected_components(view)
        order = condensation_topo_order(view, comps)
        cursor = 0
        for idx in order:
            comp = comps[idx]
            nid = self._fresh(comp, cursor, None)
            cursor += len(comp)
        self._n = cursor

    def _fresh(self, members, start, parent) -> int:
        nid = self._next_id
        self._next_id += 1
        members = tuple(sorted(members))
        self._members[nid] = members
        self._start[nid] = start
        self._lineage[nid] = (parent, start, len(members))
        for v in members:
            self._node_of[v] = nid
        return nid

    # -- read API ---------------------------------------------------------

    def node_ids(self):
        return self._members.keys()

    def node_of(self, v: int) -> int:
        return self._node_of[v]

    def members(self, nid: int) -> tuple[int, ...]:
        return self._members[nid]

    def size(self, nid: int) -> int:
        return len(self._members[nid])

    def start(self, nid: int) -> int:
        return self._start[nid]

    def interval(self, nid: int) -> tuple[int, int]:
        s = self._start[nid]
        return s, s + len(self._members[nid])

    def ancestor_intervals(self, nid: int):
        parent = self._lineage[nid][0]
        while parent is not None:
            _, s, size = self._lineage[parent]
            yield s, s + size
            parent = self._lineage[parent][0]

    def singleton_count(self) -> int:
        return sum(1 for m in self._members.values() if len(m) == 1)

    # -- maintenance --------------------------------------------------------

    def split_on_deletions(self, deleted_pairs) -> list[SplitEvent]:
        """Re-split every node that lost an internal edge.

        `deleted_pairs` are (u, v) endpoints of edges just removed from the
        maintained view.  Nodes split into SCCs of the view restricted to the
        node, children packed left-to-right in condensation order.
        """
        affected = []
        seen = set()
        for u, v in deleted_pairs:
            nu = self._node_of[u]
            if nu == self._node_of[v] and nu not in seen:
                seen.add(nu)
                affected.append(nu)
        events: list[SplitEvent] = []
        for nid in affected:
            members = self._members[nid]
            if len(members) == 1:
                continue
            comps = strongly_connected_components(self.view, members)
            if len(comps) == 1:
                continue
            sub = Restriction(self.view, set(members))
            order = condensation_topo_order(sub, comps)
            cursor = self._start[nid]
            children = []
            for idx in order:
                comp = comps[idx]
                child = self._fresh(comp, cursor, nid)
                cursor += len(comp)
                children.append(child)
            del self._members[nid]
            del self._start[nid]
            events.append(SplitEvent(nid, tuple(children)))
        return events


class Restriction:
    """Minimal induced wrapper for condensation ordering inside one node."""

    def __init__(self, view, members):
        self.view = view
        self.members = members
        self.n = view.n

    def vertex_ids(self):
        return sorted(self.members)

    def contains(self, v):
        return v in self.members

    def out_edges(self, u):
        for v, w, eid in self.view.out_edges(u):
            if v in self.members:
                yield v, w, eid

    def in_edges(self, v):
        for u, w, eid in self.view.in_edges(v):
            if u in self.members:
                yield u, w, eid


def compute_gto(view) -> SccOrder:
    """Static generalized topological order of a view."""
    return SccOrder(view)
