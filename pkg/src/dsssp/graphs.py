"""Versioned decremental weighted digraph with stable edge identities.

All weights and distances are integers; `INF` is the reserved sentinel for
"unreachable / effectively deleted".  Deleted edges are tombstoned in the
adjacency arrays so separator statistics can keep indexing events by the
original edge id.
"""

from __future__ import annotations

from dataclasses import dataclass

INF = 2 ** 62


def sat_add(a: int, b: int) -> int:
    """Saturating addition over distances."""
    if a >= INF or b >= INF:
        return INF
    return a + b


class GraphError(Exception):
    pass


class DuplicateEdge(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class WeightOutOfRange(GraphError):
    pass


class MissingEdge(GraphError):
    pass


class NonMonotoneWeight(GraphError):
    pass


DELETE = "delete"
INCREASE = "increase"


@dataclass(frozen=True)
class UpdateEvent:
    kind: str
    u: int
    v: int
    new_weight: int | None = None

    def __post_init__(self):
        if self.kind not in (DELETE, INCREASE):
            raise GraphError(f"unknown update kind {self.kind!r}")
        if self.kind == INCREASE and self.new_weight is None:
            raise GraphError("weight increase needs new_weight")


class DecrementalGraph:
    """Weighted digraph under edge deletions and weight increases.

    Single writer; read-only snapshots may be taken at any version and
    shared freely.
    """

    def __init__(self, n: int, edge_list):
        if n < 0:
            raise VertexOutOfRange(f"negative vertex count {n}")
        self.n = n
        self.version = 0
        self.update_log: list[UpdateEvent] = []
        self._tail: list[int] = []
        self._head: list[int] = []
        self._weight: list[int] = []
        self._alive: list[bool] = []
        self._out: list[list[int]] = [[] for _ in range(n)]
        self._in: list[list[int]] = [[] for _ in range(n)]
        self._eid_of: dict[tuple[int, int], int] = {}
        for u, v, w in edge_list:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u},{v}) outside [0,{n})")
            if u == v:
                raise GraphError(f"self-loop at {u} rejected")
            if w < 1:
                raise WeightOutOfRange(f"weight {w} below 1 on ({u},{v})")
            if (u, v) in self._eid_of:
                raise DuplicateEdge(f"duplicate edge ({u},{v})")
            eid = len(self._weight)
            self._eid_of[(u, v)] = eid
            self._tail.append(u)
            self._head.append(v)
            self._weight.append(w)
            self._alive.append(True)
            self._out[u].append(eid)
            self._in[v].append(eid)
        self.m0 = len(self._weight)
        self.initial_edges = [
            (self._tail[e], self._head[e], self._weight[e]) for e in range(self.m0)
        ]
        # weights live in [1, W]; W doubles as the aspect-ratio bound
        self.aspect_ratio = max(self._weight, default=1)

    # -- update path ----------------------------------------------------

    def apply(self, event: UpdateEvent) -> None:
        eid = self._eid_of.get((event.u, event.v))
        if eid is None or not self._alive[eid]:
            raise MissingEdge(f"edge ({event.u},{event.v}) not present")
        if event.kind == DELETE:
            self._alive[eid] = False
        else:
            if event.new_weight <= self._weight[eid]:
                raise NonMonotoneWeight(
                    f"({event.u},{event.v}): {self._weight[eid]} -> {event.new_weight}"
                )
            self._weight[eid] = event.new_weight
        self.version += 1
        self.update_log.append(event)

    # -- read protocol (shared by all views) ----------------------------

    def vertex_ids(self):
        return range(self.n)

    def contains(self, v: int) -> bool:
        return 0 <= v < self.n

    def out_edges(self, u: int):
        for eid in self._out[u]:
            if self._alive[eid] and self._weight[eid] < INF:
                yield self._head[eid], self._weight[eid], eid

    def in_edges(self, v: int):
        for eid in self._in[v]:
            if self._alive[eid] and self._weight[eid] < INF:
                yield self._tail[eid], self._weight[eid], eid

    # -- lookups ---------------------------------------------------------

    def edge_id(self, u: int, v: int) -> int | None:
        return self._eid_of.get((u, v))

    def edge_endpoints(self, eid: int) -> tuple[int, int]:
        return self._tail[eid], self._head[eid]

    def edge_alive(self, eid: int) -> bool:
        return self._alive[eid] and self._weight[eid] < INF

    def weight(self, u: int, v: int) -> int:
        eid = self._eid_of.get((u, v))
        if eid is None or not self._alive[eid]:
            raise MissingEdge(f"edge ({u},{v}) not present")
        return self._weight[eid]

    def edge_weight(self, eid: int) -> int:
        return self._weight[eid]

    @property
    def m(self) -> int:
        return sum(1 for a in self._alive if a)

    def alive_edges(self):
        for eid, ok in enumerate(self._alive):
            if ok and self._weight[eid] < INF:
                yield self._tail[eid], self._head[eid], self._weight[eid], eid

    # -- views and snapshots ----------------------------------------------

    def induced(self, members) -> "Restrict":
        return Restrict(self, members)

    def reversed_view(self) -> "ReverseView":
        return ReverseView(self)

    def snapshot(self) -> "GraphSnapshot":
        return GraphSnapshot(self)


class Restrict:
    """Live view of `base` induced on a frozen vertex set."""

    def __init__(self, base, members):
        self.base = base
        self.members = frozenset(members)
        self.n = base.n

    def vertex_ids(self):
        return sorted(self.members)

    def contains(self, v: int) -> bool:
        return v in self.members and self.base.contains(v)

    def out_edges(self, u: int):
        for v, w, eid in self.base.out_edges(u):
            if v in self.members:
                yield v, w, eid

    def in_edges(self, v: int):
        for u, w, eid in self.base.in_edges(v):
            if u in self.members:
                yield u, w, eid


class ReverseView:
    """Live view with every edge flipped."""

    def __init__(self, base):
        self.base = base
        self.n = base.n

    def vertex_ids(self):
        return self.base.vertex_ids()

    def contains(self, v: int) -> bool:
        return self.base.contains(v)

    def out_edges(self, u: int):
        return self.base.in_edges(u)

    def in_edges(self, v: int):
        return self.base.out_edges(v)


class FilteredView:
    """Live view of `base` minus a (mutable) banned edge-id set.

    Used for the pruned graph: banned ids accumulate as separators are
    removed, and the view reflects that immediately.
    """

    def __init__(self, base, banned: set):
        self.base = base
        self.banned = banned
        self.n = base.n

    def vertex_ids(self):
        return self.base.vertex_ids()

    def contains(self, v: int) -> bool:
        return self.base.contains(v)

    def out_edges(self, u: int):
        for v, w, eid in self.base.out_edges(u):
            if eid not in self.banned:
                yield v, w, eid

    def in_edges(self, v: int):
        for u, w, eid in self.base.in_edges(v):
            if eid not in self.banned:
                yield u, w, eid


def restrict(view, members) -> Restrict:
    """Induced sub-view of any graph-like view."""
    return Restrict(view, members)


class GraphSnapshot:
    """Immutable copy of the live edges at one version (for oracles)."""

    def __init__(self, view):
        self.n = view.n
        verts = list(view.vertex_ids())
        self._verts = verts
        self._members = set(verts)
        self.adj: dict[int, list[tuple[int, int]]] = {v: [] for v in verts}
        self.radj: dict[int, list[tuple[int, int]]] = {v: [] for v in verts}
        for u in verts:
            for v, w, _ in view.out_edges(u):
                self.adj[u].append((v, w))
                self.radj[v].append((u, w))

    def vertex_ids(self):
        return self._verts

    def contains(self, v: int) -> bool:
        return v in self._members

    def out_edges(self, u: int):
        for v, w in self.adj[u]:
            yield v, w, -1

    def in_edges(self, v: int):
        for u, w in self.radj[v]:
            yield u, w, -1


# -- file formats -------------------------------------------------------
#
# Graph file: first line "n m", then m lines "u v w" (0-based).
# Trace file: one update per line, "D u v" or "I u v w".


def write_graph_file(path, n: int, edge_list) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{n} {len(edge_list)}\n")
        for u, v, w in edge_list:
            fh.write(f"{u} {v} {w}\n")


def read_graph_file(path) -> tuple[int, list[tuple[int, int, int]]]:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().split()
        n, m = int(first[0]), int(first[1])
        edges = []
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            u, v, w = int(parts[0]), int(parts[1]), int(parts[2])
            edges.append((u, v, w))
    if len(edges) != m:
        raise GraphError(f"graph file declared {m} edges, found {len(edges)}")
    return n, edges


def write_trace_file(path, events) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            if ev.kind == DELETE:
                fh.write(f"D {ev.u} {ev.v}\n")
            else:
                fh.write(f"I {ev.u} {ev.v} {ev.new_weight}\n")


def read_trace_file(path) -> list[UpdateEvent]:
    events = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "D":
                events.append(UpdateEvent(DELETE, int(parts[1]), int(parts[2])))
            elif parts[0] == "I":
                events.append(
                    UpdateEvent(INCREASE, int(parts[1]), int(parts[2]), int(parts[3]))
                )
            else:
                raise GraphError(f"bad trace line: {line.rstrip()}")
    return events


def replay(n: int, edge_list, events) -> DecrementalGraph:
    """Rebuild a graph by replaying a log from version 0."""
    g = DecrementalGraph(n, edge_list)
    for ev in events:
        g.apply(ev)
    return g
