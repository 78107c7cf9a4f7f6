"""Shared fixtures-by-hand: small random instances and traces."""

import random

from dsssp.graphs import DELETE, INCREASE, DecrementalGraph, UpdateEvent


def random_graph(n, avg_deg, max_w, rng) -> DecrementalGraph:
    edges = []
    seen = set()
    target = int(avg_deg * n)
    attempts = 0
    while len(edges) < target and attempts < 20 * target:
        attempts += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        edges.append((u, v, rng.randint(1, max_w)))
    edges.sort()
    return DecrementalGraph(n, edges)


def random_dag(n, avg_deg, max_w, rng) -> DecrementalGraph:
    perm = list(range(n))
    rng.shuffle(perm)
    rank = {v: i for i, v in enumerate(perm)}
    edges = []
    seen = set()
    target = int(avg_deg * n)
    attempts = 0
    while len(edges) < target and attempts < 20 * target:
        attempts += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v or (u, v) in seen:
            continue
        if rank[u] > rank[v]:
            u, v = v, u
        if (u, v) in seen:
            continue
        seen.add((u, v))
        edges.append((u, v, rng.randint(1, max_w)))
    edges.sort()
    return DecrementalGraph(n, edges)


def bidirected_path(n, w=1) -> DecrementalGraph:
    edges = []
    for i in range(n - 1):
        edges.append((i, i + 1, w))
        edges.append((i + 1, i, w))
    return DecrementalGraph(n, edges)


def bidirected_grid(side, max_w=1, rng=None) -> DecrementalGraph:
    def vid(r, c):
        return r * side + c

    edges = []
    for r in range(side):
        for c in range(side):
            if c + 1 < side:
                w1 = rng.randint(1, max_w) if rng else max_w
                w2 = rng.randint(1, max_w) if rng else max_w
                edges.append((vid(r, c), vid(r, c + 1), w1))
                edges.append((vid(r, c + 1), vid(r, c), w2))
            if r + 1 < side:
                w1 = rng.randint(1, max_w) if rng else max_w
                w2 = rng.randint(1, max_w) if rng else max_w
                edges.append((vid(r, c), vid(r + 1, c), w1))
                edges.append((vid(r + 1, c), vid(r, c), w2))
    return DecrementalGraph(side * side, edges)


def directed_cycle(n, w=1) -> DecrementalGraph:
    return DecrementalGraph(n, [(i, (i + 1) % n, w) for i in range(n)])


def full_deletion_trace(g: DecrementalGraph, rng) -> list[UpdateEvent]:
    edges = [(u, v) for u, v, _, _ in g.alive_edges()]
    rng.shuffle(edges)
    return [UpdateEvent(DELETE, u, v) for u, v in edges]


def mixed_trace(g: DecrementalGraph, rng, increase_frac=0.3, max_bump=8):
    events = []
    edges = [(u, v, w) for u, v, w, _ in g.alive_edges()]
    rng.shuffle(edges)
    for u, v, w in edges:
        if rng.random() < increase_frac:
            events.append(UpdateEvent(INCREASE, u, v, w + rng.randint(1, max_bump)))
    deletions = [(u, v) for u, v, _ in edges]
    rng.shuffle(deletions)
    events.extend(UpdateEvent(DELETE, u, v) for u, v in deletions)
    return events


def seeded(seed) -> random.Random:
    return random.Random(seed)
