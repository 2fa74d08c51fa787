"""Hot inner loops: Dinic max-flow, residual reachability, Dijkstra, geodesic bottlenecks.

All kernels take CSR arrays (``start``, ``to``) and int64 weights so that
numba can compile them; the same functions run interpreted when numba is off.
"""
from __future__ import annotations

import heapq

import numpy as np

from ._accel import jit

INF_DIST = np.iinfo(np.int64).max


@jit
def max_flow(start, to, rev, cap, s, t):
    """Dinic's algorithm; ``cap`` holds residual capacities and is updated in place."""
    n = start.shape[0] - 1
    level = np.full(n, -1, np.int64)
    it = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    path = np.empty(n, np.int64)
    flow = 0
    tail = 0
    while True:
        # only vertices touched by the previous phase need resetting
        for i in range(tail):
            level[queue[i]] = -1
        level[s] = 0
        it[s] = start[s]
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            # levels at or beyond the sink's cannot lie on a shortest augmenting path
            if level[t] >= 0 and level[u] + 1 >= level[t]:
                break
            for a in range(start[u], start[u + 1]):
                v = to[a]
                if cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    it[v] = start[v]
                    queue[tail] = v
                    tail += 1
        if level[t] < 0:
            break
        depth = 0
        u = s
        while True:
            if u == t:
                b = cap[path[0]]
                for i in range(1, depth):
                    if cap[path[i]] < b:
                        b = cap[path[i]]
                first = -1
                for i in range(depth):
                    a = path[i]
                    cap[a] -= b
                    cap[rev[a]] += b
                    if first < 0 and cap[a] == 0:
                        first = i
                flow += b
                # resume from the tail of the first saturated arc
                depth = first
                u = to[rev[path[first]]]
                continue
            advanced = False
            while it[u] < start[u + 1]:
                a = it[u]
                v = to[a]
                if cap[a] > 0 and level[v] == level[u] + 1:
                    path[depth] = a
                    depth += 1
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if advanced:
                continue
            if depth == 0:
                break
            level[u] = -1
            depth -= 1
            u = to[rev[path[depth]]]
            it[u] += 1
    return flow


@jit
def reach_from(start, to, cap, s):
    """Nodes reachable from ``s`` through arcs of positive residual capacity."""
    n = start.shape[0] - 1
    seen = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int64)
    seen[s] = True
    queue[0] = s
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        for a in range(start[u], start[u + 1]):
            v = to[a]
            if cap[a] > 0 and not seen[v]:
                seen[v] = True
                queue[tail] = v
                tail += 1
    return seen


@jit
def reach_to(start, to, rev, cap, t):
    """Nodes that can reach ``t`` through arcs of positive residual capacity."""
    n = start.shape[0] - 1
    seen = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int64)
    seen[t] = True
    queue[0] = t
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for a in range(start[x], start[x + 1]):
            y = to[a]
            if cap[rev[a]] > 0 and not seen[y]:
                seen[y] = True
                queue[tail] = y
                tail += 1
    return seen


@jit
def dijkstra(start, to, length, init, allowed):
    """Multi-source shortest paths; ``init`` holds source offsets (INF_DIST elsewhere).

    Also returns, per vertex, the length of the last edge on one shortest path
    (0 for sources, -1 when unreachable).
    """
    n = start.shape[0] - 1
    inf = np.iinfo(np.int64).max
    dist = np.full(n, inf, np.int64)
    last = np.full(n, -1, np.int64)
    done = np.zeros(n, np.bool_)
    heap = [(np.int64(0), np.int64(0))]
    heap.pop()
    for v in range(n):
        if allowed[v] and init[v] != inf:
            dist[v] = init[v]
            last[v] = 0
            heapq.heappush(heap, (init[v], np.int64(v)))
    while len(heap) > 0:
        d, u = heapq.heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        for a in range(start[u], start[u + 1]):
            v = to[a]
            if not allowed[v]:
                continue
            nd = d + length[a]
            if nd < dist[v]:
                dist[v] = nd
                last[v] = length[a]
                heapq.heappush(heap, (nd, np.int64(v)))
    return dist, last


@jit
def geodesic_bottleneck(start, to, length, dist, order, score, origin):
    """Max over shortest paths from ``origin`` of the min ``score`` along the path.

    ``order`` lists reachable vertices by nondecreasing ``dist``; the origin
    itself is excluded from the min (its score is treated as +inf).
    Returns (best, pred) where ``pred`` reconstructs a maximizing path.
    """
    n = start.shape[0] - 1
    inf = np.iinfo(np.int64).max
    best = np.full(n, -np.inf)
    pred = np.full(n, -1, np.int64)
    best[origin] = np.inf
    for k in range(order.shape[0]):
        v = order[k]
        if v == origin or dist[v] == inf:
            continue
        top = -np.inf
        arg = -1
        for a in range(start[v], start[v + 1]):
            u = to[a]
            if dist[u] != inf and dist[u] + length[a] == dist[v] and best[u] > top:
                top = best[u]
                arg = u
        if arg >= 0:
            best[v] = min(top, score[v])
            pred[v] = arg
    return best, pred


@jit
def random_growth(start, to, allowed, origin, size, key):
    """Grow a connected set from ``origin`` inside ``allowed``, always adding the
    frontier vertex with the smallest ``key`` (random keys give random shapes)."""
    n = start.shape[0] - 1
    inside = np.zeros(n, np.bool_)
    queued = np.zeros(n, np.bool_)
    heap = [(key[origin], np.int64(origin))]
    queued[origin] = True
    count = 0
    while len(heap) > 0 and count < size:
        _, u = heapq.heappop(heap)
        inside[u] = True
        count += 1
        for a in range(start[u], start[u + 1]):
            v = to[a]
            if allowed[v] and not queued[v]:
                queued[v] = True
                heapq.heappush(heap, (key[v], np.int64(v)))
    return inside
