"""Exact s-t minimum cuts for unary + pairwise objectives on integer capacities.

A :class:`FlowNetwork` encodes the set function

    cost(S) = offset + sum_{v not in S} source[v] + sum_{v in S} sink[v]
              + sum_{cut edges} weight[e]

over subsets ``S`` of its free nodes.  :func:`solve` returns the minimum
together with the smallest and largest minimizing ``S`` (the source sides
of the lattice-extremal minimum cuts).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .space import CapacityScaleError, Space

INF = -1
"""Marker for an unbreakable terminal capacity in ``source``/``sink`` arrays."""


class InfeasibleCutError(RuntimeError):
    """Every cut has infinite capacity: the hard constraints contradict each other."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; this is a bug."""


@dataclass(frozen=True)
class FlowNetwork:
    source: np.ndarray
    sink: np.ndarray
    edges: np.ndarray
    weight: np.ndarray
    offset: int = 0

    def __post_init__(self):
        n = np.asarray(self.source).shape[0]
        object.__setattr__(self, "source", np.asarray(self.source, dtype=np.int64))
        object.__setattr__(self, "sink", np.asarray(self.sink, dtype=np.int64))
        object.__setattr__(self, "edges", np.asarray(self.edges, dtype=np.int64).reshape(-1, 2))
        object.__setattr__(self, "weight", np.asarray(self.weight, dtype=np.int64))
        if self.sink.shape != (n,) or self.weight.shape[0] != self.edges.shape[0]:
            raise ValueError("inconsistent network arrays")
        for arr in (self.source, self.sink):
            if ((arr < 0) & (arr != INF)).any():
                raise ValueError("terminal capacities must be nonnegative (or INF)")
        if (self.weight < 0).any():
            raise ValueError("edge weights must be nonnegative")
        if self.edges.size and (self.edges.min() < 0 or self.edges.max() >= n):
            raise ValueError("edge endpoint out of range")

    @property
    def n(self) -> int:
        return int(self.source.shape[0])

    def cost(self, S: np.ndarray) -> int:
        """Direct evaluation of the encoded objective (finite terminals only)."""
        S = np.asarray(S, dtype=bool)
        if (self.source[~S] == INF).any() or (self.sink[S] == INF).any():
            raise InfeasibleCutError("set violates a hard constraint")
        cut = S[self.edges[:, 0]] != S[self.edges[:, 1]]
        return (self.offset + int(self.source[~S].sum(dtype=object)) + int(self.sink[S].sum(dtype=object))
                + int(self.weight[cut].sum(dtype=object)))

    @classmethod
    def from_space(cls, space: Space, free, fixed_in=None, *, edge_factor: int = 1,
                   include_cost=None, exclude_cost=None) -> "FlowNetwork":
        """Encode ``edge_factor * Per(S) + sum include_cost[S] + sum exclude_cost[~S]``.

        Only vertices in ``free`` are decided; the others are clamped to
        ``fixed_in`` and contracted into the terminals.
        """
        free = np.asarray(free, dtype=bool)
        fixed_in = np.zeros(space.n, dtype=bool) if fixed_in is None else np.asarray(fixed_in, dtype=bool) & ~free
        zero = np.zeros(space.n, dtype=np.int64)
        inc = zero if include_cost is None else np.asarray(include_cost, dtype=np.int64)
        exc = zero if exclude_cost is None else np.asarray(exclude_cost, dtype=np.int64)
        local = np.full(space.n, -1, dtype=np.int64)
        ids = np.flatnonzero(free)
        local[ids] = np.arange(ids.size)

        fixed_out = ~free & ~fixed_in
        offset = int(inc[fixed_in].sum(dtype=object)) + int(exc[fixed_out].sum(dtype=object))
        source = exc[ids].copy()
        sink = inc[ids].copy()

        u, v = space.edges[:, 0], space.edges[:, 1]
        w = space.capacity * edge_factor
        fu, fv = free[u], free[v]
        both = fu & fv
        fixed_pair = ~fu & ~fv
        offset += edge_factor * int(space.capacity[fixed_pair & (fixed_in[u] != fixed_in[v])].sum(dtype=object))
        # one free endpoint: cost is paid when the free end disagrees with the clamped end
        for a, b in ((u, v), (v, u)):
            mixed = free[a] & ~free[b]
            np.add.at(source, local[a[mixed & fixed_in[b]]], w[mixed & fixed_in[b]])
            np.add.at(sink, local[a[mixed & ~fixed_in[b]]], w[mixed & ~fixed_in[b]])
        edges = np.stack([local[u[both]], local[v[both]]], axis=1)
        return cls(source, sink, edges, w[both], offset)

    @classmethod
    def from_clamped(cls, space: Space, free, fixed_in) -> "FlowNetwork":
        return cls.from_space(space, free, fixed_in)


@dataclass(frozen=True)
class CutResult:
    value: int
    min_source_side: np.ndarray
    max_source_side: np.ndarray


def _finite_total(net: FlowNetwork) -> int:
    fin = lambda a: int(a[a != INF].sum(dtype=object))
    return fin(net.source) + fin(net.sink) + int(net.weight.sum(dtype=object))


def _build_arcs(n, source, sink, edges, weight):
    s, t = n, n + 1
    keep = weight > 0
    eu, ev, ew = edges[keep, 0], edges[keep, 1], weight[keep]
    sv = np.flatnonzero(source > 0)
    tv = np.flatnonzero(sink > 0)
    m_e, m_s, m_t = eu.size, sv.size, tv.size
    # forward arcs then their paired reverses
    tail = np.concatenate([eu, np.full(m_s, s), tv, ev, sv, np.full(m_t, t)])
    head = np.concatenate([ev, sv, np.full(m_t, t), eu, np.full(m_s, s), tv])
    cap = np.concatenate([ew, source[sv], sink[tv], ew, np.zeros(m_s + m_t, np.int64)])
    half = m_e + m_s + m_t
    pair = np.concatenate([np.arange(half, 2 * half), np.arange(half)])
    order = np.argsort(tail, kind="stable")
    pos = np.empty_like(order)
    pos[order] = np.arange(order.size)
    start = np.zeros(n + 3, dtype=np.int64)
    np.cumsum(np.bincount(tail, minlength=n + 2), out=start[1:])
    return (start, head[order].astype(np.int64), pos[pair[order]].astype(np.int64),
            cap[order].astype(np.int64))


def solve(net: FlowNetwork) -> CutResult:
    """Minimize the encoded objective exactly by max-flow.

    ``min_source_side`` is the residual-reachable set from the source,
    ``max_source_side`` the complement of the set co-reachable to the sink.
    """
    n = net.n
    total = _finite_total(net)
    if total + 1 >= 2**62:
        raise CapacityScaleError("network capacities overflow 64-bit range")
    big = total + 1
    source = np.where(net.source == INF, big, net.source)
    sink = np.where(net.sink == INF, big, net.sink)
    if ((source == big) & (sink == big)).any():
        raise InfeasibleCutError("a node is hard-clamped to both sides")
    both = np.minimum(source, sink)
    flow = int(both.sum(dtype=object))
    source = source - both
    sink = sink - both

    start, to, rev, cap = _build_arcs(n, source, sink, net.edges, net.weight)
    flow += int(_kernels.max_flow(start, to, rev, cap, n, n + 1))
    if flow >= big:
        raise InfeasibleCutError("minimum cut is infinite")
    lo = _kernels.reach_from(start, to, cap, n)[:n]
    hi = ~_kernels.reach_to(start, to, rev, cap, n + 1)[:n]

    value = net.offset + flow
    for side in (lo, hi):
        if net.cost(side) != value:
            raise InvariantError("extremal cut does not reproduce the max-flow value")
    if (lo & ~hi).any():
        raise InvariantError("minimal source side is not contained in the maximal one")
    return CutResult(value, lo, hi)
