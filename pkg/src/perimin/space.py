"""Finite weighted graphs standing in for metric measure spaces.

Every mass, capacity and length is stored as an int64 numerator over a
per-space integer ``scale`` (default ``2**16``, overridable with the
``PERIMIN_SCALE`` environment variable), so cut values and identities are
exact.  Vertex sets are boolean masks of length ``space.n``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from . import _accel, _kernels

VertexSet = npt.NDArray[np.bool_]

DEFAULT_SCALE = 2**16
# headroom so that products of two totals in the flow network stay inside int64
_TOTAL_LIMIT = 2**62


class CapacityScaleError(ValueError):
    """A value is not representable, or totals overflow, at the chosen scale."""


def default_scale() -> int:
    raw = os.environ.get("PERIMIN_SCALE")
    if not raw:
        return DEFAULT_SCALE
    scale = int(raw)
    if scale <= 0:
        raise CapacityScaleError(f"PERIMIN_SCALE must be positive, got {raw!r}")
    return scale


def scaled(value, scale: int) -> int:
    """Exact numerator of ``value`` at ``scale``; raises if not representable."""
    q = Fraction(value) * scale
    if q.denominator != 1:
        raise CapacityScaleError(f"{value} is not a multiple of 1/{scale}")
    return int(q)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Space:
    """Immutable weighted graph: vertex measures, edge capacities and lengths.

    ``charts`` optionally maps raster pixels to vertex ids (one 2-D table per
    chart); ``coords`` optionally carries an (x, y) position per vertex.
    """

    measure: np.ndarray
    edges: np.ndarray
    capacity: np.ndarray
    length: np.ndarray
    scale: int = DEFAULT_SCALE
    coords: np.ndarray | None = None
    charts: tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        measure = np.asarray(self.measure, dtype=np.int64)
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        capacity = np.asarray(self.capacity, dtype=np.int64)
        length = np.asarray(self.length, dtype=np.int64)
        n = measure.shape[0]
        if n < 1:
            raise ValueError("a space needs at least one vertex")
        if capacity.shape[0] != edges.shape[0] or length.shape[0] != edges.shape[0]:
            raise ValueError("capacity/length arrays must match the edge list")
        if (measure < 0).any() or (capacity < 0).any() or (length < 0).any():
            raise ValueError("measures, capacities and lengths must be nonnegative")
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if (edges[:, 0] == edges[:, 1]).any():
                raise ValueError("self-loop edge")
            lo = edges.min(axis=1)
            hi = edges.max(axis=1)
            if np.unique(lo * n + hi).shape[0] != edges.shape[0]:
                raise ValueError("duplicate edge between the same vertex pair")
        if int(measure.sum(dtype=object)) >= _TOTAL_LIMIT or int(capacity.sum(dtype=object)) >= _TOTAL_LIMIT:
            raise CapacityScaleError("scaled totals overflow 64-bit range")
        object.__setattr__(self, "measure", _frozen(measure))
        object.__setattr__(self, "edges", _frozen(edges))
        object.__setattr__(self, "capacity", _frozen(capacity))
        object.__setattr__(self, "length", _frozen(length))
        if self.coords is not None:
            object.__setattr__(self, "coords", _frozen(np.asarray(self.coords, dtype=np.float64)))
        object.__setattr__(self, "charts", tuple(_frozen(np.asarray(c, dtype=np.int64)) for c in self.charts))

    @property
    def n(self) -> int:
        return int(self.measure.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def total_measure(self) -> Fraction:
        return Fraction(int(self.measure.sum(dtype=object)), self.scale)

    def measure_of(self, A) -> Fraction:
        A = as_mask(self, A)
        return Fraction(int(self.measure[A].sum(dtype=object)), self.scale)

    def empty(self) -> VertexSet:
        return np.zeros(self.n, dtype=bool)

    def full(self) -> VertexSet:
        return np.ones(self.n, dtype=bool)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(start, to, edge_id, length) adjacency with both directions of every edge."""
        m = self.n_edges
        tail = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        head = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.argsort(tail, kind="stable")
        start = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(tail, minlength=self.n), out=start[1:])
        to = head[order].astype(np.int64)
        eid = eid[order].astype(np.int64)
        return _frozen(start), _frozen(to), _frozen(eid), _frozen(self.length[eid])

    def degree_capacity(self) -> np.ndarray:
        """Sum of incident capacities per vertex (scaled)."""
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, self.edges[:, 0], self.capacity)
        np.add.at(deg, self.edges[:, 1], self.capacity)
        return deg


def as_mask(space: Space, A) -> VertexSet:
    """Coerce a boolean mask or an iterable of vertex ids to a mask."""
    if isinstance(A, np.ndarray) and A.dtype == np.bool_:
        if A.shape != (space.n,):
            raise ValueError(f"mask has shape {A.shape}, expected ({space.n},)")
        return A
    ids = np.fromiter((int(v) for v in A), dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= space.n):
        raise ValueError("vertex id out of range")
    mask = np.zeros(space.n, dtype=bool)
    mask[ids] = True
    return mask


@dataclass(frozen=True)
class GridSpec:
    """Rectangular 4-neighbour lattice with per-cell density.

    ``weights`` is a scalar or a (rows, cols) array of densities; vertex
    measure is ``w * h**2``, edge capacity ``h * (w_u + w_v) / 2``, edge
    length ``h``.  Vertex ``(row, col)`` gets id ``row * cols + col`` and
    position ``origin + (col * h, row * h)``.
    """

    cols: int
    rows: int
    h: Fraction
    weights: object = 1
    origin: tuple = (0, 0)


def _exact_int(values: np.ndarray, what: str, scale: int) -> np.ndarray:
    if not np.all(np.isfinite(values)) or np.abs(values).max(initial=0) >= 2.0**53:
        raise CapacityScaleError(f"{what} overflow at scale {scale}")
    rounded = np.round(values)
    if not np.array_equal(rounded, values):
        raise CapacityScaleError(f"{what} not representable at scale {scale}; use a finer scale")
    return rounded.astype(np.int64)


def build_grid(spec: GridSpec, scale: int | None = None) -> Space:
    scale = default_scale() if scale is None else scale
    if spec.cols < 1 or spec.rows < 1:
        raise ValueError("grid needs at least one row and one column")
    h = Fraction(spec.h)
    if h <= 0:
        raise ValueError("grid spacing must be positive")
    rows, cols = spec.rows, spec.cols
    w = np.broadcast_to(np.asarray(spec.weights, dtype=np.float64), (rows, cols))
    if (w < 0).any():
        raise ValueError("negative density")
    measure = _exact_int(w.ravel() * float(h * h * scale), "vertex measure", scale)

    ids = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    right = np.stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()], axis=1)
    up = np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel()], axis=1)
    edges = np.concatenate([right, up]).reshape(-1, 2)
    wflat = w.ravel()
    half_h = float(h * scale / 2)
    capacity = _exact_int((wflat[edges[:, 0]] + wflat[edges[:, 1]]) * half_h, "edge capacity", scale)
    length = np.full(edges.shape[0], scaled(h, scale), dtype=np.int64)

    x0, y0 = (float(Fraction(c)) for c in spec.origin)
    rr, cc = np.divmod(np.arange(rows * cols), cols)
    coords = np.stack([x0 + cc * float(h), y0 + rr * float(h)], axis=1)
    return Space(measure, edges, capacity, length, scale=scale, coords=coords, charts=(ids,))


def build_path(masses: Sequence, capacities: Sequence, lengths: Sequence, scale: int | None = None,
               positions: Sequence[float] | None = None) -> Space:
    """1-D chain ``0 - 1 - ... - n-1`` with explicit (rational) masses, capacities and lengths."""
    scale = default_scale() if scale is None else scale
    n = len(masses)
    if len(capacities) != n - 1 or len(lengths) != n - 1:
        raise ValueError("a path of n vertices has n-1 edges")
    measure = np.array([scaled(m, scale) for m in masses], dtype=np.int64)
    edges = np.stack([np.arange(n - 1), np.arange(1, n)], axis=1)
    capacity = np.array([scaled(c, scale) for c in capacities], dtype=np.int64)
    length = np.array([scaled(l, scale) for l in lengths], dtype=np.int64)
    coords = None
    if positions is not None:
        coords = np.stack([np.asarray(positions, dtype=float), np.zeros(n)], axis=1)
    return Space(measure, edges, capacity, length, scale=scale, coords=coords,
                 charts=(np.arange(n).reshape(1, n),))


def add_atom(space: Space, v: int, mass) -> Space:
    """Return a copy with ``mass`` added at vertex ``v`` (no perimeter is attached)."""
    if not 0 <= int(v) < space.n:
        raise ValueError(f"invalid vertex id {v}")
    extra = scaled(mass, space.scale)
    if extra < 0:
        raise ValueError("atom mass must be nonnegative")
    if extra == 0:
        return space
    measure = space.measure.copy()
    measure[int(v)] += extra
    return replace(space, measure=measure)


def add_edges(space: Space, pairs, capacities: Sequence, lengths: Sequence) -> Space:
    """Return a copy with extra edges (rational capacities and lengths)."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(capacities) != pairs.shape[0] or len(lengths) != pairs.shape[0]:
        raise ValueError("one capacity and one length per new edge")
    cap = np.array([scaled(c, space.scale) for c in capacities], dtype=np.int64)
    length = np.array([scaled(l, space.scale) for l in lengths], dtype=np.int64)
    return replace(space, edges=np.concatenate([space.edges, pairs]),
                   capacity=np.concatenate([space.capacity, cap]),
                   length=np.concatenate([space.length, length]))


def glue(spaces: Sequence[Space], identifications: Iterable[Sequence[tuple[int, int]]] = ()) -> Space:
    """Disjoint union of ``spaces`` followed by vertex identifications.

    Each identification group is a sequence of ``(space_index, vertex)``
    pairs from distinct spaces.  Merged vertices add their measures; parallel
    edges created by the quotient add capacities and keep the shorter length;
    edges collapsed to a loop are dropped.
    """
    if not spaces:
        raise ValueError("nothing to glue")
    scale = spaces[0].scale
    if any(s.scale != scale for s in spaces):
        raise CapacityScaleError("cannot glue spaces with different scales")
    offsets = np.cumsum([0] + [s.n for s in spaces])
    total = int(offsets[-1])
    parent = np.arange(total, dtype=np.int64)
    claimed: dict[int, int] = {}
    for g, group in enumerate(identifications):
        group = [(int(i), int(v)) for i, v in group]
        if len({i for i, _ in group}) != len(group):
            raise ValueError(f"identification {g} repeats a source space")
        flat = []
        for i, v in group:
            if not 0 <= i < len(spaces) or not 0 <= v < spaces[i].n:
                raise ValueError(f"identification {g} references an invalid vertex ({i}, {v})")
            gid = int(offsets[i]) + v
            if gid in claimed:
                raise ValueError(f"vertex ({i}, {v}) appears in identifications {claimed[gid]} and {g}")
            claimed[gid] = g
            flat.append(gid)
        parent[flat] = min(flat)

    roots = parent
    keep = roots == np.arange(total)
    new_id = np.cumsum(keep) - 1
    vmap = new_id[roots]
    n = int(keep.sum())

    measure = np.zeros(n, dtype=np.int64)
    np.add.at(measure, vmap, np.concatenate([s.measure for s in spaces]))

    edges = np.concatenate([s.edges + off for s, off in zip(spaces, offsets[:-1])]).reshape(-1, 2)
    capacity = np.concatenate([s.capacity for s in spaces])
    length = np.concatenate([s.length for s in spaces])
    e = vmap[edges]
    live = e[:, 0] != e[:, 1]
    e, capacity, length = e[live], capacity[live], length[live]
    lo, hi = e.min(axis=1), e.max(axis=1)
    key = lo * n + hi
    uniq, inv = np.unique(key, return_inverse=True)
    cap_m = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(cap_m, inv, capacity)
    len_m = np.full(uniq.shape[0], np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(len_m, inv, length)
    edges_m = np.stack([uniq // n, uniq % n], axis=1)

    coords = None
    if all(s.coords is not None for s in spaces):
        coords = np.concatenate([s.coords for s in spaces])[keep]
    charts = tuple(vmap[c + off] for s, off in zip(spaces, offsets[:-1]) for c in s.charts)
    return Space(measure, edges_m, cap_m, len_m, scale=scale, coords=coords, charts=charts)


def graph_distance_scaled(space: Space, sources, within=None, offsets=None) -> np.ndarray:
    """Shortest-path distances as int64 numerators; unreachable is ``INF_DIST``.

    ``offsets`` (scaled int per source vertex) lets sources start at a
    positive distance.
    """
    dist, _ = _distance_with_last(space, sources, within, offsets)
    return dist


def _distance_with_last(space: Space, sources, within=None, offsets=None):
    sources = as_mask(space, sources)
    if not sources.any():
        raise ValueError("graph_distance needs at least one source")
    allowed = np.ones(space.n, dtype=bool) if within is None else as_mask(space, within)
    start, to, _, length = space.csr
    init = np.full(space.n, _kernels.INF_DIST, dtype=np.int64)
    init[sources] = 0 if offsets is None else np.asarray(offsets, dtype=np.int64)[sources]
    if not _accel.NUMBA_ENABLED and offsets is None and (length > 0).all():
        return _scipy_distance(space, sources, allowed)
    return _kernels.dijkstra(start, to, length, init, allowed)


def _scipy_distance(space: Space, sources: VertexSet, allowed: VertexSet):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra

    start, to, _, length = space.csr
    sub = np.flatnonzero(allowed)
    local = np.full(space.n, -1, dtype=np.int64)
    local[sub] = np.arange(sub.size)
    tail = np.repeat(np.arange(space.n), np.diff(start))
    keep = allowed[tail] & allowed[to]
    mat = csr_matrix((length[keep].astype(np.float64), (local[tail[keep]], local[to[keep]])),
                     shape=(sub.size, sub.size))
    src = local[np.flatnonzero(sources & allowed)]
    dist = np.full(space.n, _kernels.INF_DIST, dtype=np.int64)
    last = np.full(space.n, -1, dtype=np.int64)
    if src.size == 0:
        return dist, last
    d, pred, _ = dijkstra(mat, indices=src, min_only=True, return_predecessors=True)
    ok = np.isfinite(d)
    dist[sub[ok]] = d[ok].astype(np.int64)
    last[sub[ok]] = 0
    has_pred = ok & (pred >= 0)
    p = sub[pred[has_pred]]
    q = sub[has_pred]
    last[q] = dist[q] - dist[p]
    return dist, last


def graph_distance(space: Space, sources, within=None) -> np.ndarray:
    """Shortest-path distance (in distance units) from ``sources``; unreachable is ``inf``.

    With ``within`` given, paths are confined to that vertex set.
    """
    dist = graph_distance_scaled(space, sources, within)
    out = dist.astype(np.float64) / space.scale
    out[dist == _kernels.INF_DIST] = np.inf
    return out


def neighbors_mask(space: Space, A) -> VertexSet:
    """Vertices adjacent to ``A`` (through edges of any capacity)."""
    A = as_mask(space, A)
    u, v = space.edges[:, 0], space.edges[:, 1]
    out = np.zeros(space.n, dtype=bool)
    out[v[A[u]]] = True
    out[u[A[v]]] = True
    return out


def exterior_boundary(space: Space, omega) -> VertexSet:
    """Vertices outside ``omega`` adjacent to it: the discrete seed set for dist(., boundary)."""
    omega = as_mask(space, omega)
    return neighbors_mask(space, omega) & ~omega
