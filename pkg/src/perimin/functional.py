"""Perimeter, relative perimeter, total variation, coarea profile and BV norms.

Everything returns exact :class:`fractions.Fraction` values.  A vertex
function is an integer array ``f`` read as ``f / denominator``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .mincut import FlowNetwork, solve
from .space import Space, VertexSet, as_mask


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


def _exact_sum(values: np.ndarray) -> int:
    if values.size == 0:
        return 0
    if values.dtype == object:
        return int(values.sum())
    bound = int(np.abs(values).max()) * values.size
    if bound < 2**62:
        return int(values.sum())
    return int(values.astype(object).sum())


def _exact_dot(a: np.ndarray, b: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if int(np.abs(a).max()) * int(np.abs(b).max()) * a.size < 2**62:
        return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
    return int(np.dot(a.astype(object), b.astype(object)))


def cut_edges(space: Space, A) -> np.ndarray:
    """Boolean mask over edges with exactly one endpoint in ``A``."""
    A = as_mask(space, A)
    return A[space.edges[:, 0]] != A[space.edges[:, 1]]


def perimeter_scaled(space: Space, A) -> int:
    return _exact_sum(space.capacity[cut_edges(space, A)])


def perimeter(space: Space, A) -> Fraction:
    """Capacity of the edge cut between ``A`` and its complement."""
    return Fraction(perimeter_scaled(space, A), space.scale)


def relative_perimeter_scaled(space: Space, B, A) -> int:
    B = as_mask(space, B)
    A = as_mask(space, A)
    if (A & ~B).any():
        raise PreconditionError("relative perimeter needs A to be a subset of B")
    u, v = space.edges[:, 0], space.edges[:, 1]
    inside = B[u] & B[v] & (A[u] != A[v])
    return _exact_sum(space.capacity[inside])


def relative_perimeter(space: Space, B, A) -> Fraction:
    """Cut capacity of ``A`` counted only on edges with both endpoints in ``B``."""
    return Fraction(relative_perimeter_scaled(space, B, A), space.scale)


def _as_values(space: Space, f) -> np.ndarray:
    f = np.asarray(f)
    if f.shape != (space.n,):
        raise ValueError(f"vertex function has shape {f.shape}, expected ({space.n},)")
    if f.dtype == np.bool_:
        return f.astype(np.int64)
    if not np.issubdtype(f.dtype, np.integer) and f.dtype != object:
        raise TypeError("vertex functions are integer arrays; pass a denominator for rationals")
    return f


def total_variation(space: Space, f, denominator: int = 1) -> Fraction:
    """``sum_e w_e |f(u) - f(v)|`` for ``f / denominator``."""
    f = _as_values(space, f)
    diff = np.abs(f[space.edges[:, 0]] - f[space.edges[:, 1]])
    return Fraction(_exact_dot(space.capacity, diff), space.scale * denominator)


class LevelPerimeter(NamedTuple):
    threshold: Fraction
    gap: Fraction
    perimeter: Fraction


def coarea_profile(space: Space, f, denominator: int = 1) -> list[LevelPerimeter]:
    """Perimeters of the superlevel sets ``{f > t}`` at every breakpoint ``t`` of ``f >= 0``.

    ``sum(gap * perimeter)`` over the profile equals ``total_variation(f)``.
    """
    f = _as_values(space, f)
    if (f < 0).any():
        raise PreconditionError("coarea profile needs a nonnegative function")
    levels = np.unique(np.concatenate([[0], f]))
    if levels.size < 2:
        return []
    u, v = space.edges[:, 0], space.edges[:, 1]
    lo = np.searchsorted(levels, np.minimum(f[u], f[v]))
    hi = np.searchsorted(levels, np.maximum(f[u], f[v]))
    # edge e is cut by {f > t_i} exactly for lo_e <= i < hi_e
    delta = np.zeros(levels.size + 1, dtype=object)
    np.add.at(delta, lo, space.capacity.astype(object))
    np.subtract.at(delta, hi, space.capacity.astype(object))
    per = np.cumsum(delta)[:-2]
    profile = []
    for i in range(levels.size - 1):
        profile.append(LevelPerimeter(
            threshold=Fraction(int(levels[i]), denominator),
            gap=Fraction(int(levels[i + 1] - levels[i]), denominator),
            perimeter=Fraction(int(per[i]), space.scale),
        ))
    return profile


def coarea_integral(profile: list[LevelPerimeter]) -> Fraction:
    return sum((p.gap * p.perimeter for p in profile), Fraction(0))


def bv_norm(space: Space, B, f, denominator: int = 1) -> Fraction:
    """L1 mass of ``f`` on ``B`` plus its variation over edges inside ``B``."""
    B = as_mask(space, B)
    f = _as_values(space, f)
    mass = _exact_dot(space.measure[B], np.abs(f[B]))
    u, v = space.edges[:, 0], space.edges[:, 1]
    inside = B[u] & B[v]
    tv = _exact_dot(space.capacity[inside], np.abs(f[u[inside]] - f[v[inside]]))
    return Fraction(mass + tv, space.scale * denominator)


def essential_perimeter(space: Space, A) -> tuple[Fraction, VertexSet]:
    """Least perimeter over sets differing from ``A`` only on zero-measure vertices.

    Returns the value and the lattice-minimal representative achieving it.
    """
    A = as_mask(space, A)
    free = space.measure == 0
    if not free.any():
        return perimeter(space, A), A.copy()
    net = FlowNetwork.from_clamped(space, free, A)
    cut = solve(net)
    rep = A.copy()
    rep[free] = False
    rep[np.flatnonzero(free)[cut.min_source_side]] = True
    return Fraction(cut.value, space.scale), rep
