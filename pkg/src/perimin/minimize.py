"""Exact minimization of ``Per(A) + lam * m(Omega \\ A)`` and its symmetric-difference variant.

The minimizers form a lattice; :func:`minimize` reports its bottom and top
elements.  The bottom element is the canonical "minimal" minimizer used by the
extension certificates.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .functional import PreconditionError, perimeter, perimeter_scaled
from .mincut import FlowNetwork, InvariantError, solve
from .space import CapacityScaleError, Space, VertexSet, _distance_with_last, as_mask, exterior_boundary


class Variant(enum.Enum):
    INSIDE = "inside"
    SYMDIFF = "symdiff"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        aliases = {"inside": cls.INSIDE, "insideonly": cls.INSIDE,
                   "symdiff": cls.SYMDIFF, "symmetricdifference": cls.SYMDIFF}
        try:
            return aliases[str(value).lower().replace("_", "").replace("-", "")]
        except KeyError:
            raise ValueError(f"unknown variant {value!r}") from None


class ResolutionExhaustedError(RuntimeError):
    """The requested accuracy cannot be reached at this discretization."""


def quantize_lambda(lam, scale: int) -> Fraction:
    """Round ``lam`` up to the next multiple of ``1/scale``."""
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return Fraction(math.ceil(lam * scale), scale)


@dataclass(frozen=True, eq=False)
class Problem:
    space: Space
    omega: VertexSet
    lam: Fraction
    variant: Variant = Variant.INSIDE

    def __post_init__(self):
        object.__setattr__(self, "omega", as_mask(self.space, self.omega))
        object.__setattr__(self, "lam", quantize_lambda(self.lam, self.space.scale))
        object.__setattr__(self, "variant", Variant.parse(self.variant))

    @property
    def lam_scaled(self) -> int:
        return int(self.lam * self.space.scale)


@dataclass(frozen=True, eq=False)
class MinimizerResult:
    value: Fraction
    minimal_set: VertexSet
    maximal_set: VertexSet
    lam: Fraction
    variant: Variant


def _penalty_mask(problem: Problem, A: VertexSet) -> VertexSet:
    if problem.variant is Variant.INSIDE:
        return problem.omega & ~A
    return problem.omega ^ A


def evaluate(problem: Problem, A) -> Fraction:
    """``Per(A) + lam * m(Omega \\ A)`` (inside) or ``Per(A) + lam * m(Omega ^ A)`` (symdiff)."""
    space = problem.space
    A = as_mask(space, A)
    if problem.variant is Variant.INSIDE and (A & ~problem.omega).any():
        raise PreconditionError("InsideOnly competitors must be subsets of omega")
    penalty = int(space.measure[_penalty_mask(problem, A)].sum(dtype=object))
    return perimeter(space, A) + problem.lam * Fraction(penalty, space.scale)


def _network(problem: Problem) -> tuple[FlowNetwork, VertexSet, int]:
    space = problem.space
    S, L = space.scale, problem.lam_scaled
    g = math.gcd(S, L) or S
    unary = space.measure * (L // g)
    omega = problem.omega
    if problem.variant is Variant.INSIDE:
        free = omega
        net = FlowNetwork.from_space(space, free, edge_factor=S // g,
                                     exclude_cost=np.where(omega, unary, 0))
    else:
        free = np.ones(space.n, dtype=bool)
        net = FlowNetwork.from_space(space, free, edge_factor=S // g,
                                     exclude_cost=np.where(omega, unary, 0),
                                     include_cost=np.where(omega, 0, unary))
    return net, free, g


def minimize(problem: Problem) -> MinimizerResult:
    """Global minimum with the lattice-minimal and lattice-maximal minimizers."""
    space = problem.space
    net, free, g = _network(problem)
    cut = solve(net)
    value = Fraction(cut.value * g, space.scale * space.scale)
    ids = np.flatnonzero(free)
    lo = space.empty()
    hi = space.empty()
    lo[ids[cut.min_source_side]] = True
    hi[ids[cut.max_source_side]] = True
    for side in (lo, hi):
        if evaluate(problem, side) != value:
            raise InvariantError("minimizer does not reproduce the optimal value")
    return MinimizerResult(value, lo, hi, problem.lam, problem.variant)


@dataclass(frozen=True)
class LambdaEstimate:
    lam: Fraction
    r: Fraction
    layer_measure: Fraction
    certificate: Fraction
    certificate_level: Fraction
    certificate_ok: bool
    bound: Fraction = field(default=Fraction(0))


def _layer_measure(d, p, m, r: Fraction) -> Fraction:
    """Measure of the boundary layer of width ``r``; cell of v spans (d_v - p_v, d_v]."""
    full = d <= r
    total = Fraction(int(m[full].sum(dtype=object)))
    part = ~full & (d - p < r)
    for dv, pv, mv in zip(d[part], p[part], m[part]):
        total += Fraction(int(mv)) * (r - int(dv) + int(pv)) / int(pv)
    return total


def estimate_lambda(space: Space, omega, epsilon, tolerance=1) -> LambdaEstimate:
    """Choose ``lam`` so that minimizers leave less than ``epsilon`` of ``omega`` uncovered.

    Distances to the boundary are graph distances from the exterior boundary
    of ``omega``; the layer width ``r`` is the largest with layer measure below
    ``epsilon / 2``.  The certificate is the least perimeter of an inner
    parallel set ``{dist > s}``, ``s <= r``; ``certificate_ok`` records whether
    it is within ``(1 + tolerance) * m_r / r``.
    """
    omega = as_mask(space, omega)
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    seeds = exterior_boundary(space, omega)
    if not seeds.any():
        raise PreconditionError("omega has no exterior boundary in this space")
    dist, last = _distance_with_last(space, seeds)
    inner = omega & (dist != _kernels.INF_DIST)
    d = dist[inner].astype(object)
    p = last[inner].astype(object)
    m = space.measure[inner].astype(object)
    if (p <= 0).any():
        raise PreconditionError("boundary layers need positive edge lengths")
    S = space.scale
    half = eps / 2 * S  # in scaled measure units

    depth = Fraction(int(d.max())) if d.size else Fraction(0)
    if _layer_measure(d, p, m, depth) < half:
        r = depth
    else:
        # first r with layer measure >= eps/2; piecewise linear between breakpoints
        knots = sorted({Fraction(int(x)) for x in np.concatenate([d, d - p])})
        lo_k = Fraction(0)
        for k in knots:
            if k <= 0:
                continue
            if _layer_measure(d, p, m, k) >= half:
                break
            lo_k = k
        m_lo = _layer_measure(d, p, m, lo_k)
        m_hi = _layer_measure(d, p, m, k)
        r = lo_k + (half - m_lo) * (k - lo_k) / (m_hi - m_lo)
    if r <= 0:
        raise ResolutionExhaustedError("no positive boundary layer fits the measure budget")

    levels = [Fraction(0)] + sorted({Fraction(int(x)) for x in d if Fraction(int(x)) < r or r == depth})
    best, best_s = None, Fraction(0)
    for s in levels:
        if s > r:
            break
        per = perimeter_scaled(space, omega & ~(dist <= int(s)) if s > 0 else omega)
        if best is None or per < best:
            best, best_s = per, s
    cert = Fraction(best, S)
    m_r = _layer_measure(d, p, m, r) / S
    r_units = r / S
    m_s = _layer_measure(d, p, m, best_s) / S
    ok = cert <= m_r / r_units * (1 + Fraction(tolerance))
    need = max(1 / r_units, cert / (eps - m_s))
    lam = Fraction(math.floor(need * S) + 1, S)
    if lam * S * int(space.measure[omega].sum(dtype=object)) >= 2**61:
        raise ResolutionExhaustedError(f"epsilon={eps} needs lambda={float(lam):.3g}, beyond the capacity scale")
    return LambdaEstimate(lam=lam, r=r_units, layer_measure=m_r, certificate=cert,
                          certificate_level=best_s / S, certificate_ok=ok,
                          bound=cert / lam + m_s)


def best_extension(space: Space, omega, A) -> tuple[VertexSet, Fraction]:
    """Cheapest ``E`` (by ``m(E) + Per(E)``) with ``E & omega == A``; lattice-minimal choice."""
    omega = as_mask(space, omega)
    A = as_mask(space, A)
    if (A & ~omega).any():
        raise PreconditionError("the set to extend must lie inside omega")
    free = ~omega
    net = FlowNetwork.from_space(space, free, A, include_cost=space.measure)
    cut = solve(net)
    ext = A.copy()
    ext[np.flatnonzero(free)[cut.min_source_side]] = True
    return ext, Fraction(cut.value, space.scale)
