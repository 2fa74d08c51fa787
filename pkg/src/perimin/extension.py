"""Extension certificates for indicator functions of subsets of a candidate set ``G``."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import _kernels
from .functional import PreconditionError, perimeter, relative_perimeter
from .minimize import best_extension
from .space import Space, VertexSet, as_mask


class UndefinedRatioError(ZeroDivisionError):
    """The probe has zero measure and zero relative perimeter."""


@dataclass(frozen=True, eq=False)
class ProbeRecord:
    probe: VertexSet
    relative_perimeter: Fraction
    measure: Fraction
    perimeter: Fraction
    extension_value: Fraction | None
    ratio: Fraction | None


@dataclass(frozen=True, eq=False)
class ExtensionReport:
    probes: list[ProbeRecord]
    worst_ratio: Fraction | None
    step3_violations: int
    lam: Fraction
    violating: list[int] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "probes": len(self.probes),
            "worst_ratio": None if self.worst_ratio is None else str(self.worst_ratio),
            "worst_ratio_decimal": None if self.worst_ratio is None else float(self.worst_ratio),
            "step3_violations": self.step3_violations,
            "ratio_bound": str(max(Fraction(2), self.lam + 1)),
        }


def _check_subset(space: Space, G: VertexSet, A) -> VertexSet:
    A = as_mask(space, A)
    if (A & ~G).any():
        raise PreconditionError("probe must be a subset of G")
    return A


def zero_extension_norm_ratio(space: Space, G, A) -> Fraction:
    """``(m(A) + Per(A)) / (m(A) + Per_G(A))``: BV-norm growth when extending ``1_A`` by zero."""
    G = as_mask(space, G)
    A = _check_subset(space, G, A)
    den = space.measure_of(A) + relative_perimeter(space, G, A)
    if den == 0:
        raise UndefinedRatioError("ratio undefined for a null probe with no relative perimeter")
    return (space.measure_of(A) + perimeter(space, A)) / den


def check_step3(space: Space, G, lam, probes, with_extension: bool = False) -> ExtensionReport:
    """Test ``Per(A) <= 2 Per_G(A) + lam m(A)`` exactly on every probe ``A`` inside ``G``."""
    G = as_mask(space, G)
    lam = Fraction(lam)
    records, bad = [], []
    worst = None
    for i, A in enumerate(probes):
        A = _check_subset(space, G, A)
        per_g = relative_perimeter(space, G, A)
        mass = space.measure_of(A)
        per = perimeter(space, A)
        ext = best_extension(space, G, A)[1] if with_extension else None
        ratio = (mass + per) / (mass + per_g) if mass + per_g > 0 else None
        if per > 2 * per_g + lam * mass:
            bad.append(i)
        if ratio is not None and (worst is None or ratio > worst):
            worst = ratio
        records.append(ProbeRecord(A, per_g, mass, per, ext, ratio))
    return ExtensionReport(records, worst, len(bad), lam, bad)


def non_extension_witness(space: Space, omega, family) -> tuple[int, list[Fraction]]:
    """Ratio of the cheapest extension of each ``E`` to its norm inside ``omega``.

    Returns the index of the largest ratio and the full sequence.  Unbounded
    growth along a family shows ``omega`` admits no uniform extension constant.
    """
    omega = as_mask(space, omega)
    ratios = []
    for E in family:
        E = _check_subset(space, omega, E)
        den = space.measure_of(E) + relative_perimeter(space, omega, E)
        if den == 0:
            raise UndefinedRatioError("family member has zero norm inside omega")
        ratios.append(best_extension(space, omega, E)[1] / den)
    if not ratios:
        return -1, []
    return int(np.argmax([float(r) for r in ratios])), ratios


def _grow_connected(space: Space, G: VertexSet, rng: np.random.Generator, size: int) -> VertexSet:
    start, to, _, _ = space.csr
    ids = np.flatnonzero(G)
    origin = int(ids[rng.integers(ids.size)])
    key = rng.random(space.n)
    return _kernels.random_growth(start, to, G, origin, size, key)


def _smooth_superlevel(space: Space, G: VertexSet, rng: np.random.Generator) -> VertexSet:
    start, to, _, _ = space.csr
    f = rng.random(space.n)
    deg = np.diff(start)
    src = np.repeat(np.arange(space.n), deg)
    for _ in range(int(rng.integers(1, 6))):
        f = (f + np.bincount(src, weights=f[to], minlength=space.n)) / (1 + deg)
    vals = f[G]
    t = rng.uniform(vals.min(), vals.max()) if vals.size else 0.0
    return G & (f > t)


def sample_probes(space: Space, G, count: int, seed: int = 0) -> list[VertexSet]:
    """Indicator probes inside ``G``: all subsets when ``|G| <= 16``, otherwise random
    BFS-grown connected sets mixed with superlevel sets of smoothed noise."""
    G = as_mask(space, G)
    ids = np.flatnonzero(G)
    if count <= 0 or ids.size == 0:
        return []
    if ids.size <= 16:
        out = []
        for bits in product((False, True), repeat=ids.size):
            A = space.empty()
            A[ids[np.array(bits, dtype=bool)]] = True
            out.append(A)
        return out
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        if i % 2 == 0:
            size = int(rng.integers(1, ids.size + 1)) if rng.random() < 0.3 else int(rng.integers(1, min(ids.size, 64) + 1))
            out.append(_grow_connected(space, G, rng, size))
        else:
            out.append(_smooth_superlevel(space, G, rng))
    return out
