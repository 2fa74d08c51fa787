"""Self-check suites run by ``perimin check``: exact identities, a brute-force
oracle for the minimizer, and the example scenarios at default resolution."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import scenarios
from .functional import (
    coarea_integral,
    coarea_profile,
    essential_perimeter,
    perimeter,
    relative_perimeter,
    total_variation,
)
from .minimize import Problem, Variant, minimize
from .space import Space


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def random_space(rng: np.random.Generator, n_min: int = 2, n_max: int = 16, scale: int = 64) -> Space:
    """Random connected-ish graph with small integer measures (some zero) and capacities."""
    n = int(rng.integers(n_min, n_max + 1))
    pairs = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < min(1.0, 3.0 / n)}
    pairs |= {(i, i + 1) for i in range(n - 1) if rng.random() < 0.7}
    edges = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
    measure = rng.integers(0, 5, size=n) * (rng.random(n) > 0.15)
    capacity = rng.integers(0, 6, size=edges.shape[0])
    length = rng.integers(1, 4, size=edges.shape[0])
    return Space(measure.astype(np.int64), edges, capacity.astype(np.int64), length.astype(np.int64) * scale,
                 scale=scale)


def all_subsets(free: np.ndarray) -> np.ndarray:
    """Boolean matrix whose rows are every subset of the ``free`` vertices."""
    ids = np.flatnonzero(free)
    codes = np.arange(2 ** ids.size, dtype=np.int64)
    rows = np.zeros((codes.size, free.size), dtype=bool)
    rows[:, ids] = (codes[:, None] >> np.arange(ids.size)) & 1
    return rows


def brute_force(problem: Problem) -> tuple[Fraction, np.ndarray]:
    """Exhaustive minimum and the intersection of all minimizers (at most 16 free vertices)."""
    space = problem.space
    free = problem.omega if problem.variant is Variant.INSIDE else np.ones(space.n, dtype=bool)
    if free.sum() > 16:
        raise ValueError("brute force is limited to 16 free vertices")
    sets = all_subsets(free)
    u, v = space.edges[:, 0], space.edges[:, 1]
    per = (sets[:, u] != sets[:, v]).astype(np.int64) @ space.capacity
    miss = problem.omega & ~sets if problem.variant is Variant.INSIDE else problem.omega ^ sets
    pen = miss.astype(np.int64) @ space.measure
    S, L = space.scale, problem.lam_scaled
    cost = per * S + pen * L  # common denominator S**2
    best = cost.min()
    winners = sets[cost == best]
    return Fraction(int(best), S * S), winners.all(axis=0)


def _identities(rng: np.random.Generator, count: int) -> list[CheckResult]:
    splitting = coarea = submod = ess = True
    for _ in range(count):
        space = random_space(rng)
        B = rng.random(space.n) < 0.6
        A = B & (rng.random(space.n) < 0.5)
        lhs = perimeter(space, A) + perimeter(space, B & ~A)
        splitting &= lhs == perimeter(space, B) + 2 * relative_perimeter(space, B, A)
        f = rng.integers(0, 6, size=space.n)
        coarea &= total_variation(space, f) == coarea_integral(coarea_profile(space, f))
        C = rng.random(space.n) < 0.5
        submod &= perimeter(space, A | C) + perimeter(space, A & C) <= perimeter(space, A) + perimeter(space, C)
        ess &= essential_perimeter(space, A)[0] <= perimeter(space, A)
    return [CheckResult("perimeter splitting identity", bool(splitting), f"{count} instances"),
            CheckResult("coarea identity", bool(coarea), f"{count} instances"),
            CheckResult("submodularity", bool(submod), f"{count} instances"),
            CheckResult("essential perimeter <= perimeter", bool(ess), f"{count} instances")]


def _oracle(rng: np.random.Generator, count: int) -> list[CheckResult]:
    value_ok = set_ok = True
    for i in range(count):
        space = random_space(rng)
        variant = Variant.INSIDE if i % 2 == 0 else Variant.SYMDIFF
        omega = rng.random(space.n) < 0.7
        lam = Fraction(int(rng.integers(0, 4 * space.scale)), space.scale)
        problem = Problem(space, omega, lam, variant)
        res = minimize(problem)
        value, meet = brute_force(problem)
        value_ok &= res.value == value
        set_ok &= bool(np.array_equal(res.minimal_set, meet))
    return [CheckResult("minimum value matches enumeration", bool(value_ok), f"{count} problems"),
            CheckResult("minimal set is the meet of all minimizers", bool(set_ok), f"{count} problems")]


def _scenarios() -> list[CheckResult]:
    out = []
    rep = scenarios.interval_check(scenarios.interval_example())
    out.append(CheckResult("interval: null point breaks additivity (4 > 2)",
                           rep.continuum.lhs == 4 and rep.continuum.rhs == 2,
                           f"{rep.continuum.lhs} vs {rep.continuum.rhs}"))
    out.append(CheckResult("interval: graph identity holds", rep.graph.lhs == rep.graph.rhs,
                           f"{rep.graph.lhs} = {rep.graph.rhs}"))
    pers = [scenarios.fat_cantor_check(scenarios.fat_cantor_demo(level)).min_perimeter for level in range(3, 7)]
    out.append(CheckResult("fat Cantor: inner perimeter grows with level",
                           all(a < b for a, b in zip(pers, pers[1:])), " < ".join(map(str, pers))))
    tri = scenarios.triangles_atoms_check(scenarios.triangles_atoms(3, Fraction(1, 256), lam=4))
    out.append(CheckResult("triangles/atoms: atoms kept, triangles emptied", tri.threshold is not None,
                           f"threshold n = {tri.threshold}"))
    res = scenarios.tripod_symdiff_optimum(scenarios.tripod(0, Fraction(1, 128)))
    out.append(CheckResult("tripod: optimal symmetric-difference value near 2",
                           abs(res.value - 2) <= Fraction(1, 10), f"{float(res.value):.4f}"))
    rep2 = scenarios.tripod_extension_ratios_windows([0, 1, 2], {0: Fraction(1, 64), 1: Fraction(1, 256), 2: Fraction(1, 4096)})
    out.append(CheckResult("tripod: extension ratios grow about 4x per k",
                           all(3 <= q <= 5 for q in rep2.quotients),
                           ", ".join(f"{float(q):.2f}" for q in rep2.quotients)))
    probes = [scenarios.tripod_carrot_probe(k) for k in (1, 2)]
    ok = all(p.ratio <= 1.5 * p.bound for p in probes) and 3 <= probes[0].ratio / probes[1].ratio <= 5
    out.append(CheckResult("tripod: geodesic carrot ratio below 2^(-2k-1)", ok,
                           ", ".join(f"k={p.k}: {p.ratio:.4f}" for p in probes)))
    return out


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "identities": lambda seed=0: _identities(np.random.default_rng(seed), 200),
    "oracle": lambda seed=0: _oracle(np.random.default_rng(seed), 50),
    "scenarios": lambda seed=0: _scenarios(),
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return suite(seed)


__all__ = ["CheckResult", "SUITES", "all_subsets", "brute_force", "random_space", "run_suite"]
