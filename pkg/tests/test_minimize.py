from fractions import Fraction

import numpy as np
import pytest

from perimin.checks import brute_force, random_space
from perimin.functional import PreconditionError, perimeter
from perimin.minimize import (
    Problem,
    ResolutionExhaustedError,
    Variant,
    best_extension,
    estimate_lambda,
    evaluate,
    minimize,
    quantize_lambda,
)
from perimin.scenarios import square
from perimin.space import GridSpec, as_mask, build_grid, build_path


@pytest.fixture
def sq():
    return square(8, pad=1, side=8)


def test_variant_parse():
    assert Variant.parse("inside") is Variant.INSIDE
    assert Variant.parse("SymDiff") is Variant.SYMDIFF
    assert Variant.parse(Variant.SYMDIFF) is Variant.SYMDIFF
    with pytest.raises(ValueError):
        Variant.parse("outside")


def test_quantize_rounds_up():
    assert quantize_lambda(Fraction(1, 3), 4) == Fraction(2, 4)
    assert quantize_lambda(Fraction(1, 2), 4) == Fraction(1, 2)
    with pytest.raises(ValueError):
        quantize_lambda(-1, 4)


def test_evaluate_endpoints(sq):
    p = Problem(sq.space, sq.omega, 3)
    assert evaluate(p, sq.omega) == perimeter(sq.space, sq.omega)
    assert evaluate(p, sq.space.empty()) == 3 * sq.space.measure_of(sq.omega)
    with pytest.raises(PreconditionError):
        evaluate(p, sq.space.full())
    ps = Problem(sq.space, sq.omega, 3, Variant.SYMDIFF)
    outside = ~sq.omega
    assert evaluate(ps, sq.space.full()) == 3 * sq.space.measure_of(outside)


def test_zero_lambda_gives_empty_minimal_set(sq):
    for variant in Variant:
        res = minimize(Problem(sq.space, sq.omega, 0, variant))
        assert res.value == 0 and not res.minimal_set.any()


def test_large_lambda_keeps_the_square(sq):
    res = minimize(Problem(sq.space, sq.omega, 16))
    assert np.array_equal(res.minimal_set, sq.omega)
    assert res.value == perimeter(sq.space, sq.omega)


def test_inside_results_stay_in_omega():
    rng = np.random.default_rng(5)
    for _ in range(20):
        space = random_space(rng)
        omega = rng.random(space.n) < 0.5
        res = minimize(Problem(space, omega, Fraction(int(rng.integers(0, 400)), space.scale)))
        assert not (res.maximal_set & ~omega).any()
        assert not (res.minimal_set & ~res.maximal_set).any()


@pytest.mark.parametrize("variant", list(Variant))
def test_matches_brute_force(variant):
    rng = np.random.default_rng(42 if variant is Variant.INSIDE else 43)
    for _ in range(25):
        space = random_space(rng)
        omega = rng.random(space.n) < 0.6
        p = Problem(space, omega, Fraction(int(rng.integers(0, 300)), space.scale), variant)
        value, meet = brute_force(p)
        res = minimize(p)
        assert res.value == value
        assert np.array_equal(res.minimal_set, meet)


def test_nesting_and_concavity_in_lambda():
    space = build_grid(GridSpec(6, 6, 1, weights=np.random.default_rng(1).integers(0, 3, (6, 6))), scale=4)
    omega = np.ones(space.n, dtype=bool)
    omega[[0, 7, 14]] = False
    lams = [Fraction(k, 4) for k in range(0, 24)]
    runs = [minimize(Problem(space, omega, lam)) for lam in lams]
    for a, b in zip(runs, runs[1:]):
        assert not (a.minimal_set & ~b.minimal_set).any()
    vals = [r.value for r in runs]
    slopes = [(b - a) / (l1 - l0) for a, b, l0, l1 in zip(vals, vals[1:], lams, lams[1:])]
    assert all(s >= 0 for s in slopes)
    assert all(a >= b for a, b in zip(slopes, slopes[1:]))


def test_step1_bound(sq):
    for lam in (1, 2, 5):
        res = minimize(Problem(sq.space, sq.omega, lam))
        assert sq.space.measure_of(sq.omega & ~res.minimal_set) <= res.value / res.lam


def test_zero_measure_vertex_joins_only_when_free():
    sp = build_path([1, 0, 1], [1, 1], [1, 1], scale=4)
    res = minimize(Problem(sp, sp.full(), 10))
    assert res.minimal_set.tolist() == [True, True, True]


def test_estimate_lambda_on_unit_square_meets_budget():
    scn = square(32, pad=1)
    eps = Fraction(1, 10)
    est = estimate_lambda(scn.space, scn.omega, eps)
    assert est.lam > 1 / est.r
    assert est.layer_measure <= eps / 2
    assert est.certificate_ok
    res = minimize(Problem(scn.space, scn.omega, est.lam))
    assert scn.space.measure_of(scn.omega & ~res.minimal_set) < eps


def test_estimate_lambda_with_huge_epsilon_uses_full_depth():
    scn = square(8, pad=1)
    total = scn.space.measure_of(scn.omega)
    est = estimate_lambda(scn.space, scn.omega, 3 * total)
    assert est.r == Fraction(4, 8)  # deepest cell centre is four cells in
    assert est.layer_measure == total


def test_estimate_lambda_errors():
    scn = square(8, pad=1)
    with pytest.raises(ValueError):
        estimate_lambda(scn.space, scn.omega, 0)
    with pytest.raises(PreconditionError):
        estimate_lambda(scn.space, scn.space.full(), Fraction(1, 2))
    with pytest.raises(ResolutionExhaustedError):
        estimate_lambda(scn.space, scn.omega, Fraction(1, 10**15))


def test_best_extension_trivial_cases(sq):
    ext, val = best_extension(sq.space, sq.omega, sq.space.empty())
    assert val == 0 and not ext.any()
    A = sq.omega.copy()
    A[np.flatnonzero(A)[:5]] = False
    ext, val = best_extension(sq.space, sq.space.full(), A)
    assert np.array_equal(ext, A)
    assert val == sq.space.measure_of(A) + perimeter(sq.space, A)


def test_best_extension_fills_a_cheap_gap():
    # omega = two ends of a path; the middle vertex is light and joining it removes two cut edges
    sp = build_path([1, Fraction(1, 4), 1], [1, 1], [1, 1], scale=4)
    omega = as_mask(sp, [0, 2])
    ext, val = best_extension(sp, omega, omega)
    assert ext.tolist() == [True, True, True] and val == Fraction(9, 4)
    with pytest.raises(PreconditionError):
        best_extension(sp, omega, sp.full())
