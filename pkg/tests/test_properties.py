from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from perimin.checks import brute_force
from perimin.functional import (
    coarea_integral,
    coarea_profile,
    essential_perimeter,
    perimeter,
    relative_perimeter,
    total_variation,
)
from perimin.minimize import Problem, Variant, evaluate, minimize
from perimin.space import Space

SCALE = 16


@st.composite
def spaces(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n)) if pairs else []
    measure = draw(st.lists(st.integers(0, 6), min_size=n, max_size=n))
    capacity = draw(st.lists(st.integers(0, 6), min_size=len(chosen), max_size=len(chosen)))
    edges = np.array(chosen, dtype=np.int64).reshape(-1, 2)
    return Space(measure, edges, capacity, np.full(len(chosen), SCALE), scale=SCALE)


def subsets(n):
    return st.lists(st.booleans(), min_size=n, max_size=n).map(lambda b: np.array(b, dtype=bool))


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_splitting_identity(data):
    sp = data.draw(spaces())
    B = data.draw(subsets(sp.n))
    A = B & data.draw(subsets(sp.n))
    assert perimeter(sp, A) + perimeter(sp, B & ~A) == perimeter(sp, B) + 2 * relative_perimeter(sp, B, A)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_submodularity_and_complement(data):
    sp = data.draw(spaces())
    A, C = data.draw(subsets(sp.n)), data.draw(subsets(sp.n))
    assert perimeter(sp, A | C) + perimeter(sp, A & C) <= perimeter(sp, A) + perimeter(sp, C)
    assert perimeter(sp, A) == perimeter(sp, ~A)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_coarea(data):
    sp = data.draw(spaces())
    f = np.array(data.draw(st.lists(st.integers(0, 9), min_size=sp.n, max_size=sp.n)), dtype=np.int64)
    assert total_variation(sp, f) == coarea_integral(coarea_profile(sp, f))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_essential_perimeter_is_a_lower_bound(data):
    sp = data.draw(spaces())
    A = data.draw(subsets(sp.n))
    value, rep = essential_perimeter(sp, A)
    assert value <= perimeter(sp, A)
    assert perimeter(sp, rep) == value
    positive = sp.measure > 0
    assert np.array_equal(rep[positive], A[positive])


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_minimize_against_enumeration(data):
    sp = data.draw(spaces())
    omega = data.draw(subsets(sp.n))
    variant = data.draw(st.sampled_from(list(Variant)))
    lam = Fraction(data.draw(st.integers(0, 8 * SCALE)), SCALE)
    problem = Problem(sp, omega, lam, variant)
    res = minimize(problem)
    value, meet = brute_force(problem)
    assert res.value == value
    assert np.array_equal(res.minimal_set, meet)
    assert evaluate(problem, res.maximal_set) == value
    assert not (res.minimal_set & ~res.maximal_set).any()


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_nesting_and_concavity(data):
    sp = data.draw(spaces())
    omega = data.draw(subsets(sp.n))
    steps = sorted(set(data.draw(st.lists(st.integers(0, 10 * SCALE), min_size=2, max_size=6))))
    lams = [Fraction(s, SCALE) for s in steps]
    runs = [minimize(Problem(sp, omega, lam)) for lam in lams]
    for a, b in zip(runs, runs[1:]):
        assert not (a.minimal_set & ~b.minimal_set).any()
    vals = [r.value for r in runs]
    slopes = [(b - a) / (l1 - l0) for a, b, l0, l1 in zip(vals, vals[1:], lams, lams[1:])]
    assert all(s >= 0 for s in slopes)
    assert all(x >= y for x, y in zip(slopes, slopes[1:]))


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_step1_bound(data):
    sp = data.draw(spaces())
    omega = data.draw(subsets(sp.n))
    lam = Fraction(data.draw(st.integers(1, 8 * SCALE)), SCALE)
    res = minimize(Problem(sp, omega, lam))
    assert lam * sp.measure_of(omega & ~res.minimal_set) <= res.value


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_symdiff_value_is_concave_nondecreasing(data):
    sp = data.draw(spaces())
    omega = data.draw(subsets(sp.n))
    steps = sorted(set(data.draw(st.lists(st.integers(0, 10 * SCALE), min_size=3, max_size=6))))
    lams = [Fraction(s, SCALE) for s in steps]
    vals = [minimize(Problem(sp, omega, lam, Variant.SYMDIFF)).value for lam in lams]
    slopes = [(b - a) / (l1 - l0) for a, b, l0, l1 in zip(vals, vals[1:], lams, lams[1:])]
    assert all(s >= 0 for s in slopes)
    assert all(x >= y for x, y in zip(slopes, slopes[1:]))
