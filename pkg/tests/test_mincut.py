import itertools

import numpy as np
import pytest

from perimin.mincut import INF, FlowNetwork, InfeasibleCutError, solve
from perimin.space import CapacityScaleError


def _random_network(rng, n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return FlowNetwork(rng.integers(0, 6, n), rng.integers(0, 6, n), edges,
                       rng.integers(0, 5, len(pairs)), offset=int(rng.integers(0, 3)))


def _enumerate(net):
    costs = {}
    for bits in itertools.product((False, True), repeat=net.n):
        S = np.array(bits, dtype=bool)
        try:
            costs[bits] = net.cost(S)
        except InfeasibleCutError:
            pass
    best = min(costs.values())
    winners = np.array([b for b, c in costs.items() if c == best], dtype=bool)
    return best, winners.all(axis=0), winners.any(axis=0)


@pytest.mark.parametrize("seed", range(40))
def test_solve_matches_enumeration_and_extremal_sides(seed):
    rng = np.random.default_rng(seed)
    net = _random_network(rng, int(rng.integers(1, 10)))
    best, meet, join = _enumerate(net)
    res = solve(net)
    assert res.value == best
    assert np.array_equal(res.min_source_side, meet)
    assert np.array_equal(res.max_source_side, join)


def test_hard_clamps():
    net = FlowNetwork([INF, 0, 0], [0, 0, INF], [[0, 1], [1, 2]], [3, 1])
    res = solve(net)
    assert res.value == 1
    assert res.min_source_side.tolist() == [True, True, False]
    assert net.cost(res.min_source_side) == 1


def test_conflicting_clamps_are_infeasible():
    with pytest.raises(InfeasibleCutError):
        solve(FlowNetwork([INF], [INF], np.zeros((0, 2)), []))


def test_opposite_clamps_with_finite_edge_are_feasible():
    res = solve(FlowNetwork([INF, 0], [0, INF], [[0, 1]], [7]))
    assert res.value == 7


def test_infinite_cut_detected():
    # clamped source and sink joined only through unbreakable unary costs
    net = FlowNetwork([INF, INF], [0, INF], [[0, 1]], [1])
    with pytest.raises(InfeasibleCutError):
        solve(net)


def test_parametric_source_capacities_give_nested_cuts():
    rng = np.random.default_rng(11)
    net = _random_network(rng, 9)
    prev = None
    for shift in range(0, 12):
        bumped = FlowNetwork(net.source + shift, net.sink, net.edges, net.weight, net.offset)
        side = solve(bumped).min_source_side
        if prev is not None:
            assert not (prev & ~side).any()
        prev = side


def test_network_validation_and_overflow():
    with pytest.raises(ValueError):
        FlowNetwork([-2], [0], np.zeros((0, 2)), [])
    with pytest.raises(ValueError):
        FlowNetwork([0, 0], [0, 0], [[0, 1]], [-1])
    with pytest.raises(ValueError):
        FlowNetwork([0], [0, 0], np.zeros((0, 2)), [])
    with pytest.raises(CapacityScaleError):
        solve(FlowNetwork([2**62, 0], [0, 2**62], [[0, 1]], [1]))
