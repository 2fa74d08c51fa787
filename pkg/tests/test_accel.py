import json
import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from perimin import _kernels
from perimin._accel import NUMBA_ENABLED, python_impl
from perimin.checks import random_space
from perimin.mincut import _build_arcs

SCRIPT = textwrap.dedent("""
    import json
    from fractions import Fraction
    import numpy as np
    from perimin import _accel, Problem, Variant, minimize, estimate_lambda, graph_distance
    from perimin.scenarios import square, tripod_carrot_probe, triangles_atoms, triangles_atoms_check
    from perimin.checks import run_suite
    sq = square(16, pad=1)
    out = {"numba": _accel.NUMBA_ENABLED}
    res = minimize(Problem(sq.space, sq.omega, 6))
    out["square"] = [str(res.value), np.flatnonzero(res.minimal_set).tolist()]
    est = estimate_lambda(sq.space, sq.omega, Fraction(1, 20))
    out["estimate"] = [str(est.lam), str(est.r), str(est.certificate)]
    out["distance"] = graph_distance(sq.space, [0]).tolist()
    tri = triangles_atoms_check(triangles_atoms(2, Fraction(1, 64)))
    out["triangles"] = [str(tri.result.value), tri.threshold]
    out["carrot"] = tripod_carrot_probe(1, Fraction(1, 256)).ratio
    out["oracle"] = [r.passed for r in run_suite("oracle", 1)]
    print(json.dumps(out))
""")


def _run(disable: bool) -> dict:
    env = dict(os.environ)
    env.pop("PERIMIN_DISABLE_NUMBA", None)
    if disable:
        env["PERIMIN_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


@pytest.mark.slow
def test_fallback_reproduces_compiled_results():
    fast, slow = _run(False), _run(True)
    assert slow.pop("numba") is False
    fast.pop("numba")
    assert fast == slow
    assert all(slow["oracle"])


def _random_arcs(rng, n):
    space = random_space(rng, n_min=n, n_max=n)
    source = rng.integers(0, 20, n) * (rng.random(n) < 0.5)
    sink = rng.integers(0, 20, n) * (rng.random(n) < 0.5)
    return _build_arcs(n, source, sink, space.edges, space.capacity), n


@pytest.mark.skipif(not NUMBA_ENABLED, reason="compiled kernels unavailable")
@pytest.mark.parametrize("seed", range(10))
def test_kernels_agree_with_python_versions(seed):
    rng = np.random.default_rng(seed)
    (start, to, rev, cap), n = _random_arcs(rng, 12)
    c1, c2 = cap.copy(), cap.copy()
    f1 = _kernels.max_flow(start, to, rev, c1, n, n + 1)
    f2 = python_impl(_kernels.max_flow)(start, to, rev, c2, n, n + 1)
    assert f1 == f2
    r1 = _kernels.reach_from(start, to, c1, n)
    assert np.array_equal(r1, python_impl(_kernels.reach_from)(start, to, c1, n))
    t1 = _kernels.reach_to(start, to, rev, c1, n + 1)
    assert np.array_equal(t1, python_impl(_kernels.reach_to)(start, to, rev, c1, n + 1))

    space = random_space(rng, n_min=20, n_max=20)
    s, t, _, length = space.csr
    init = np.full(space.n, _kernels.INF_DIST, dtype=np.int64)
    init[0] = 0
    allowed = rng.random(space.n) < 0.8
    allowed[0] = True
    d1 = _kernels.dijkstra(s, t, length, init, allowed)
    d2 = python_impl(_kernels.dijkstra)(s, t, length, init, allowed)
    assert all(np.array_equal(a, b) for a, b in zip(d1, d2))
    key = rng.random(space.n)
    g1 = _kernels.random_growth(s, t, allowed, 0, 7, key)
    assert np.array_equal(g1, python_impl(_kernels.random_growth)(s, t, allowed, 0, 7, key))


def test_scipy_distances_match_dijkstra():
    from perimin.space import _scipy_distance

    rng = np.random.default_rng(9)
    for _ in range(10):
        space = random_space(rng, n_min=10, n_max=30)
        if (space.length == 0).any():
            continue
        sources = np.zeros(space.n, dtype=bool)
        sources[rng.integers(space.n, size=2)] = True
        allowed = rng.random(space.n) < 0.9
        allowed |= sources
        s, t, _, length = space.csr
        init = np.where(sources, 0, _kernels.INF_DIST).astype(np.int64)
        dist, _ = _kernels.dijkstra(s, t, length, init, allowed)
        ref, _ = _scipy_distance(space, sources, allowed)
        assert np.array_equal(dist, ref)
