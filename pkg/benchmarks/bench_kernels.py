"""Compiled kernels against their interpreted fallbacks.

Runs Dinic max-flow on the network of a padded square (inside variant) and
single-source Dijkstra, each as the numba build, the plain-Python function
underneath it, and (for distances) scipy.sparse.csgraph.

    python3 benchmarks/bench_kernels.py --sizes 16 32 64 --repeat 3
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as scipy_dijkstra

from perimin import _kernels
from perimin._accel import NUMBA_ENABLED, python_impl
from perimin.mincut import INF, _build_arcs
from perimin.minimize import Problem, _network
from perimin.scenarios import square


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def flow_arrays(n: int):
    scn = square(n, pad=2)
    net, _, _ = _network(Problem(scn.space, scn.omega, Fraction(8)))
    big = int(net.source[net.source != INF].sum() + net.sink[net.sink != INF].sum() + net.weight.sum()) + 1
    source = np.where(net.source == INF, big, net.source)
    sink = np.where(net.sink == INF, big, net.sink)
    both = np.minimum(source, sink)
    return _build_arcs(net.n, source - both, sink - both, net.edges, net.weight), net.n


def bench_flow(n: int, repeat: int, python_limit: int) -> dict:
    (start, to, rev, cap), nodes = flow_arrays(n)
    run = lambda kernel: kernel(start, to, rev, cap.copy(), nodes, nodes + 1)
    row = {"grid": n, "nodes": nodes}
    row["compiled"] = _best_of(lambda: run(_kernels.max_flow), repeat)
    if n <= python_limit:
        row["python"] = _best_of(lambda: run(python_impl(_kernels.max_flow)), 1)
        assert run(_kernels.max_flow) == run(python_impl(_kernels.max_flow))
    return row


def bench_dijkstra(n: int, repeat: int, python_limit: int) -> dict:
    space = square(n, pad=2).space
    start, to, _, length = space.csr
    init = np.full(space.n, _kernels.INF_DIST, dtype=np.int64)
    init[0] = 0
    allowed = np.ones(space.n, dtype=bool)
    tail = np.repeat(np.arange(space.n), np.diff(start))
    mat = csr_matrix((length.astype(np.float64), (tail, to)), shape=(space.n, space.n))
    row = {"grid": n, "nodes": space.n}
    row["compiled"] = _best_of(lambda: _kernels.dijkstra(start, to, length, init, allowed), repeat)
    row["scipy"] = _best_of(lambda: scipy_dijkstra(mat, indices=0), repeat)
    if n <= python_limit:
        row["python"] = _best_of(lambda: python_impl(_kernels.dijkstra)(start, to, length, init, allowed), 1)
    return row


def _fmt(row: dict) -> str:
    cols = [f"{k}={row[k]:.4f}s" for k in ("compiled", "python", "scipy") if k in row]
    return f"  grid {row['grid']:>4}  nodes {row['nodes']:>7}  " + "  ".join(cols)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--python-limit", type=int, default=64, help="skip the slow fallback above this grid size")
    args = ap.parse_args(argv)
    if not NUMBA_ENABLED:
        print("numba disabled: 'compiled' timings below are interpreted too")
    # warm up the JIT so compile time is not charged to the first size
    bench_flow(4, 1, 0)
    bench_dijkstra(4, 1, 0)
    print("max-flow (Dinic)")
    for n in args.sizes:
        print(_fmt(bench_flow(n, args.repeat, args.python_limit)))
    print("single-source shortest paths")
    for n in args.sizes:
        print(_fmt(bench_dijkstra(n, args.repeat, args.python_limit)))


if __name__ == "__main__":
    main()
