"""Compare the numba-compiled kernels with the same code run as plain Python.

    python benchmarks/bench_kernels.py [--repeat N]

The workload is the full transformation monoid on four points (256
elements) and a 58-element subsemigroup of it.  Each kernel is called once
before timing so that compilation is not counted; results of the two paths
are checked for equality.
"""
import argparse
import time

import numpy as np

from amenvelope import _kernels as K
from amenvelope.core import SemigroupSpec, cayley_table_of, make_oracle


def monoid_table(degree, gens):
    oracle = make_oracle(SemigroupSpec.transformations(degree, gens))
    elems = oracle.elements()
    table = np.asarray(cayley_table_of(oracle, elems).table, dtype=np.int64)
    index = {e.key: i for i, e in enumerate(elems)}
    return table, np.array([index[tuple(g)] for g in gens], dtype=np.int64)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    t4, g4 = monoid_table(4, [[1, 2, 3, 0], [1, 0, 2, 3], [0, 0, 2, 3]])
    # A 58-element subsemigroup of T4 for the cubic associativity scan.
    sub, _ = monoid_table(4, [[3, 2, 1, 2], [3, 3, 3, 0], [2, 3, 1, 2]])
    w4 = np.array([1.0, 2.0, 3.0])
    bf_gens = g4[:2]
    bf_w = w4[:2]

    cases = [
        (f"associativity scan, order {sub.shape[0]}",
         lambda: K.associativity_violation(sub), lambda: K.py_associativity_violation(sub)),
        ("closure, T4 (256)", lambda: K.closure(t4, g4), lambda: K.py_closure(t4, g4)),
        ("dijkstra, T4 (256)",
         lambda: K.dijkstra(t4, g4, w4, np.inf, 10**9, 1e-9),
         lambda: K.py_dijkstra(t4, g4, w4, np.inf, 10**9, 1e-9)),
        ("brute force, T4, 2 gens, <= 12 factors",
         lambda: K.brute_force(t4, bf_gens, bf_w, 12),
         lambda: K.py_brute_force(t4, bf_gens, bf_w, 12)),
    ]
    print(f"numba active: {K.USE_NUMBA}")
    print(f"{'kernel':42s} {'compiled':>11s} {'python':>11s} {'speedup':>9s}")
    for name, fast, slow in cases:
        fast()  # compile
        tf, a = best_of(fast, args.repeat)
        ts, b = best_of(slow, 1)
        if not same(a, b):
            raise SystemExit(f"{name}: results differ between paths")
        print(f"{name:42s} {tf * 1e3:9.2f}ms {ts * 1e3:9.1f}ms {ts / tf:8.0f}x")


if __name__ == "__main__":
    main()
