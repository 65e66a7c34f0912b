"""Array kernels for semigroups given by a finite Cayley table.

Each kernel is written once against numpy arrays.  When numba is importable
and ``AMENV_DISABLE_NUMBA`` is unset (or ``0``), the kernels are compiled
with ``numba.njit``; otherwise the same source runs as plain Python over
numpy arrays.  Both paths produce identical results, which the test-suite
and ``benchmarks/bench_kernels.py`` check.
"""
import os

import numpy as np

_FLAG = os.environ.get("AMENV_DISABLE_NUMBA", "0").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG in ("", "0", "false", "no")


def _maybe_njit(fn):
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def _associativity_violation(table):
    n = table.shape[0]
    for i in range(n):
        for j in range(n):
            ij = table[i, j]
            for k in range(n):
                if table[ij, k] != table[i, table[j, k]]:
                    return i, j, k
    return -1, -1, -1


def _associativity_violation_sampled(table, triples):
    for r in range(triples.shape[0]):
        i = triples[r, 0]
        j = triples[r, 1]
        k = triples[r, 2]
        if table[table[i, j], k] != table[i, table[j, k]]:
            return i, j, k
    return -1, -1, -1


def _closure(table, seeds):
    # Breadth-first right-multiplication by the seeds; inside a round the
    # new elements are taken in increasing index order.
    n = table.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    rounds = np.empty(n, dtype=np.int64)
    count = 0
    for idx in range(seeds.shape[0]):
        s = seeds[idx]
        if not seen[s]:
            seen[s] = True
    for s in range(n):
        if seen[s]:
            order[count] = s
            rounds[count] = 0
            count += 1
    start = 0
    rnd = 0
    mark = np.zeros(n, dtype=np.bool_)
    while start < count:
        stop = count
        rnd += 1
        for p in range(start, stop):
            x = order[p]
            for q in range(seeds.shape[0]):
                y = table[x, seeds[q]]
                if not seen[y]:
                    seen[y] = True
                    mark[y] = True
        for s in range(n):
            if mark[s]:
                mark[s] = False
                order[count] = s
                rounds[count] = rnd
                count += 1
        start = stop
    return order[:count], rounds[:count]


def _dijkstra(table, gens, weights, radius, budget, tol):
    # Array Dijkstra on the right Cayley graph.  Selection is by
    # (cost, element index); a parent is replaced only on strict improvement.
    n = table.shape[0]
    g = gens.shape[0]
    dist = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    settled = np.zeros(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    limit = radius + tol
    for q in range(g):
        c = weights[q]
        s = gens[q]
        if c <= limit and c < dist[s]:
            dist[s] = c
            parent[s] = -1
            via[s] = q
    count = 0
    interrupted = False
    while True:
        best = -1
        best_cost = np.inf
        for s in range(n):
            if not settled[s] and dist[s] < best_cost:
                best_cost = dist[s]
                best = s
        if best < 0:
            break
        if count >= budget:
            interrupted = True
            break
        settled[best] = True
        order[count] = best
        count += 1
        for q in range(g):
            y = table[best, gens[q]]
            c = best_cost + weights[q]
            if c <= limit and c < dist[y]:
                dist[y] = c
                parent[y] = best
                via[y] = q
    return order[:count], dist, parent, via, interrupted


def _brute_force(table, gens, weights, max_factors):
    # Odometer over all words of length 1..max_factors in the generator
    # positions, with prefix products kept on a stack.
    n = table.shape[0]
    g = gens.shape[0]
    best = np.full(n, np.inf)
    if g == 0:
        return best
    digits = np.zeros(max_factors, dtype=np.int64)
    prod = np.zeros(max_factors, dtype=np.int64)
    cost = np.zeros(max_factors)
    for m in range(1, max_factors + 1):
        for p in range(m):
            digits[p] = 0
        for p in range(m):
            if p == 0:
                prod[0] = gens[0]
                cost[0] = weights[0]
            else:
                prod[p] = table[prod[p - 1], gens[0]]
                cost[p] = cost[p - 1] + weights[0]
        while True:
            e = prod[m - 1]
            if cost[m - 1] < best[e]:
                best[e] = cost[m - 1]
            p = m - 1
            while p >= 0 and digits[p] == g - 1:
                digits[p] = 0
                p -= 1
            if p < 0:
                break
            digits[p] += 1
            for r in range(p, m):
                q = digits[r]
                if r == 0:
                    prod[0] = gens[q]
                    cost[0] = weights[q]
                else:
                    prod[r] = table[prod[r - 1], gens[q]]
                    cost[r] = cost[r - 1] + weights[q]
    return best


associativity_violation = _maybe_njit(_associativity_violation)
associativity_violation_sampled = _maybe_njit(_associativity_violation_sampled)
closure = _maybe_njit(_closure)
dijkstra = _maybe_njit(_dijkstra)
brute_force = _maybe_njit(_brute_force)

# Uncompiled references, used by the benchmark and by backend-agreement tests.
py_associativity_violation = _associativity_violation
py_closure = _closure
py_dijkstra = _dijkstra
py_brute_force = _brute_force
