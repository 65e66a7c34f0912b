"""Weighted word length on a generated semigroup.

Given generators ``s_1, s_2, ...`` and a weight ``F(n) >= 0`` per index, the
length of ``s`` is the least total weight of a factorization
``s = s_{n_1} ... s_{n_m}``.  :func:`length_table` computes it over a ball by
best-first search on the right Cayley graph, :func:`brute_force_length`
independently by enumerating words.
"""
from __future__ import annotations

import heapq
import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

import numpy as np

from . import _kernels
from .core import (
    CayleyTableOracle,
    Element,
    GeneratorList,
    LeftZeroOracle,
    MultiplicationOracle,
    SemigroupError,
    extend_closure,
)

TOL = 1e-9
MAX_BRUTE_FORCE_WORDS = 10**7


class ZeroWeightOnInfinite(SemigroupError, ValueError):
    pass


class EnumerationTooLarge(SemigroupError, ValueError):
    pass


class OutsideBall(SemigroupError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "element outside the ball"


class NotLocallyFiniteEvidence(SemigroupError, RuntimeError):
    pass


class PhiUndefined(SemigroupError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "phi undefined"


def as_weight(x):
    """Normalize a weight value: ints stay ints, rationals become Fractions
    (or ints when integral), floats stay floats unless integral.

    Strings such as ``"3/2"`` are parsed as fractions.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not weights")
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, (int, np.integer)):
        v = int(x)
    elif isinstance(x, Rational):
        v = Fraction(x)
        if v.denominator == 1:
            v = int(v)
    else:
        v = float(x)
        if not math.isfinite(v):
            raise ValueError(f"weight must be finite, got {x!r}")
        if v.is_integer():
            v = int(v)
    if v < 0:
        raise ValueError(f"weights must be non-negative, got {x!r}")
    return v


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


@dataclass(frozen=True)
class WeightFunction:
    """A non-negative weight on generator indices ``1, 2, ...``.

    ``explicit``: ``F(n) = values[n-1]`` for ``n <= len(values)``;
    ``affine``: ``F(n) = a*n + b``;
    ``staircase_of``: ``F(n) = base(n) + n``.
    """

    kind: str
    values: tuple = ()
    a: object = 0
    b: object = 0
    base: "WeightFunction | None" = None

    @classmethod
    def explicit(cls, values) -> "WeightFunction":
        vals = tuple(as_weight(v) for v in values)
        if not vals:
            raise ValueError("explicit weight needs at least one value")
        return cls("explicit", values=vals)

    @classmethod
    def affine(cls, a=1, b=0) -> "WeightFunction":
        return cls("affine", a=as_weight(a), b=as_weight(b))

    @classmethod
    def constant(cls, c) -> "WeightFunction":
        return cls.affine(0, c)

    @classmethod
    def staircase_of(cls, base: "WeightFunction") -> "WeightFunction":
        return cls("staircase_of", base=base)

    def __call__(self, n: int):
        if n < 1:
            raise IndexError(f"weight index {n} must be >= 1")
        if self.kind == "explicit":
            if n > len(self.values):
                raise IndexError(f"weight index {n} beyond the {len(self.values)} given values")
            return self.values[n - 1]
        if self.kind == "affine":
            return self.a * n + self.b
        if self.kind == "staircase_of":
            return self.base(n) + n
        raise ValueError(f"unknown weight kind {self.kind!r}")

    @property
    def integer_valued(self) -> bool:
        if self.kind == "explicit":
            return all(isinstance(v, int) for v in self.values)
        if self.kind == "affine":
            return isinstance(self.a, int) and isinstance(self.b, int)
        return self.base.integer_valued

    @property
    def exact(self) -> bool:
        if self.kind == "explicit":
            return all(_is_exact(v) for v in self.values)
        if self.kind == "affine":
            return _is_exact(self.a) and _is_exact(self.b)
        return self.base.exact

    @property
    def size(self) -> int | None:
        """Number of indices where F is defined, None if unbounded."""
        if self.kind == "explicit":
            return len(self.values)
        if self.kind == "staircase_of":
            return self.base.size
        return None

    def max_index(self, radius) -> int | None:
        """An index bound: every n with F(n) <= radius satisfies n <= bound.

        None when infinitely many indices may have weight within ``radius``.
        """
        if self.kind == "explicit":
            return len(self.values)
        if self.kind == "affine":
            if radius < self.b:
                return 0
            if self.a == 0 or math.isinf(radius):
                return None
            return int(math.floor((radius - self.b) / self.a + TOL))
        own = None if math.isinf(radius) else int(math.floor(radius + TOL))
        inner = self.base.max_index(radius)
        if own is None:
            return inner
        return own if inner is None else min(own, inner)

    def scaled(self, c) -> "WeightFunction":
        c = as_weight(c)
        if self.kind == "explicit":
            return WeightFunction.explicit([c * v for v in self.values])
        if self.kind == "affine":
            return WeightFunction.affine(c * self.a, c * self.b)
        raise ValueError("only explicit and affine weights can be scaled")

    def describe(self) -> str:
        if self.kind == "explicit":
            return "F = (" + ", ".join(str(v) for v in self.values) + ")"
        if self.kind == "affine":
            return f"F(n) = {self.a}*n + {self.b}"
        return f"F(n) = G(n) + n where G: {self.base.describe()}"


class LengthEntry(NamedTuple):
    length: object
    witness: tuple


class LengthTable:
    """Lengths of the elements settled by a ball enumeration.

    ``complete_to_radius`` is True when every element of length at most
    ``radius`` is present.  Lengths of absent elements are unknown.
    """

    def __init__(self, oracle: MultiplicationOracle, gens: GeneratorList,
                 weight: WeightFunction | None, radius, entries: Mapping,
                 complete_to_radius: bool = True, exact: bool | None = None):
        self.oracle = oracle
        self.gens = gens
        self.weight = weight
        self.radius = radius
        self._by_key = {}
        for k, v in entries.items():
            k = k.key if isinstance(k, Element) else k
            self._by_key[k] = v if isinstance(v, LengthEntry) else LengthEntry(v[0], tuple(v[1]))
        self.complete_to_radius = complete_to_radius
        if exact is None:
            exact = all(_is_exact(e.length) for e in self._by_key.values())
        self.exact = exact

    @property
    def entries(self) -> dict:
        return {Element(k, e.witness): e for k, e in self._by_key.items()}

    def __len__(self):
        return len(self._by_key)

    def __contains__(self, x):
        return (x.key if isinstance(x, Element) else x) in self._by_key

    def __iter__(self):
        return iter(self.elements())

    def keys(self):
        return self._by_key.keys()

    def elements(self) -> list[Element]:
        return [Element(k, e.witness) for k, e in self._by_key.items()]

    def items(self):
        return self._by_key.items()

    def entry(self, x) -> LengthEntry:
        k = x.key if isinstance(x, Element) else x
        try:
            return self._by_key[k]
        except KeyError:
            raise OutsideBall(f"{k!r} is not settled in this ball (length unknown, "
                              f"> {self.radius} or beyond budget)") from None

    def length(self, x):
        return self.entry(x).length

    def get(self, x, default=None):
        k = x.key if isinstance(x, Element) else x
        e = self._by_key.get(k)
        return default if e is None else e.length

    def witness(self, x) -> tuple:
        return self.entry(x).witness

    def ball_size(self, radius) -> int:
        lim = radius + (0 if self.exact else TOL)
        return sum(1 for e in self._by_key.values() if e.length <= lim)

    def __repr__(self):
        return (f"<LengthTable {len(self)} elements radius={self.radius} "
                f"complete={self.complete_to_radius}>")


def _locally_finite_by_rule(oracle) -> bool:
    return oracle.finite or isinstance(oracle, LeftZeroOracle)


def _candidate_generators(oracle, gens, F, radius, budget):
    """(index, key, weight) for generators that may lie in the ball, and
    whether the candidate set had to be cut by ``budget``."""
    bounds = [b for b in (gens.count, F.max_index(radius), F.size) if b is not None]
    truncated = False
    if bounds:
        n_max = min(bounds)
    elif budget is not None:
        n_max = budget
        truncated = True
    else:
        raise ZeroWeightOnInfinite(
            "infinitely many generators have weight within the radius; give a budget "
            "or a weight with finitely many small values")
    limit = radius if F.exact else radius + TOL
    out = []
    for n in range(1, n_max + 1):
        c = F(n)
        if c <= limit:
            out.append((n, gens.key(n), c))
    return out, truncated


def length_table(oracle: MultiplicationOracle, gens: GeneratorList, F: WeightFunction,
                 radius=math.inf, budget: int | None = None, within=None) -> LengthTable:
    """Weighted lengths of all elements within ``radius``.

    Elements are settled in order of (length, canonical key); each stores an
    optimal factorization.  ``budget`` caps the number of settled elements
    (the table is then marked incomplete).  ``within`` restricts the search
    to a given set of elements, every prefix product included.

    >>> from .core import SemigroupSpec, make_oracle
    >>> free2 = make_oracle(SemigroupSpec.free(2))
    >>> t = length_table(free2, free2.default_generators(), WeightFunction.explicit([1, 2]), 10)
    >>> t.length((1, 1, 2))
    4
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if budget is not None and budget < 1:
        raise ValueError("budget must be positive")
    cands, truncated = _candidate_generators(oracle, gens, F, radius, budget)
    within_keys = None
    if within is not None:
        within_keys = {w.key if isinstance(w, Element) else w for w in within}
        cands = [c for c in cands if c[1] in within_keys]
    if (not _locally_finite_by_rule(oracle) and budget is None and within is None
            and any(c[2] == 0 for c in cands)):
        raise ZeroWeightOnInfinite(
            f"generator(s) {[c[0] for c in cands if c[2] == 0]} have zero weight in an "
            f"infinite {oracle.kind} semigroup; the ball would be infinite")
    exact = F.exact
    use_kernel = (isinstance(oracle, CayleyTableOracle) and within is None
                  and all(isinstance(c[2], (int, float)) for c in cands))
    if use_kernel:
        entries, interrupted = _table_dijkstra(oracle, cands, radius, budget)
    else:
        entries, interrupted = _heap_dijkstra(oracle, cands, radius, budget, exact, within_keys)
    table = LengthTable(oracle, gens, F, radius, entries,
                        complete_to_radius=not (interrupted or truncated), exact=exact)
    return table


def _heap_dijkstra(oracle, cands, radius, budget, exact, within):
    mul = oracle.mul
    sk = oracle.sort_key
    limit = radius if exact else radius + TOL
    dist = {}
    parent = {}
    heap = []
    for n, k, c in cands:
        if k not in dist or c < dist[k]:
            dist[k] = c
            parent[k] = (None, n)
            heapq.heappush(heap, (c, sk(k), k))
    witness = {}
    out = {}
    interrupted = False
    while heap:
        c, _, k = heapq.heappop(heap)
        if k in out or c != dist[k]:
            continue
        if budget is not None and len(out) >= budget:
            interrupted = True
            break
        prev, n = parent[k]
        w = (n,) if prev is None else witness[prev] + (n,)
        witness[k] = w
        out[k] = LengthEntry(c, w)
        for n2, g, f in cands:
            y = mul(k, g)
            c2 = c + f
            if c2 > limit or y in out:
                continue
            if within is not None and y not in within:
                continue
            old = dist.get(y)
            if old is None or c2 < old:
                dist[y] = c2
                parent[y] = (k, n2)
                heapq.heappush(heap, (c2, sk(y), y))
    return out, interrupted


def _table_dijkstra(oracle, cands, radius, budget):
    ints = all(isinstance(c[2], int) for c in cands)
    gens = np.asarray([c[1] for c in cands], dtype=np.int64)
    weights = np.asarray([float(c[2]) for c in cands], dtype=np.float64)
    idx = [c[0] for c in cands]
    tol = 0.0 if ints else TOL
    rad = float(radius)
    bud = oracle.order + 1 if budget is None else budget
    order, dist, parent, via, interrupted = _kernels.dijkstra(
        oracle.table, gens, weights, rad, bud, tol)
    out = {}
    for s in order.tolist():
        p = int(parent[s])
        n = idx[int(via[s])]
        w = (n,) if p < 0 else out[p].witness + (n,)
        d = float(dist[s])
        out[s] = LengthEntry(int(round(d)) if ints else d, w)
    return out, bool(interrupted)


def brute_force_length(oracle: MultiplicationOracle, gens: GeneratorList, F: WeightFunction,
                       s, max_factors: int, max_index: int | None = None):
    """Least ``sum F(n_k)`` over all words of at most ``max_factors`` letters
    with indices at most ``max_index`` whose product is ``s``; None if no
    such word exists."""
    target = oracle.validate(s.key if isinstance(s, Element) else s)
    bounds = [b for b in (max_index, gens.count, F.size) if b is not None]
    if not bounds:
        raise EnumerationTooLarge("max_index is required for an unbounded generator list")
    g = min(bounds)
    words = sum(g**m for m in range(1, max_factors + 1))
    if words > MAX_BRUTE_FORCE_WORDS:
        raise EnumerationTooLarge(f"{words} words exceed the limit of {MAX_BRUTE_FORCE_WORDS}")
    letters = [(n, gens.key(n), F(n)) for n in range(1, g + 1)]
    if isinstance(oracle, CayleyTableOracle) and all(isinstance(c[2], (int, float)) for c in letters):
        best = _kernels.brute_force(
            oracle.table, np.asarray([c[1] for c in letters], dtype=np.int64),
            np.asarray([float(c[2]) for c in letters]), max_factors)
        v = float(best[target])
        if math.isinf(v):
            return None
        return int(round(v)) if all(isinstance(c[2], int) for c in letters) else v
    mul = oracle.mul
    best = None
    stack = [(k, c, 1) for _, k, c in letters]
    while stack:
        k, c, m = stack.pop()
        if best is not None and c >= best:
            continue  # weights are non-negative
        if k == target:
            best = c
            continue
        if m < max_factors:
            stack.extend((mul(k, k2), c + c2, m + 1) for _, k2, c2 in letters)
    return best


class Violation(NamedTuple):
    s: Element
    t: Element
    st: Element
    excess: object


def check_subadditivity(table: LengthTable, oracle: MultiplicationOracle | None = None) -> list[Violation]:
    """All pairs of settled elements with ``l(st) > l(s) + l(t)``."""
    oracle = oracle or table.oracle
    mul = oracle.mul
    tol = 0 if table.exact else TOL
    items = list(table.items())
    lookup = table._by_key
    out = []
    for s, es in items:
        for t, et in items:
            st = mul(s, t)
            e = lookup.get(st)
            if e is None:
                continue
            excess = e.length - (es.length + et.length)
            if excess > tol:
                out.append(Violation(Element(s), Element(t), Element(st), excess))
    return out


def _phi_value(phi, key):
    if callable(phi) and not isinstance(phi, Mapping):
        v = phi(Element(key))
    else:
        try:
            v = phi[Element(key)]
        except KeyError:
            try:
                v = phi[key]
            except KeyError:
                raise PhiUndefined(f"phi is not defined at {key!r}") from None
    if v < 1:
        raise ValueError(f"phi must take values >= 1, got {v!r} at {key!r}")
    return v


def _log_upper(v) -> float:
    # Smallest float x with exp(x) >= v, starting from log(v).
    x = math.log(v)
    while math.exp(x) < v:
        x = math.nextafter(x, math.inf)
    return max(x, 0.0)


def dominating_weight(oracle: MultiplicationOracle, gens: GeneratorList, phi, depth: int,
                      budget: int) -> tuple[WeightFunction, GeneratorList]:
    """A non-decreasing weight ``F`` with ``phi(s) <= exp(l_F(s))`` on the
    subsemigroup generated by the first ``depth`` generators.

    Generators already in the subsemigroup spanned by earlier ones are
    dropped; ``F(n)`` is the running maximum of ``log phi`` over the
    subsemigroup generated by the first ``n`` kept generators.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    stop = depth if gens.count is None else min(depth, gens.count)
    closed: list = []
    closed_set: set = set()
    kept: list = []
    values: list = []
    running = 0.0
    for n in range(1, stop + 1):
        g = oracle.validate(gens.key(n))
        if g in closed_set:
            continue
        grown, finite = extend_closure(oracle, closed, kept, g, budget)
        if not finite:
            raise NotLocallyFiniteEvidence(
                f"the subsemigroup generated by the first {n} generators exceeds {budget} elements")
        for k in grown[len(closed):]:
            running = max(running, _log_upper(_phi_value(phi, k)))
        closed = grown
        closed_set.update(grown)
        kept.append(g)
        values.append(running)
    return WeightFunction.explicit(values), GeneratorList(kept, name="thinned")


class DominationViolation(NamedTuple):
    s: Element
    phi: float
    bound: float


def verify_domination(table: LengthTable, phi, base: float = math.e) -> list[DominationViolation]:
    """Settled elements with ``phi(s) > base**l(s) + 1e-9``.

    Elements where a mapping ``phi`` is undefined are skipped.
    """
    out = []
    for k, e in table.items():
        try:
            v = _phi_value(phi, k)
        except PhiUndefined:
            continue
        bound = base ** float(e.length)
        if v > bound + TOL:
            out.append(DominationViolation(Element(k, e.witness), v, bound))
    return out
