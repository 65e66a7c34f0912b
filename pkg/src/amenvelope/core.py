"""Concrete semigroups, a uniform multiplication oracle and bounded closures.

Five kinds of semigroup are supported:

``cayley_table``
    a finite semigroup given by its multiplication table on ``0..order-1``;
``transformations``
    the semigroup generated by a list of self-maps of ``0..degree-1``,
    composed left to right (``(x*y)[i] == y[x[i]]``);
``free``
    the free semigroup on ``rank`` letters, elements are non-empty words;
``naturals_additive``
    the positive integers under addition;
``left_zero``
    the countable left-zero semigroup ``{1, 2, ...}`` with ``s*t == s``.

Elements travel as :class:`Element` values wrapping a hashable *key*.  All
algorithms work on raw keys internally and wrap them at the boundary.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import _kernels

KINDS = ("cayley_table", "transformations", "free", "naturals_additive", "left_zero")
INFINITE_KINDS = ("free", "naturals_additive", "left_zero")

ASSOCIATIVITY_EXHAUSTIVE_LIMIT = 64
ASSOCIATIVITY_SAMPLES = 100_000


class SemigroupError(Exception):
    """Base class for errors raised by this package."""


class MalformedSpec(SemigroupError, ValueError):
    pass


class NonAssociativeTable(SemigroupError, ValueError):
    def __init__(self, triple):
        self.triple = tuple(int(v) for v in triple)
        i, j, k = self.triple
        super().__init__(f"table is not associative at (x, y, z) = ({i}, {j}, {k})")


class KindMismatch(SemigroupError, TypeError):
    pass


class NotClosed(SemigroupError, ValueError):
    pass


@dataclass(frozen=True)
class SemigroupSpec:
    kind: str
    order: int | None = None
    table: tuple | None = None
    degree: int | None = None
    generators: tuple | None = None
    rank: int | None = None

    @classmethod
    def cayley_table(cls, table) -> "SemigroupSpec":
        rows = tuple(tuple(int(v) for v in row) for row in table)
        return cls("cayley_table", order=len(rows), table=rows)

    @classmethod
    def transformations(cls, degree: int, generators) -> "SemigroupSpec":
        gens = tuple(tuple(int(v) for v in g) for g in generators)
        return cls("transformations", degree=int(degree), generators=gens)

    @classmethod
    def free(cls, rank: int) -> "SemigroupSpec":
        return cls("free", rank=int(rank))

    @classmethod
    def naturals_additive(cls) -> "SemigroupSpec":
        return cls("naturals_additive")

    @classmethod
    def left_zero(cls) -> "SemigroupSpec":
        return cls("left_zero")


@dataclass(frozen=True, eq=False, order=False)
class Element:
    """A semigroup element, identified by its key alone.

    ``witness`` optionally records a factorization as a tuple of 1-based
    generator indices; it does not take part in equality or hashing.
    """

    key: Hashable
    witness: tuple[int, ...] | None = field(default=None, compare=False)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.key == other.key
        return NotImplemented

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        if isinstance(other, Element):
            return _order_key(self.key) < _order_key(other.key)
        return NotImplemented

    def __repr__(self):
        if self.witness is None:
            return f"Element({self.key!r})"
        return f"Element({self.key!r}, witness={self.witness!r})"


def _order_key(key):
    # Shortlex on tuples so that words and maps order by length first.
    if isinstance(key, tuple):
        return (len(key), key)
    return (0, key)


def _as_key(x):
    return x.key if isinstance(x, Element) else x


class GeneratorList:
    """A 1-based generator sequence ``s_1, s_2, ...``.

    Either an explicit finite list of keys (repetitions allowed) or a rule
    ``n -> key`` for a countably infinite sequence, optionally truncated to
    its first ``count`` terms.
    """

    def __init__(self, keys: Sequence | None = None, rule=None, count: int | None = None,
                 name: str = "explicit"):
        if (keys is None) == (rule is None):
            raise ValueError("give exactly one of keys or rule")
        if keys is not None:
            self._keys = tuple(_as_key(k) for k in keys)
            if not self._keys:
                raise MalformedSpec("generator list is empty")
            self._rule = None
            self.count = len(self._keys)
        else:
            self._keys = None
            self._rule = rule
            if count is not None and count < 1:
                raise MalformedSpec("generator count must be positive")
            self.count = count
        self.name = name

    @property
    def finite(self) -> bool:
        return self.count is not None

    @property
    def rule_based(self) -> bool:
        return self._rule is not None

    def __len__(self):
        if self.count is None:
            raise TypeError("infinite generator list has no length")
        return self.count

    def __bool__(self):
        return self.count != 0

    def key(self, n: int):
        if n < 1 or (self.count is not None and n > self.count):
            raise IndexError(f"generator index {n} out of range")
        if self._keys is not None:
            return self._keys[n - 1]
        return self._rule(n)

    def __getitem__(self, n: int) -> Element:
        return Element(self.key(n), (n,))

    def keys(self, upto: int | None = None) -> list:
        stop = self.count if upto is None else (upto if self.count is None else min(upto, self.count))
        if stop is None:
            raise TypeError("infinite generator list needs an explicit bound")
        return [self.key(n) for n in range(1, stop + 1)]

    def truncate(self, count: int) -> "GeneratorList":
        if self._keys is not None:
            return GeneratorList(self._keys[:count], name=self.name)
        return GeneratorList(rule=self._rule, count=count, name=self.name)

    def __eq__(self, other):
        if not isinstance(other, GeneratorList):
            return NotImplemented
        if self._keys is not None or other._keys is not None:
            return self._keys == other._keys
        return self.name == other.name and self.count == other.count and self._rule is other._rule

    def __hash__(self):
        return hash((self._keys, self.name, self.count))

    def __repr__(self):
        if self._keys is not None:
            return f"GeneratorList({list(self._keys)!r})"
        return f"GeneratorList(rule={self.name!r}, count={self.count!r})"


@dataclass(frozen=True)
class ClosureResult:
    """Outcome of a bounded closure.

    ``finite`` is True when a product-closed set was reached; otherwise the
    budget ran out and ``elements`` holds the first ``budget`` discoveries.
    ``elements`` is in discovery order (round, then canonical key).
    """

    finite: bool
    elements: tuple[Element, ...]
    budget: int

    @property
    def exhausted(self) -> bool:
        return not self.finite

    @property
    def order(self) -> int | None:
        return len(self.elements) if self.finite else None

    def keys(self) -> set:
        return {e.key for e in self.elements}

    def __len__(self):
        return len(self.elements)


class MultiplicationOracle:
    """Product, equality and canonical ordering for one semigroup."""

    kind: str = ""
    finite: bool = False

    def mul(self, x, y):
        """Product of two raw keys, without validation."""
        raise NotImplementedError

    def validate(self, key):
        """Return the normalized key, or raise :class:`KindMismatch`."""
        raise NotImplementedError

    def sort_key(self, key):
        return _order_key(key)

    def element(self, key) -> Element:
        return Element(self.validate(_as_key(key)))

    def product(self, x: Element, y: Element) -> Element:
        return Element(self.mul(self.validate(_as_key(x)), self.validate(_as_key(y))))

    def default_generators(self) -> GeneratorList:
        raise NotImplementedError

    def known_finite_generators(self) -> GeneratorList | None:
        """A finite generating set known by construction, if any."""
        return None

    def prefix_hull(self, keys: Iterable) -> set | None:
        """A finite set holding every prefix product of every factorization
        of the given elements, when the kind admits one; else None."""
        return None

    @property
    def order(self) -> int | None:
        return None

    def elements(self) -> list[Element]:
        raise TypeError(f"{self.kind} semigroup is infinite")

    def __repr__(self):
        return f"<{type(self).__name__}>"


class CayleyTableOracle(MultiplicationOracle):
    kind = "cayley_table"
    finite = True

    def __init__(self, table: np.ndarray):
        self.table = table
        self.table.setflags(write=False)
        self._rows = table.tolist()

    def mul(self, x, y):
        return self._rows[x][y]

    def validate(self, key):
        if isinstance(key, (bool, np.bool_)) or not isinstance(key, (int, np.integer)):
            raise KindMismatch(f"cayley_table elements are integer indices, got {key!r}")
        key = int(key)
        if not 0 <= key < self.table.shape[0]:
            raise KindMismatch(f"element index {key} outside 0..{self.table.shape[0] - 1}")
        return key

    def sort_key(self, key):
        return key

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def elements(self) -> list[Element]:
        return [Element(i) for i in range(self.order)]

    def default_generators(self) -> GeneratorList:
        return GeneratorList(list(range(self.order)), name="all")

    def known_finite_generators(self):
        return self.default_generators()

    def __repr__(self):
        return f"<CayleyTableOracle order={self.order}>"


class TransformationOracle(MultiplicationOracle):
    kind = "transformations"
    finite = True

    def __init__(self, degree: int, generators: tuple):
        self.degree = degree
        self.generators = generators
        self._elements = None

    def mul(self, x, y):
        return tuple([y[i] for i in x])

    def validate(self, key):
        try:
            key = tuple(int(v) for v in key)
        except TypeError:
            raise KindMismatch(f"transformation expected, got {key!r}") from None
        if len(key) != self.degree or any(not 0 <= v < self.degree for v in key):
            raise KindMismatch(f"{key!r} is not a map on 0..{self.degree - 1}")
        return key

    def sort_key(self, key):
        return key

    def _closure(self):
        if self._elements is None:
            res = _right_closure(self, list(self.generators), None)
            self._elements = [Element(k) for k in res[0]]
        return self._elements

    @property
    def order(self) -> int:
        return len(self._closure())

    def elements(self) -> list[Element]:
        return sorted(self._closure())

    def default_generators(self) -> GeneratorList:
        return GeneratorList(list(self.generators), name="generators")

    def known_finite_generators(self):
        return self.default_generators()

    def __repr__(self):
        return f"<TransformationOracle degree={self.degree} gens={len(self.generators)}>"


class FreeOracle(MultiplicationOracle):
    kind = "free"

    def __init__(self, rank: int):
        self.rank = rank

    def mul(self, x, y):
        return x + y

    def validate(self, key):
        if isinstance(key, str):
            key = tuple(ord(c) - ord("a") + 1 for c in key)
        try:
            key = tuple(key)
        except TypeError:
            raise KindMismatch(f"word expected, got {key!r}") from None
        if not key or any(isinstance(v, bool) or not isinstance(v, (int, np.integer))
                          or not 1 <= v <= self.rank for v in key):
            raise KindMismatch(f"{key!r} is not a non-empty word over 1..{self.rank}")
        return tuple(int(v) for v in key)

    def default_generators(self) -> GeneratorList:
        return GeneratorList([(i,) for i in range(1, self.rank + 1)], name="letters")

    def known_finite_generators(self):
        return self.default_generators()

    def prefix_hull(self, keys):
        out = set()
        for w in keys:
            out.update(w[:i] for i in range(1, len(w) + 1))
        return out

    def __repr__(self):
        return f"<FreeOracle rank={self.rank}>"


def _positive_int(kind, key):
    if isinstance(key, (bool, np.bool_)) or not isinstance(key, (int, np.integer)) or key < 1:
        raise KindMismatch(f"{kind} elements are positive integers, got {key!r}")
    return int(key)


def _nth(n):
    return n


class NaturalsOracle(MultiplicationOracle):
    kind = "naturals_additive"

    def mul(self, x, y):
        return x + y

    def validate(self, key):
        return _positive_int(self.kind, key)

    def default_generators(self) -> GeneratorList:
        return GeneratorList(rule=_nth, name="naturals")

    def known_finite_generators(self):
        return GeneratorList([1], name="one")

    def prefix_hull(self, keys):
        top = max(keys, default=0)
        return set(range(1, top + 1))

    def __repr__(self):
        return "<NaturalsOracle>"


class LeftZeroOracle(MultiplicationOracle):
    kind = "left_zero"

    def mul(self, x, y):
        return x

    def validate(self, key):
        return _positive_int(self.kind, key)

    def default_generators(self) -> GeneratorList:
        return GeneratorList(rule=_nth, name="left_zero")

    def prefix_hull(self, keys):
        # Every prefix of a factorization of s equals s.
        return set(keys)

    def __repr__(self):
        return "<LeftZeroOracle>"


def make_oracle(spec: SemigroupSpec, *, assoc_limit: int = ASSOCIATIVITY_EXHAUSTIVE_LIMIT,
                seed: int = 0) -> MultiplicationOracle:
    """Build a validated oracle for ``spec``.

    Cayley tables are checked for associativity exhaustively up to
    ``assoc_limit`` elements and by random sampling above it.
    """
    kind = spec.kind
    if kind == "cayley_table":
        if not spec.table:
            raise MalformedSpec("cayley_table needs a non-empty table")
        order = len(spec.table)
        if spec.order is not None and spec.order != order:
            raise MalformedSpec(f"order {spec.order} does not match table with {order} rows")
        if any(len(row) != order for row in spec.table):
            raise MalformedSpec("cayley table must be square")
        table = np.asarray(spec.table, dtype=np.int64).reshape(order, order)
        if table.min() < 0 or table.max() >= order:
            raise MalformedSpec(f"table entries must lie in 0..{order - 1}")
        if order <= assoc_limit:
            triple = _kernels.associativity_violation(table)
        else:
            rng = np.random.default_rng(seed)
            triples = rng.integers(0, order, size=(ASSOCIATIVITY_SAMPLES, 3), dtype=np.int64)
            triple = _kernels.associativity_violation_sampled(table, triples)
        if triple[0] >= 0:
            raise NonAssociativeTable(triple)
        return CayleyTableOracle(table)
    if kind == "transformations":
        degree = spec.degree
        if degree is None or degree < 1:
            raise MalformedSpec("transformations need a positive degree")
        if not spec.generators:
            raise MalformedSpec("transformations need at least one generator")
        for g in spec.generators:
            if len(g) != degree or any(not 0 <= v < degree for v in g):
                raise MalformedSpec(f"generator {list(g)} is not a map on 0..{degree - 1}")
        return TransformationOracle(degree, tuple(tuple(g) for g in spec.generators))
    if kind == "free":
        if spec.rank is None or spec.rank < 1:
            raise MalformedSpec("free semigroup needs a positive rank")
        return FreeOracle(spec.rank)
    if kind == "naturals_additive":
        return NaturalsOracle()
    if kind == "left_zero":
        return LeftZeroOracle()
    raise MalformedSpec(f"unknown semigroup kind {kind!r}")


def product(oracle: MultiplicationOracle, x: Element, y: Element) -> Element:
    return oracle.product(x, y)


def _right_closure(oracle, seeds: list, budget: int | None):
    """Right-multiplication BFS from ``seeds``; returns (keys, finite)."""
    sk = oracle.sort_key
    gens = sorted(set(seeds), key=sk)
    if isinstance(oracle, CayleyTableOracle):
        order, _ = _kernels.closure(oracle.table, np.asarray(gens, dtype=np.int64))
        keys = order.tolist()
        if budget is not None and len(keys) > budget:
            return keys[:budget], False
        return keys, True
    mul = oracle.mul
    seen = set(gens)
    if budget is not None and len(gens) > budget:
        return gens[:budget], False
    out = list(gens)
    frontier = gens
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = sorted(new, key=sk)
        if budget is not None and len(out) + len(frontier) > budget:
            out.extend(frontier[:budget - len(out)])
            return out, False
        out.extend(frontier)
    return out, True


def closure(oracle: MultiplicationOracle, seeds: Iterable, budget: int) -> ClosureResult:
    """Smallest product-closed superset of ``seeds``, if it has at most
    ``budget`` elements.

    >>> lz = make_oracle(SemigroupSpec.left_zero())
    >>> closure(lz, [Element(1), Element(2)], 10).order
    2
    """
    keys = [oracle.validate(_as_key(s)) for s in seeds]
    if not keys:
        raise ValueError("closure needs at least one seed")
    if budget < 1:
        raise ValueError("budget must be positive")
    out, finite = _right_closure(oracle, keys, budget)
    return ClosureResult(finite, tuple(Element(k) for k in out), budget)


def generated_subsemigroup(oracle: MultiplicationOracle, subset: Iterable,
                           budget: int) -> ClosureResult:
    """The subsemigroup generated by ``subset``, within ``budget`` elements."""
    return closure(oracle, subset, budget)


def extend_closure(oracle: MultiplicationOracle, closed: Sequence, gens: Sequence, new,
                   budget: int | None = None) -> tuple[list, bool]:
    """Close ``closed`` (generated by ``gens``) under one extra generator.

    The result is ``closed`` followed by the words containing ``new``: those
    are ``u*new`` for ``u`` in ``closed`` or empty, right-multiplied by any
    generator.  Works on raw keys; returns (keys, finite).
    """
    sk = oracle.sort_key
    mul = oracle.mul
    seen = set(closed)
    if new in seen:
        return list(closed), True
    allgens = list(gens) + [new]
    start = {new}
    start.update(mul(u, new) for u in closed)
    start -= seen
    out = list(closed)
    frontier = sorted(start, key=sk)
    seen.update(frontier)
    while frontier:
        if budget is not None and len(out) + len(frontier) > budget:
            out.extend(frontier[:budget - len(out)])
            return out, False
        out.extend(frontier)
        nxt = []
        for x in frontier:
            for g in allgens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = sorted(nxt, key=sk)
    return out, True


def detect_identity(oracle: MultiplicationOracle, elements: Iterable | None = None) -> Element | None:
    """Two-sided identity of a finite product-closed set, if any.

    With ``elements=None`` the whole semigroup is used; the infinite
    built-ins have no identity by construction.
    """
    if elements is None:
        if oracle.kind in INFINITE_KINDS:
            return None
        keys = [e.key for e in oracle.elements()]
    else:
        if isinstance(elements, ClosureResult):
            if not elements.finite:
                raise NotClosed("closure was exhausted; set is not known to be closed")
            elements = elements.elements
        keys = [oracle.validate(_as_key(e)) for e in elements]
    keyset = set(keys)
    mul = oracle.mul
    for x in keys:
        for y in keys:
            if mul(x, y) not in keyset:
                raise NotClosed(f"product of {x!r} and {y!r} leaves the set")
    for e in sorted(keyset, key=oracle.sort_key):
        if all(mul(e, x) == x and mul(x, e) == x for x in keys):
            return Element(e)
    return None


def cayley_table_of(oracle: MultiplicationOracle, elements: Sequence) -> SemigroupSpec:
    """Re-encode a finite product-closed set as a Cayley table.

    Elements are indexed in the given order.
    """
    keys = [_as_key(e) for e in elements]
    index = {k: i for i, k in enumerate(keys)}
    try:
        rows = [[index[oracle.mul(x, y)] for y in keys] for x in keys]
    except KeyError as exc:
        raise NotClosed(f"set is not product-closed: {exc.args[0]!r} escapes") from None
    return SemigroupSpec.cayley_table(rows)


def random_finite_semigroup(rng: random.Random, max_order: int = 6, degree: int = 4,
                            tries: int = 500) -> SemigroupSpec:
    """A random associative Cayley table of order at most ``max_order``.

    The order is drawn uniformly from ``1..max_order``; the table is the
    closure of one to three random transformations of degree at most
    ``degree`` that reaches that order, re-encoded with elements in sorted
    order.  If no draw hits the target, the first small closure is used.
    """
    target = rng.randint(1, max_order)
    fallback = None
    for _ in range(tries):
        d = rng.randint(1 if target == 1 else 2, max(degree, 2))
        gens = [tuple(rng.randrange(d) for _ in range(d)) for _ in range(rng.randint(1, 3))]
        oracle = TransformationOracle(d, tuple(gens))
        keys, finite = _right_closure(oracle, gens, max_order)
        if not finite:
            continue
        if len(keys) == target:
            return cayley_table_of(oracle, sorted(keys))
        if fallback is None:
            fallback = cayley_table_of(oracle, sorted(keys))
    if fallback is None:
        raise RuntimeError("no small semigroup found")
    return fallback


def random_triples_associative(oracle: MultiplicationOracle, keys: Sequence, samples: int,
                               seed: int = 0) -> tuple | None:
    """First sampled triple violating associativity, or None."""
    rng = random.Random(seed)
    keys = list(keys)
    mul = oracle.mul
    for _ in range(samples):
        x, y, z = rng.choice(keys), rng.choice(keys), rng.choice(keys)
        if mul(mul(x, y), z) != mul(x, mul(y, z)):
            return x, y, z
    return None


__all__ = [
    "ClosureResult", "Element", "GeneratorList", "KindMismatch", "MalformedSpec",
    "MultiplicationOracle", "NonAssociativeTable", "NotClosed", "SemigroupError",
    "SemigroupSpec", "cayley_table_of", "closure", "detect_identity",
    "extend_closure", "generated_subsemigroup", "make_oracle", "product",
    "random_finite_semigroup",
]
