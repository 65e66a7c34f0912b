"""Finite witnesses for nuclearity of the weighted series space.

For an integer weight ``F1`` the staircase ``F2(n) = F1(n) + n`` makes every
length gap ``l_F2(s) - l_F1(s)`` a positive integer.  The elements with gap
``n`` number at most ``2**n - 1`` (compositions with total at most ``n``), so
``sum_s exp(l_F1(s) - l_F2(s))`` is bounded by ``sum_n (2/e)**n = 2/(e-2)``.
Everything here is computed on a finite ball: census rows are lower bounds
and the sum is a partial sum.  A report is a witness, never a proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import Element, GeneratorList, MultiplicationOracle, SemigroupError
from .length import TOL, LengthTable, WeightFunction, length_table


class NotIntegerValued(SemigroupError, ValueError):
    pass


class WeightMismatch(SemigroupError, ValueError):
    pass


class OutOfRange(SemigroupError, ValueError):
    pass


class InvariantViolation(SemigroupError, RuntimeError):
    """A computed quantity contradicts an identity that must hold."""


class NonIntegerDefect(InvariantViolation):
    pass


class NonPositiveDefect(InvariantViolation):
    pass


MAX_COMPOSITION_ARG = 62


def staircase(F1: WeightFunction) -> WeightFunction:
    """``F2(n) = F1(n) + n`` for an integer-valued ``F1``."""
    if not F1.integer_valued:
        raise NotIntegerValued(f"staircase needs an integer-valued weight, got {F1.describe()}")
    return WeightFunction.staircase_of(F1)


def compositions(j: int):
    """Yield every composition of ``j`` (ordered tuples of positive parts)."""
    if j == 0:
        yield ()
        return
    for first in range(1, j + 1):
        for rest in compositions(j - first):
            yield (first,) + rest


def _check_arg(v: int):
    if not 1 <= v <= MAX_COMPOSITION_ARG:
        raise OutOfRange(f"argument must lie in 1..{MAX_COMPOSITION_ARG}, got {v}")


def compositions_count(j: int) -> int:
    _check_arg(j)
    return 1 << (j - 1)


def bounded_compositions_count(n: int) -> int:
    """Number of compositions with total at most ``n``: ``2**n - 1``."""
    _check_arg(n)
    return (1 << n) - 1


def nuclear_sum_bound() -> float:
    """``sum_{n>=1} (2/e)**n = 2/(e-2)``."""
    return 2.0 / (math.e - 2.0)


@dataclass(frozen=True)
class DefectWitness:
    element: Element
    defect: int
    index_sum: int
    witness: tuple
    dual_weight: float
    primal_weight: float


@dataclass(frozen=True)
class CensusRow:
    n: int
    count: int
    bound: int
    partial: bool = True

    @property
    def ok(self) -> bool:
        return self.count <= self.bound


@dataclass(frozen=True)
class NuclearityReport:
    F1: WeightFunction
    F2: WeightFunction
    radius: float
    complete: bool
    census: dict
    witnesses: tuple
    partial_nuclear_sum: float
    geometric_bound: float
    violations: tuple = field(default=())

    @property
    def rows(self) -> list[CensusRow]:
        top = max(self.census, default=0)
        return [CensusRow(n, self.census.get(n, 0), (1 << n) - 1) for n in range(1, top + 1)]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self):
        return len(self.witnesses)


def _same_weights(F1, F2, upto):
    for n in range(1, upto + 1):
        if F2(n) != F1(n) + n:
            return n
    return None


def defect_census(table1: LengthTable, table2: LengthTable,
                  oracle: MultiplicationOracle | None = None) -> NuclearityReport:
    """Group the elements of ``table2`` by their integer length gap.

    ``table2`` holds lengths for the staircase of ``table1``'s weight and
    ``table1`` must cover every element of ``table2``.  Structural errors
    (non-integer or non-positive gaps) raise; bound checks that can only fail
    through a bug are collected in ``violations``.
    """
    oracle = oracle or table2.oracle
    F1, F2 = table1.weight, table2.weight
    if F1 is None or F2 is None:
        raise WeightMismatch("both tables must carry their weight")
    if not F1.integer_valued:
        raise NotIntegerValued("the census needs an integer-valued F1")
    if table1.gens != table2.gens:
        raise WeightMismatch("tables use different generator lists")
    used = max((max(e.witness) for _, e in table2.items()), default=0)
    used = max(used, max((max(e.witness) for _, e in table1.items()), default=0))
    bad = _same_weights(F1, F2, used)
    if bad is not None:
        raise WeightMismatch(f"F2({bad}) != F1({bad}) + {bad}; F2 is not the staircase of F1")

    census: dict = {}
    witnesses = []
    terms = []
    violations = []
    seen_words: dict = {}
    for k, e2 in table2.items():
        try:
            e1 = table1.entry(k)
        except KeyError:
            raise WeightMismatch(f"table1 does not cover element {k!r}") from None
        gap = e2.length - e1.length
        if not isinstance(gap, int):
            raise NonIntegerDefect(f"length gap {gap!r} at {k!r} is not an integer")
        if gap <= 0:
            raise NonPositiveDefect(f"length gap {gap} at {k!r} is not positive")
        idx_sum = sum(e2.witness)
        if gap < idx_sum:
            violations.append(f"gap {gap} at {k!r} is below the index sum {idx_sum} of its witness")
        if e2.witness in seen_words:
            violations.append(f"witness {e2.witness} shared by {seen_words[e2.witness]!r} and {k!r}")
        seen_words[e2.witness] = k
        census[gap] = census.get(gap, 0) + 1
        dual = math.exp(-e2.length)
        primal = math.exp(e1.length)
        witnesses.append(DefectWitness(Element(k, e2.witness), gap, idx_sum, e2.witness,
                                       dual, primal))
        terms.append(math.exp(-gap))
    for n, c in sorted(census.items()):
        if c > (1 << n) - 1:
            violations.append(f"census |C_{n}| = {c} exceeds 2^{n} - 1")
    total = math.fsum(terms)
    bound = nuclear_sum_bound()
    if total > bound + TOL:
        violations.append(f"partial sum {total} exceeds {bound}")
    return NuclearityReport(F1, F2, table2.radius, table2.complete_to_radius,
                            dict(sorted(census.items())), tuple(witnesses), total, bound,
                            tuple(violations))


def primal_table(oracle: MultiplicationOracle, gens: GeneratorList, F1: WeightFunction,
                 table2: LengthTable, budget: int | None = None) -> LengthTable:
    """Lengths for ``F1`` on every element of ``table2``.

    For finite semigroups the whole semigroup is enumerated.  Otherwise the
    search runs inside the kind's prefix hull of ``table2`` when one exists
    (exact, since every factorization stays in the hull), or else over the
    ``F1``-ball of the same radius, which contains ``table2`` as ``F1 <= F2``.
    """
    if oracle.finite:
        return length_table(oracle, gens, F1, math.inf, budget)
    hull = oracle.prefix_hull(list(table2.keys()))
    if hull is not None:
        return length_table(oracle, gens, F1, table2.radius, budget, within=hull)
    return length_table(oracle, gens, F1, table2.radius, budget)


def nuclearity_report(oracle: MultiplicationOracle, gens: GeneratorList, F1: WeightFunction,
                      radius, budget: int | None = None) -> NuclearityReport:
    """Staircase, both length tables and the census in one call."""
    F2 = staircase(F1)
    t2 = length_table(oracle, gens, F2, radius, budget)
    t1 = primal_table(oracle, gens, F1, t2, budget)
    return defect_census(t1, t2, oracle)
