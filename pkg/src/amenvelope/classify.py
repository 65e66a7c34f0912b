"""Evidence-based placement of a semigroup in the finite / finitely generated /
locally finite trichotomy.

Finite semigroups give a Banach envelope (all weighted norms are
equivalent), finitely generated infinite ones a Frechet envelope that is not
(DF), and locally finite infinite ones a (DF) envelope that is not Frechet.
The classes only meet in the finite case.  The checks below look at bounded
closures and ball growth, so apart from the built-in kinds whose type is
known by construction every verdict is evidence, not proof.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    INFINITE_KINDS,
    ClosureResult,
    Element,
    GeneratorList,
    MultiplicationOracle,
    closure,
    generated_subsemigroup,
)
from .length import WeightFunction, length_table
from .normspace import NormComparison, comparison_constants

FINITE = "Finite"
FINITELY_GENERATED = "FinitelyGeneratedInfiniteEvidence"
LOCALLY_FINITE = "LocallyFiniteEvidence"
INCONCLUSIVE = "Inconclusive"

LABELS = {
    FINITE: "Banach-type: all weighted l1 norms equivalent",
    FINITELY_GENERATED: "Frechet, not (DF)",
    LOCALLY_FINITE: "(DF), not Frechet",
    INCONCLUSIVE: "no label",
}

MAX_PROBE_SIZE = 10
GROWTH_RADIUS = 8


@dataclass(frozen=True)
class ProbeResult:
    subset: tuple[Element, ...]
    outcome: ClosureResult

    @property
    def finite(self) -> bool:
        return self.outcome.finite


@dataclass(frozen=True)
class ClassificationReport:
    verdict: str
    order: int | None
    evidence: tuple[ProbeResult, ...]
    growth: tuple[tuple[float, int], ...]
    global_closure: ClosureResult
    norm_equivalence: NormComparison | None = None
    finite_generating_set: bool = False
    seed: int = 0
    budget: int = 0
    notes: tuple[str, ...] = field(default=())
    disclaimer: str = "evidence from bounded enumeration; not a decision procedure"

    @property
    def label(self) -> str:
        return LABELS[self.verdict]


def local_finiteness_probe(oracle: MultiplicationOracle, subsets: Sequence, budget: int) -> list[ProbeResult]:
    """Bounded closure of each finite subset."""
    out = []
    for subset in subsets:
        elems = tuple(sorted({oracle.element(s) for s in subset}))
        out.append(ProbeResult(elems, generated_subsemigroup(oracle, elems, budget)))
    return out


def growth_profile(oracle: MultiplicationOracle, gens: GeneratorList, F: WeightFunction,
                   radii: Sequence, budget: int | None = None) -> list[tuple[float, int]]:
    """``(R, |{s : l_F(s) <= R}|)`` for each radius, from one table at the
    largest radius."""
    radii = list(radii)
    if not radii:
        return []
    table = length_table(oracle, gens, F, max(radii), budget)
    return [(r, table.ball_size(r)) for r in radii]


def probe_pool(oracle, gens, budget):
    # Elements drawn from: the whole semigroup (finite kinds), a unit-weight
    # ball (finitely generated), or the first generators (rule sequences).
    if oracle.finite:
        return [e.key for e in oracle.elements()]
    if gens.finite:
        t = length_table(oracle, gens, WeightFunction.constant(1), 4, budget)
        return sorted(t.keys(), key=oracle.sort_key)
    return gens.keys(upto=max(MAX_PROBE_SIZE * 5, 50))


def random_subsets(pool: Sequence, count: int, seed: int, max_size: int = MAX_PROBE_SIZE) -> list[list]:
    rng = random.Random(seed)
    pool = list(pool)
    out = []
    for _ in range(count):
        size = rng.randint(1, min(max_size, len(pool)))
        out.append(rng.sample(pool, size))
    return out


def desk_classify(oracle: MultiplicationOracle, gens: GeneratorList | None = None,
                  budget: int = 10_000, probes: int = 20, seed: int = 0) -> ClassificationReport:
    """Classify from a full closure, a unit-weight growth profile and random
    local-finiteness probes.

    An infinite rule-defined generator list is replaced by a finite
    generating set when the kind provides one (``naturals_additive``: ``1``).
    """
    if gens is None:
        gens = oracle.default_generators()
    notes = []
    fg = gens
    if not gens.finite:
        known = oracle.known_finite_generators()
        if known is not None:
            fg = known
            notes.append(f"generator rule {gens.name!r} replaced by the finite generating set "
                         f"{list(known.keys())}")
    finite_gens = fg.finite
    if finite_gens:
        seeds = fg.keys()
    else:
        seeds = gens.keys(upto=budget + 1)
    whole = closure(oracle, seeds, budget)

    unit = WeightFunction.constant(1)
    growth: tuple = ()
    if finite_gens:
        radii = list(range(1, GROWTH_RADIUS + 1))
        growth = tuple(growth_profile(oracle, fg, unit, radii, budget))

    if whole.finite:
        # A finite generating set settles the question; compare the trivial
        # norm with the unit-weight norm as a sample of norm equivalence.
        zero = WeightFunction.constant(0)
        t1 = length_table(oracle, fg, zero, math.inf)
        t2 = length_table(oracle, fg, unit, math.inf)
        cmp = comparison_constants(t1, t2)
        return ClassificationReport(FINITE, whole.order, (), growth, whole, cmp, finite_gens,
                                    seed, budget, tuple(notes))

    pool = probe_pool(oracle, fg if finite_gens else gens, budget)
    evidence = tuple(local_finiteness_probe(oracle, random_subsets(pool, probes, seed), budget))
    all_finite = all(p.finite for p in evidence)
    unbounded = len(growth) >= 2 and growth[-1][1] > growth[-2][1]
    if oracle.kind in INFINITE_KINDS:
        notes.append(f"{oracle.kind} is infinite by construction")

    if finite_gens and unbounded and not all_finite:
        verdict = FINITELY_GENERATED
    elif not finite_gens and all_finite:
        verdict = LOCALLY_FINITE
    else:
        verdict = INCONCLUSIVE
    return ClassificationReport(verdict, None, evidence, growth, whole, None, finite_gens,
                                seed, budget, tuple(notes))
