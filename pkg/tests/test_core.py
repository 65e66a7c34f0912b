import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from amenvelope.core import (
    Element,
    GeneratorList,
    KindMismatch,
    MalformedSpec,
    NonAssociativeTable,
    NotClosed,
    SemigroupSpec,
    cayley_table_of,
    closure,
    detect_identity,
    generated_subsemigroup,
    make_oracle,
    product,
    random_finite_semigroup,
)


def naive_closure(mul, seeds):
    """Fixpoint of all pairwise products; independent of the BFS."""
    s = set(seeds)
    while True:
        new = {mul(x, y) for x in s for y in s} - s
        if not new:
            return s
        s |= new


def exhaustive_violations(table):
    n = len(table)
    return [(i, j, k) for i, j, k in itertools.product(range(n), repeat=3)
            if table[table[i][j]][k] != table[i][table[j][k]]]


class TestMakeOracle:
    def test_left_zero_product(self, left_zero):
        for x, y in [(1, 2), (3, 7), (9, 1)]:
            assert left_zero.mul(x, y) == x

    def test_z3(self, z3):
        assert product(z3, Element(1), Element(2)) == Element(0)
        assert z3.order == 3

    def test_non_associative_2x2(self):
        table = [[0, 1], [0, 0]]
        bad = exhaustive_violations(table)
        assert bad  # the exhaustive scan finds a violating triple
        with pytest.raises(NonAssociativeTable) as exc:
            make_oracle(SemigroupSpec.cayley_table(table))
        assert exc.value.triple in bad

    def test_associative_2x2_accepted(self):
        table = [[0, 0], [0, 0]]
        assert not exhaustive_violations(table)
        make_oracle(SemigroupSpec.cayley_table(table))

    @pytest.mark.parametrize("spec", [
        SemigroupSpec("cayley_table", order=2, table=((0, 2), (1, 1))),
        SemigroupSpec("cayley_table", order=2, table=((0, 1),)),
        SemigroupSpec.transformations(2, [[0, 2]]),
        SemigroupSpec.transformations(0, [[]]),
        SemigroupSpec.free(0),
        SemigroupSpec("bogus"),
    ])
    def test_malformed(self, spec):
        with pytest.raises(MalformedSpec):
            make_oracle(spec)

    def test_sampled_associativity_above_limit(self):
        table = [[0, 1], [0, 0]]
        with pytest.raises(NonAssociativeTable):
            make_oracle(SemigroupSpec.cayley_table(table), assoc_limit=1)


class TestProduct:
    def test_left_zero(self, left_zero):
        assert product(left_zero, Element(3), Element(7)) == Element(3)

    def test_free(self, free2):
        ab, ba = Element((1, 2)), Element((2, 1))
        assert product(free2, ab, ba) == Element((1, 2, 2, 1))
        assert free2.validate("abba") == (1, 2, 2, 1)

    def test_naturals(self, naturals):
        assert product(naturals, Element(4), Element(5)) == Element(9)

    @pytest.mark.parametrize("oracle_name,bad", [
        ("z3", 3), ("z3", (1,)), ("free2", (3,)), ("free2", 5), ("naturals", 0),
        ("left_zero", (1, 2)), ("trans2", (0, 2)),
    ])
    def test_kind_mismatch(self, request, oracle_name, bad):
        oracle = request.getfixturevalue(oracle_name)
        with pytest.raises(KindMismatch):
            oracle.element(bad)

    def test_transformation_composition_left_to_right(self, trans2):
        swap, const0 = (1, 0), (0, 0)
        # apply swap first, then const0
        assert trans2.mul(swap, const0) == (0, 0)
        assert trans2.mul(const0, swap) == (1, 1)


class TestClosure:
    def test_transformations_degree2(self, trans2):
        res = closure(trans2, [Element((1, 0)), Element((0, 0))], 100)
        assert res.finite and res.order == 4
        assert res.keys() == naive_closure(trans2.mul, [(1, 0), (0, 0)])
        assert res.keys() == {(0, 0), (1, 1), (0, 1), (1, 0)}

    def test_left_zero_pair(self, left_zero):
        res = closure(left_zero, [Element(1), Element(2)], 10)
        assert res.finite and res.keys() == {1, 2}

    def test_free_monogenic_exhausts(self, free1):
        res = closure(free1, [Element((1,))], 10)
        assert res.exhausted
        assert len(res.keys()) == 10
        assert res.keys() == {(1,) * k for k in range(1, 11)}

    def test_z6_subset(self, z6):
        res = generated_subsemigroup(z6, [Element(2)], 100)
        assert res.finite and res.keys() == {2, 4, 0}

    def test_left_zero_singleton(self, left_zero):
        res = generated_subsemigroup(left_zero, [Element(5)], 100)
        assert res.finite and res.keys() == {5}

    def test_naturals_exhausted(self, naturals):
        assert generated_subsemigroup(naturals, [Element(1)], 100).exhausted

    def test_exact_budget_is_finite(self, z6):
        res = closure(z6, [Element(2)], 3)
        assert res.finite and res.order == 3
        assert closure(z6, [Element(2)], 2).exhausted

    def test_discovery_order(self, free2):
        res = closure(free2, [(2,), (1,)], 6)
        assert [e.key for e in res.elements] == [(1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]

    def test_empty_seeds(self, z3):
        with pytest.raises(ValueError):
            closure(z3, [], 5)

    def test_idempotent(self, rng):
        for _ in range(20):
            oracle = make_oracle(random_finite_semigroup(rng))
            seeds = rng.sample(range(oracle.order), rng.randint(1, oracle.order))
            first = closure(oracle, seeds, 100)
            again = closure(oracle, first.elements, 100)
            assert again.finite and again.keys() == first.keys()

    def test_matches_naive_on_random_tables(self, rng):
        for _ in range(30):
            oracle = make_oracle(random_finite_semigroup(rng))
            seeds = rng.sample(range(oracle.order), rng.randint(1, oracle.order))
            assert closure(oracle, seeds, 100).keys() == naive_closure(oracle.mul, seeds)

    def test_transformation_oracle_matches_table_path(self, rng):
        # Generic BFS (transformations) against the compiled table kernel.
        for _ in range(10):
            d = rng.randint(2, 3)
            gens = [tuple(rng.randrange(d) for _ in range(d)) for _ in range(2)]
            t = make_oracle(SemigroupSpec.transformations(d, gens))
            elems = t.elements()
            table = make_oracle(cayley_table_of(t, elems))
            index = {e.key: i for i, e in enumerate(elems)}
            r1 = closure(t, gens, 1000)
            r2 = closure(table, [index[g] for g in gens], 1000)
            assert r1.order == r2.order
            assert {index[e.key] for e in r1.elements} == r2.keys()

    @given(st.lists(st.integers(1, 10**6), min_size=1, max_size=12))
    def test_left_zero_every_subset_closed(self, keys):
        oracle = make_oracle(SemigroupSpec.left_zero())
        res = generated_subsemigroup(oracle, keys, 100)
        assert res.finite and res.keys() == set(keys)

    @given(st.permutations([(1, 0, 2), (0, 0, 1), (2, 2, 2), (1, 2, 0)]))
    @settings(max_examples=25)
    def test_seed_order_irrelevant(self, seeds):
        oracle = make_oracle(SemigroupSpec.transformations(3, [[0, 1, 2]]))
        res = closure(oracle, seeds, 7)
        ref = closure(oracle, sorted(seeds), 7)
        assert res.elements == ref.elements
        assert [e.key for e in res.elements] == [e.key for e in ref.elements]


class TestAssociativity:
    def test_exhaustive_random_tables(self, rng):
        for _ in range(20):
            oracle = make_oracle(random_finite_semigroup(rng))
            n = oracle.order
            for x, y, z in itertools.product(range(n), repeat=3):
                assert oracle.mul(oracle.mul(x, y), z) == oracle.mul(x, oracle.mul(y, z))

    @pytest.mark.parametrize("name", ["free2", "naturals", "left_zero"])
    def test_sampled_infinite(self, request, name):
        oracle = request.getfixturevalue(name)
        r = random.Random(7)

        def draw():
            if name == "free2":
                return tuple(r.randint(1, 2) for _ in range(r.randint(1, 6)))
            return r.randint(1, 1000)
        for _ in range(1000):
            x, y, z = draw(), draw(), draw()
            assert oracle.mul(oracle.mul(x, y), z) == oracle.mul(x, oracle.mul(y, z))

    def test_full_t3_exhaustive(self, full_t3):
        elems = [e.key for e in full_t3.elements()]
        assert len(elems) == 27
        for x, y, z in itertools.product(elems, repeat=3):
            assert full_t3.mul(full_t3.mul(x, y), z) == full_t3.mul(x, full_t3.mul(y, z))


class TestIdentity:
    def test_z3(self, z3):
        assert detect_identity(z3) == Element(0)

    def test_left_zero(self, left_zero):
        assert detect_identity(left_zero) is None

    def test_left_zero_finite_pair(self, left_zero):
        assert detect_identity(left_zero, [1, 2]) is None

    def test_transformations(self, trans2):
        res = closure(trans2, [(1, 0), (0, 0), (1, 1), (0, 1)], 10)
        assert detect_identity(trans2, res) == Element((0, 1))

    def test_not_closed(self, z3):
        with pytest.raises(NotClosed):
            detect_identity(z3, [1])

    def test_exhausted_rejected(self, free1):
        with pytest.raises(NotClosed):
            detect_identity(free1, closure(free1, [(1,)], 3))

    @pytest.mark.parametrize("name", ["free2", "naturals"])
    def test_infinite_builtins(self, request, name):
        assert detect_identity(request.getfixturevalue(name)) is None


class TestElementsAndGenerators:
    def test_equality_ignores_witness(self):
        assert Element(3, (1, 2)) == Element(3)
        assert hash(Element(3, (1, 2))) == hash(Element(3))
        assert len({Element(3, (1,)), Element(3, (2,))}) == 1

    def test_total_order(self):
        words = [Element((2,)), Element((1, 1)), Element((1,))]
        assert sorted(words) == [Element((1,)), Element((2,)), Element((1, 1))]

    def test_generator_list_one_based(self, left_zero):
        gens = left_zero.default_generators()
        assert not gens.finite
        assert gens[1] == Element(1) and gens[7].key == 7
        with pytest.raises(IndexError):
            gens.key(0)

    def test_repetitions_allowed(self):
        gens = GeneratorList([1, 1, 2])
        assert len(gens) == 3 and gens.key(2) == 1

    def test_truncate(self, naturals):
        gens = naturals.default_generators().truncate(5)
        assert gens.keys() == [1, 2, 3, 4, 5]
        with pytest.raises(IndexError):
            gens.key(6)
