import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import (brute_image_order, random_psl_action, random_sl2, sl_index_oracle,
                     stabilizer_generators)
from monodromy.errors import InvalidRank
from monodromy.sl2 import IDENTITY, MINUS_I, S, SL2Matrix, T
from monodromy.subgroup import (UNBOUNDED, abelianization_character, contains_minus_identity,
                                describe, index_in_psl, intersection_index, schreier_bound,
                                sl_index, su_word, twist_group)

GAMMA2 = [SL2Matrix(1, 2, 0, 1), SL2Matrix(1, 0, 2, 1)]
seeds = st.integers(0, 2 ** 32 - 1)


def test_index_in_psl_examples():
    assert index_in_psl([S, T])[0] == 1
    n, _ = index_in_psl(GAMMA2)
    assert n == 6 == brute_image_order([S, T], 2)
    assert index_in_psl([]) is UNBOUNDED
    assert index_in_psl([S]) is UNBOUNDED
    assert index_in_psl([T], max_cosets=1000) is UNBOUNDED


def test_contains_minus_identity_examples():
    d = describe([S, T])
    assert contains_minus_identity([S, T], d.coset_table)
    assert describe([S]).contains_minus_I is True
    assert describe([T]).contains_minus_I is not True
    assert describe(GAMMA2).contains_minus_I is False


def test_sl_index_examples():
    assert sl_index([MINUS_I] + GAMMA2) == 6
    assert sl_index([S, T]) == 1
    assert sl_index(GAMMA2) == 12
    assert sl_index_oracle(GAMMA2) == 12
    assert sl_index_oracle([MINUS_I] + GAMMA2) == 6


def test_abelianization_examples():
    assert abelianization_character(IDENTITY) == 0
    assert abelianization_character(MINUS_I) == 6
    assert abelianization_character(S) == 3 and abelianization_character(T) == 1


@given(seeds)
@settings(max_examples=120)
def test_abelianization_is_homomorphism(seed):
    rng = random.Random(seed)
    a, b = random_sl2(rng, 12), random_sl2(rng, 12)
    assert abelianization_character(a * b) == \
        (abelianization_character(a) + abelianization_character(b)) % 12


def test_schreier_bound_values():
    assert schreier_bound(2) == 12
    assert schreier_bound(3) == 24
    assert schreier_bound(11) == 120
    with pytest.raises(InvalidRank):
        schreier_bound(1)


@given(st.integers(1, 30), seeds)
@settings(max_examples=120)
def test_index_matches_independent_oracles(n, seed):
    rng = random.Random(seed)
    s, u = random_psl_action(n, rng)
    gens = stabilizer_generators(s, u)
    d = describe(gens)
    assert d.psl_index == n
    assert d.sl_index == sl_index_oracle(gens)
    assert d.sl_index == (n if d.contains_minus_I else 2 * n)
    assert d.mod2_image_order == brute_image_order(gens, 2)
    assert 6 % d.mod2_image_order == 0
    # the coset action is transitive and every generator fixes coset 0
    tab = d.coset_table
    seen, stack = {0}, [0]
    while stack:
        c = stack.pop()
        for nxt in (tab.perm_s[c], tab.perm_u[c]):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    assert len(seen) == n
    for g in gens:
        assert tab.trace(su_word(g)) == 0
        assert d.contains(g)


@given(st.integers(1, 16), seeds)
@settings(max_examples=100)
def test_membership_against_random_elements(n, seed):
    rng = random.Random(seed)
    s, u = random_psl_action(n, rng)
    gens = stabilizer_generators(s, u)
    d = describe(gens)
    for _ in range(5):
        g = random_sl2(rng, rng.randint(0, 12))
        # g lies in the group iff adjoining it keeps the index
        assert d.contains(g) == (describe(list(gens) + [g]).sl_index == d.sl_index)


@given(st.integers(1, 12), seeds, st.lists(st.sampled_from([1, -1]), min_size=40, max_size=40))
@settings(max_examples=100)
def test_twist_group_ratio(n, seed, signs):
    rng = random.Random(seed)
    s, u = random_psl_action(n, rng)
    gens = stabilizer_generators(s, u)
    d1 = describe(gens)
    d2, cls = twist_group(gens, signs[:len(gens)])
    assert cls is not None
    assert d2.psl_index == d1.psl_index
    assert Fraction(d2.sl_index, d1.sl_index) in (Fraction(1, 2), Fraction(1), Fraction(2))
    if all(x == 1 for x in signs[:len(gens)]):
        assert cls.case == "Equal"
    if cls.case == "IndexTwoSubgroup":
        assert intersection_index(d1, d2) == 2 * d1.sl_index


def test_twist_of_full_group_is_full():
    gens = [S, T]
    for signs in ([1, 1], [-1, 1], [1, -1], [-1, -1]):
        d, _ = twist_group(gens, signs)
        assert d.sl_index == 1
