"""Cohomological transversal oracle vs. direct combinatorics.

Products of linear forms in square-zero variables detect systems of
distinct representatives; these tests pit that detection against plain
subset enumeration and against the matching engine.
"""

from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from bottcert import (
    FormalProjection,
    InvalidFamilyError,
    MultilinearPoly,
    SizeExceededError,
    max_transversal_size,
    max_trivial_by_euler,
    max_trivial_multiple,
    maximum_matching,
    sdr_exists,
)
from bottcert.euler import mul_mod

sets_st = st.lists(st.sets(st.integers(1, 7), min_size=1, max_size=3), max_size=5)
polys_st = st.lists(
    st.tuples(st.sets(st.integers(1, 5), max_size=2), st.integers(-3, 3)), max_size=6
).map(lambda items: MultilinearPoly((frozenset(m), c) for m, c in items))


def brute_sdr_exists(family):
    family = [set(s) for s in family]
    for choice in permutations(sorted(set().union(*family)) if family else [], len(family)):
        if all(c in s for c, s in zip(choice, family)):
            return True
    return not family


def brute_max_transversal(family):
    best = 0
    for r in range(len(family) + 1):
        for sub in combinations(family, r):
            if brute_sdr_exists(sub):
                best = r
    return best


def test_square_zero_variables():
    x = MultilinearPoly.variable(1)
    assert (x * x).is_zero
    assert not (x * MultilinearPoly.variable(2)).is_zero


def test_linear_form_and_degree():
    p = MultilinearPoly.linear_form((1, 2))
    assert p.coefficient((1,)) == 1 and p.coefficient((2,)) == 1
    assert p.degree == 1
    assert MultilinearPoly.zero().degree == -1
    assert MultilinearPoly.one().degree == 0


@given(polys_st, polys_st, polys_st)
@settings(max_examples=60)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert mul_mod(p, q) == p * q


def test_product_counts_representative_systems():
    # (1 + x1 + x2)^2: the top coefficient counts ordered choices
    p = MultilinearPoly.linear_form((1, 2))
    one = MultilinearPoly.one()
    square = (one + p) * (one + p)
    assert square.coefficient((1, 2)) == 2
    assert square.coefficient((1,)) == 2


@given(sets_st)
@settings(max_examples=100, deadline=None)
def test_sdr_detection_matches_enumeration(family):
    assert sdr_exists(family) == brute_sdr_exists(family)


@given(sets_st)
@settings(max_examples=100, deadline=None)
def test_max_transversal_matches_enumeration(family):
    assert max_transversal_size(family) == brute_max_transversal(family)


@given(sets_st)
@settings(max_examples=100)
def test_transversal_equals_matching(family):
    q = FormalProjection.from_sets(family)
    assert max_transversal_size(family) == maximum_matching(q)


@given(sets_st, st.integers(0, 3))
@settings(max_examples=100)
def test_euler_route_agrees_with_matching_route(family, trivial):
    q = FormalProjection.from_sets(family) + FormalProjection.trivial(trivial)
    assert max_trivial_by_euler(q) == max_trivial_multiple(q)[0]


def test_product_coefficients_are_sdr_counts():
    family = [(1, 2), (1, 2), (2, 3)]
    poly = MultilinearPoly.one()
    for s in family:
        poly = poly * (MultilinearPoly.one() + MultilinearPoly.linear_form(s))
    for size in range(1, 4):
        for mono in combinations((1, 2, 3), size):
            count = 0
            for sub in combinations(range(3), size):
                for perm in permutations(mono):
                    if all(c in family[t] for c, t in zip(perm, sub)):
                        count += 1
            assert poly.coefficient(mono) == count, mono
    assert all(coeff >= 0 for _, coeff in poly.items())


def test_empty_set_rejected_for_sdr():
    with pytest.raises(InvalidFamilyError):
        sdr_exists([set()])


def test_trivial_summands_do_not_feed_the_product():
    q = FormalProjection([((), 4), ((1,), 2)])
    assert max_trivial_by_euler(q) == 5


def test_coordinate_budget_enforced():
    family = [{i} for i in range(1, 26)]
    with pytest.raises(SizeExceededError):
        sdr_exists(family)
    assert sdr_exists(family, max_coords=25)
