"""Subequivalence decisions checked against brute-force oracles.

The engine answers with a matching-defect computation; everything here
re-derives the same numbers by subset enumeration, so any disagreement
points at the fast path.
"""

from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from bottcert import (
    DisjointFamilySummary,
    FormalProjection,
    InvalidFamilyError,
    SizeExceededError,
    brute_force_max_trivial,
    closed_form_max_trivial,
    is_trivial_subequivalent,
    max_trivial_multiple,
    maximum_matching,
)

coords_st = st.lists(st.integers(1, 10), max_size=4)
families_st = st.lists(st.tuples(coords_st, st.integers(1, 3)), max_size=8).map(FormalProjection)
small_families_st = st.lists(st.tuples(st.lists(st.integers(1, 6), max_size=3), st.integers(1, 2)),
                             max_size=5).map(FormalProjection)
summaries_st = st.tuples(
    st.lists(st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5)), max_size=4),
    st.integers(0, 6),
).map(lambda gt: DisjointFamilySummary(*gt))


def exhaustive_max_defect(instances):
    """max over sub-multisets F of |F| - |union F|, by full enumeration."""
    best = 0
    for r in range(len(instances) + 1):
        for picked in combinations(range(len(instances)), r):
            union = set()
            for t in picked:
                union.update(instances[t])
            best = max(best, r - len(union))
    return best


def oracle_witness(instances, best):
    """Greedy canonical witness, with attainability decided by enumeration.

    Walks the copies in canonical order, keeps a copy exactly when some
    attaining completion among the later copies still exists, and stops
    at attainment — the documented tie-break, implemented independently.
    """
    chosen: list[int] = []
    union: set[int] = set()

    def attainable(kept, kept_union, start):
        later = range(start, len(instances))
        for r in range(len(instances) - start + 1):
            for extra in combinations(later, r):
                u = set(kept_union)
                for t in extra:
                    u.update(instances[t])
                if kept + r - len(u) == best:
                    return True
        return False

    for t in range(len(instances)):
        if len(chosen) - len(union) == best:
            break
        cand = union | set(instances[t])
        if attainable(len(chosen) + 1, cand, t + 1):
            chosen.append(t)
            union = cand
    return chosen


def test_hand_cases():
    assert max_trivial_multiple(FormalProjection.zero())[0] == 0
    assert max_trivial_multiple(FormalProjection.trivial(5))[0] == 5
    assert max_trivial_multiple(FormalProjection.single((1,)))[0] == 0
    # two copies of one Bott summand: only one coordinate to absorb them
    assert max_trivial_multiple(FormalProjection.single((1,), 2))[0] == 1
    # pigeonhole: m copies of a singleton lose all but one
    assert max_trivial_multiple(FormalProjection.single((7,), 6))[0] == 5
    # a pairwise disjoint family always matches completely
    assert max_trivial_multiple(FormalProjection.from_sets([(1, 2), (3,), (4, 5)]))[0] == 0
    # overfull triple on two coordinates
    q = FormalProjection.from_sets([(1,), (2,), (1, 2)])
    assert max_trivial_multiple(q)[0] == 1


def test_defect_formula_on_hand_case():
    q = FormalProjection([((1, 2), 3), ((3,), 2), ((), 2)])
    assert maximum_matching(q) == 3
    assert max_trivial_multiple(q)[0] == q.rank - 3 == 4


@given(families_st)
@settings(max_examples=150)
def test_matching_agrees_with_brute_force(q):
    assert max_trivial_multiple(q)[0] == brute_force_max_trivial(q)


@given(families_st)
@settings(max_examples=100)
def test_defect_formula(q):
    maximum, witness = max_trivial_multiple(q)
    assert maximum == q.rank - maximum_matching(q)
    assert witness.deficiency == maximum
    assert witness.validate(within=q)


@given(families_st, st.integers(0, 30))
def test_subequivalence_is_monotone_in_copies(q, m):
    maximum = max_trivial_multiple(q)[0]
    assert is_trivial_subequivalent(m, q) == (m <= maximum)


def test_subequivalence_rejects_bad_count():
    with pytest.raises(InvalidFamilyError):
        is_trivial_subequivalent(-1, FormalProjection.zero())
    with pytest.raises(InvalidFamilyError):
        is_trivial_subequivalent(True, FormalProjection.zero())


@given(small_families_st)
@settings(max_examples=120, deadline=None)
def test_exhaustive_defect_and_canonical_witness(q):
    instances = list(q.term_instances())
    maximum, witness = max_trivial_multiple(q)
    assert maximum == exhaustive_max_defect(instances)
    expected = oracle_witness(instances, maximum)
    grouped = Counter(instances[t] for t in expected)
    union = set()
    for t in expected:
        union.update(instances[t])
    assert witness.terms == tuple(sorted(grouped.items()))
    assert witness.union_size == len(union)


@given(families_st)
@settings(max_examples=80)
def test_witness_is_order_independent(q):
    maximum, witness = max_trivial_multiple(q)
    shuffled = FormalProjection(list(q.terms())[::-1])
    maximum2, witness2 = max_trivial_multiple(shuffled)
    assert (maximum, witness) == (maximum2, witness2)


def test_witness_validate_rejects_foreign_terms():
    q = FormalProjection.single((1,), 2)
    _, witness = max_trivial_multiple(q)
    other = FormalProjection.single((2,), 2)
    assert not witness.validate(within=other)


def test_witness_json_shape():
    _, witness = max_trivial_multiple(FormalProjection.single((1,), 3))
    data = witness.to_json_dict()
    assert set(data) == {"terms", "union_size", "deficiency"}
    assert data["deficiency"] == 2


@given(summaries_st)
@settings(max_examples=100)
def test_closed_form_matches_matching_on_expansion(summary):
    expanded = summary.expand()
    assert closed_form_max_trivial(summary) == max_trivial_multiple(expanded)[0]


@given(summaries_st, st.integers(1, 4))
@settings(max_examples=60)
def test_closed_form_scales(summary, n):
    assert closed_form_max_trivial(summary.scale(n)) == \
        max_trivial_multiple(summary.expand().scale(n))[0]


def test_brute_force_refuses_oversized_input():
    q = FormalProjection.from_sets([(i, i + 1) for i in range(1, 43, 2)])
    assert q.distinct_count == 21
    with pytest.raises(SizeExceededError):
        brute_force_max_trivial(q)
    assert max_trivial_multiple(q)[0] == 0  # fast path has no such limit


def test_many_identical_copies_exercise_skip_rule():
    q = FormalProjection([((1, 2), 10), ((3,), 4), ((), 1)])
    maximum, witness = max_trivial_multiple(q)
    assert maximum == brute_force_max_trivial(q) == 12
    assert witness.validate(within=q)
    assert witness.deficiency == 12
