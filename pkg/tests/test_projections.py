"""Formal line-bundle sums: construction, canonical form, JSON."""

import pytest
from hypothesis import given, strategies as st

from bottcert import (
    CoordinateAllocator,
    DisjointFamilySummary,
    FormalProjection,
    InvalidFamilyError,
    NotDisjointError,
    canonical_coords,
)

coords_st = st.lists(st.integers(1, 12), max_size=4)
terms_st = st.lists(st.tuples(coords_st, st.integers(1, 3)), max_size=8)
groups_st = st.lists(
    st.tuples(st.integers(1, 5), st.integers(1, 6), st.integers(1, 4)), max_size=5
)


def test_canonical_coords_sorts_and_dedups():
    assert canonical_coords([3, 1, 2, 1]) == (1, 2, 3)
    assert canonical_coords(()) == ()


@pytest.mark.parametrize("bad", [[0], [-1], [1.5], [True], ["a"]])
def test_canonical_coords_rejects_non_positive_labels(bad):
    with pytest.raises(InvalidFamilyError):
        canonical_coords(bad)


def test_allocator_hands_out_fresh_blocks():
    alloc = CoordinateAllocator(start=5)
    assert alloc.fresh() == 5
    assert alloc.block(3) == (6, 7, 8)
    assert alloc.next_label == 9


def test_terms_merge_and_rank():
    q = FormalProjection([((2, 1), 1), ((1, 2), 2), ((), 1), ((3,), 1)])
    assert dict(q.terms()) == {(1, 2): 3, (): 1, (3,): 1}
    assert q.rank == 5
    assert q.distinct_count == 3  # (), (1,2), (3,)
    assert q.trivial_count == 1
    assert q.multiplicity([2, 1]) == 3
    assert q.multiplicity([9]) == 0
    assert q.support == frozenset({1, 2, 3})


def test_zero_multiplicity_terms_are_dropped():
    q = FormalProjection([((1,), 0)])
    assert q == FormalProjection.zero()
    assert q.rank == 0


def test_negative_multiplicity_rejected():
    with pytest.raises(InvalidFamilyError):
        FormalProjection([((1,), -1)])


def test_direct_sum_and_scale():
    a = FormalProjection.single((1, 2))
    b = FormalProjection.trivial(2)
    assert (a + b).rank == 3
    assert (3 * a).multiplicity((1, 2)) == 3
    assert a.scale(0) == FormalProjection.zero()
    with pytest.raises(InvalidFamilyError):
        a.scale(-2)


def test_from_sets():
    q = FormalProjection.from_sets([(1, 2), (2, 1), (3,)])
    assert q.multiplicity((1, 2)) == 2
    assert q.rank == 3


def test_relabel_requires_injective_cover():
    q = FormalProjection.single((1, 2))
    assert q.relabel({1: 10, 2: 20}).support == frozenset({10, 20})
    with pytest.raises(InvalidFamilyError):
        q.relabel({1: 10})
    with pytest.raises(InvalidFamilyError):
        q.relabel({1: 10, 2: 10})
    with pytest.raises(InvalidFamilyError):
        q.relabel({1: 10, 2: 20}, forbidden=(20,))


@given(terms_st)
def test_json_round_trip(terms):
    q = FormalProjection(terms)
    assert FormalProjection.from_json_dict(q.to_json_dict()) == q


@given(terms_st)
def test_term_instances_count_matches_rank(terms):
    q = FormalProjection(terms)
    instances = list(q.term_instances())
    assert len(instances) == q.rank
    assert instances == sorted(instances)


def test_summary_merges_groups():
    s = DisjointFamilySummary([(2, 1, 3), (2, 2, 3), (1, 1, 1)], trivial=4)
    assert s.groups == ((1, 1, 1), (2, 3, 3))
    assert s.rank == 4 + 1 + 9
    assert s.set_count == 4
    assert s.coord_usage == 1 + 3 * 2


def test_summary_validation():
    with pytest.raises(InvalidFamilyError):
        DisjointFamilySummary([(0, 1, 1)])
    with pytest.raises(InvalidFamilyError):
        DisjointFamilySummary(trivial=-1)
    with pytest.raises(InvalidFamilyError):
        DisjointFamilySummary([(1, -1, 1)])
    # zero counts and multiplicities canonicalise away
    assert DisjointFamilySummary([(1, 0, 1), (2, 1, 0)]).groups == ()


def test_trivial_only():
    s = DisjointFamilySummary.trivial_only(3)
    assert s.rank == 3 and s.groups == ()


@given(groups_st, st.integers(0, 4))
def test_summary_json_round_trip(groups, trivial):
    s = DisjointFamilySummary(groups, trivial)
    assert DisjointFamilySummary.from_json_dict(s.to_json_dict()) == s


@given(groups_st, st.integers(0, 4), st.integers(0, 3))
def test_summary_scale_matches_expansion_scale(groups, trivial, n):
    s = DisjointFamilySummary(groups, trivial)
    assert s.scale(n).expand() == s.expand().scale(n)
    assert (n * s) == s.scale(n)


@given(groups_st, st.integers(0, 4))
def test_expand_produces_disjoint_sets(groups, trivial):
    s = DisjointFamilySummary(groups, trivial)
    q = s.expand()
    assert q.rank == s.rank
    assert q.trivial_count == s.trivial
    nonempty = [c for c in q.terms() if c[0]]
    seen: set[int] = set()
    for coords, _ in nonempty:
        assert seen.isdisjoint(coords)
        seen.update(coords)
    assert len(seen) == s.coord_usage


def test_compress_inverts_expand_shape():
    s = DisjointFamilySummary([(2, 3, 2), (1, 1, 1)], trivial=2)
    assert s.expand().compress() == s


def test_compress_requires_disjoint_support():
    q = FormalProjection([((1, 2), 1), ((2, 3), 1)])
    with pytest.raises(NotDisjointError) as exc:
        q.compress()
    assert exc.value.shared == 2


def test_direct_sum_of_summaries():
    a = DisjointFamilySummary([(2, 1, 1)], trivial=1)
    b = DisjointFamilySummary([(2, 2, 1)], trivial=0)
    c = a.direct_sum(b)
    assert c.groups == ((2, 3, 1),) and c.trivial == 1


def test_canonical_json_is_stable():
    q = FormalProjection([((2, 1), 1), ((3,), 2)])
    r = FormalProjection([((3,), 2), ((1, 2), 1)])
    assert q.canonical_json() == r.canonical_json()
