"""Exact computation of the largest trivial multiple inside a formal sum.

For a formal projection with summands ``I_1, ..., I_r`` the largest ``m``
such that ``m`` trivial line bundles embed equals the maximum Hall
deficiency ``max_F (|F| - |union of I_j, j in F|)`` over sub-multisets
``F`` of the summands (the empty ``F`` gives 0).  By the König defect
formula this is ``r`` minus the size of a maximum matching in the
bipartite graph joining each summand copy to the coordinates of its
index set.  The matching route is the production path; an exponential
brute-force enumeration and a closed form for pairwise-disjoint families
serve as independent oracles.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidFamilyError, SizeExceededError
from .projections import Coords, DisjointFamilySummary, FormalProjection

__all__ = [
    "DeficiencyWitness",
    "max_trivial_multiple",
    "is_trivial_subequivalent",
    "brute_force_max_trivial",
    "closed_form_max_trivial",
    "maximum_matching",
]


@dataclass(frozen=True)
class DeficiencyWitness:
    """A sub-multiset of summands attaining the maximum deficiency.

    ``terms`` holds ``(coords, copies)`` pairs in canonical order;
    ``deficiency`` must equal ``(total copies) - union_size``.
    """

    terms: tuple[tuple[Coords, int], ...]
    union_size: int
    deficiency: int

    def validate(self, within: FormalProjection | None = None) -> bool:
        """Recompute the stored numbers from the listed terms.

        Returns True iff they match, and, when ``within`` is given, the
        chosen terms really are a sub-multiset of that projection.
        """
        union: set[int] = set()
        copies = 0
        for coords, mult in self.terms:
            if mult < 1 or tuple(sorted(set(coords))) != tuple(coords):
                return False
            union.update(coords)
            copies += mult
        if len(union) != self.union_size or copies - len(union) != self.deficiency:
            return False
        if within is not None:
            return all(mult <= within.multiplicity(coords) for coords, mult in self.terms)
        return True

    def to_json_dict(self) -> dict:
        return {
            "terms": [{"coords": list(c), "mult": m} for c, m in self.terms],
            "union_size": self.union_size,
            "deficiency": self.deficiency,
        }


class _MatchingState:
    """Maximum matching between summand copies and coordinates, with
    incremental vertex removal.

    The left side is the list of summand copies in canonical order; the
    right side is built lazily from the union of the index sets.  The
    initial matching runs Hopcroft-Karp (greedy seed, layered phases,
    iterative augmentation).  Removing a vertex afterwards invalidates at
    most one matched edge, and by Berge's lemma a single augmenting-path
    search restores maximality, which keeps the witness extraction loop
    cheap.
    """

    def __init__(self, instances: Sequence[Coords]):
        coord_ids: dict[int, int] = {}
        self.adj: list[list[int]] = []
        for coords in instances:
            self.adj.append([coord_ids.setdefault(c, len(coord_ids)) for c in coords])
        self.n_left = len(instances)
        self.n_right = len(coord_ids)
        self.left_alive = bytearray(b"\x01" * self.n_left)
        self.right_alive = bytearray(b"\x01" * self.n_right)
        self.pair_left = [-1] * self.n_left
        self.pair_right = [-1] * self.n_right
        self.nu = 0

    # -- initial maximum matching --------------------------------------

    def run(self) -> int:
        for u in range(self.n_left):
            if self.pair_left[u] == -1:
                for c in self.adj[u]:
                    if self.pair_right[c] == -1:
                        self.pair_left[u] = c
                        self.pair_right[c] = u
                        self.nu += 1
                        break
        dist = [0] * self.n_left
        while self._bfs(dist):
            for u in range(self.n_left):
                if self.pair_left[u] == -1 and self.left_alive[u] and self._dfs(u, dist):
                    self.nu += 1
        return self.nu

    def _bfs(self, dist: list[int]) -> bool:
        inf = self.n_left + 1
        queue: deque[int] = deque()
        for u in range(self.n_left):
            if self.left_alive[u] and self.pair_left[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        found = False
        while queue:
            u = queue.popleft()
            base = dist[u] + 1
            for c in self.adj[u]:
                if not self.right_alive[c]:
                    continue
                w = self.pair_right[c]
                if w == -1:
                    found = True
                elif dist[w] > base:
                    dist[w] = base
                    queue.append(w)
        return found

    def _dfs(self, root: int, dist: list[int]) -> bool:
        # Explicit stack with per-vertex adjacency cursors; augmenting
        # paths can be long on adversarial inputs, so no recursion.
        inf = self.n_left + 1
        adj = self.adj
        pair_right = self.pair_right
        stack = [root]
        cursor = {root: 0}
        parent: dict[int, tuple[int, int]] = {}
        while stack:
            u = stack[-1]
            i = cursor[u]
            row = adj[u]
            pushed = False
            while i < len(row):
                c = row[i]
                i += 1
                if not self.right_alive[c]:
                    continue
                w = pair_right[c]
                if w == -1:
                    self.pair_left[u] = c
                    pair_right[c] = u
                    while u != root:
                        pu, pc = parent[u]
                        self.pair_left[pu] = pc
                        pair_right[pc] = pu
                        u = pu
                    return True
                if dist[w] == dist[u] + 1 and w not in cursor:
                    cursor[u] = i
                    cursor[w] = 0
                    parent[w] = (u, c)
                    stack.append(w)
                    pushed = True
                    break
            if not pushed:
                cursor[u] = i
                dist[u] = inf
                stack.pop()
        return False

    # -- incremental removal -------------------------------------------

    def _augment_once(self) -> bool:
        """One multi-source alternating search; augments and reports success."""
        prev: dict[int, tuple[int, int] | None] = {}
        queue: deque[int] = deque()
        for u in range(self.n_left):
            if self.left_alive[u] and self.pair_left[u] == -1 and self.adj[u]:
                prev[u] = None
                queue.append(u)
        while queue:
            u = queue.popleft()
            for c in self.adj[u]:
                if not self.right_alive[c]:
                    continue
                w = self.pair_right[c]
                if w == -1:
                    self.pair_left[u] = c
                    self.pair_right[c] = u
                    while prev[u] is not None:
                        pu, pc = prev[u]
                        self.pair_left[pu] = pc
                        self.pair_right[pc] = pu
                        u = pu
                    return True
                if w not in prev:
                    prev[w] = (u, c)
                    queue.append(w)
        return False

    def alive_coords(self, t: int) -> list[int]:
        return [c for c in self.adj[t] if self.right_alive[c]]

    def remove_left(self, t: int) -> None:
        self.left_alive[t] = 0
        c = self.pair_left[t]
        if c != -1:
            self.pair_left[t] = -1
            self.pair_right[c] = -1
            self.nu -= 1
            if self._augment_once():
                self.nu += 1

    def remove_right(self, c: int) -> None:
        self.right_alive[c] = 0
        t = self.pair_right[c]
        if t != -1:
            self.pair_right[c] = -1
            self.pair_left[t] = -1
            self.nu -= 1
            if self._augment_once():
                self.nu += 1

    def snapshot(self):
        return (list(self.pair_left), list(self.pair_right), bytes(self.right_alive), self.nu)

    def restore(self, snap) -> None:
        pair_left, pair_right, right_alive, nu = snap
        self.pair_left = list(pair_left)
        self.pair_right = list(pair_right)
        self.right_alive = bytearray(right_alive)
        self.nu = nu


def _extract_witness(instances: Sequence[Coords], state: _MatchingState, best: int) -> list[int]:
    """Indices of the canonical attaining sub-multiset.

    Walks the copies in canonical order and keeps one exactly when doing
    so still lets the maximum deficiency be attained; stops as soon as
    the kept set attains it.  Keeping copy ``t`` with ``f`` fresh
    coordinates preserves attainability iff deleting ``t`` and those
    coordinates lowers the maximum matching by exactly ``f``.  Identical
    copies of a set that just failed are skipped without retesting.
    """
    chosen: list[int] = []
    union_size = 0
    last_failed: Coords | None = None
    for t, coords in enumerate(instances):
        if len(chosen) - union_size == best:
            break
        nu_before = state.nu
        if coords == last_failed:
            state.remove_left(t)
            assert state.nu == nu_before - 1
            continue
        fresh = state.alive_coords(t)
        state.remove_left(t)
        if not fresh:
            # No coordinates outside the current union: this copy was
            # unmatched, so it raises the deficiency for free.
            assert state.nu == nu_before
            chosen.append(t)
            continue
        snap = state.snapshot()
        for c in fresh:
            state.remove_right(c)
        if state.nu == nu_before - len(fresh):
            chosen.append(t)
            union_size += len(fresh)
        else:
            state.restore(snap)
            assert state.nu == nu_before - 1
            last_failed = coords
    return chosen


def max_trivial_multiple(q: FormalProjection) -> tuple[int, DeficiencyWitness]:
    """Largest ``m`` with ``m`` trivial copies embedding in ``q``, with witness.

    Computed as (number of summand copies) minus a maximum matching; the
    returned witness is the canonical attaining sub-multiset and always
    validates against ``q``.
    """
    instances = list(q.term_instances())
    state = _MatchingState(instances)
    best = len(instances) - state.run()
    picked = _extract_witness(instances, state, best)
    grouped = Counter(instances[t] for t in picked)
    union: set[int] = set()
    for t in picked:
        union.update(instances[t])
    witness = DeficiencyWitness(
        terms=tuple(sorted(grouped.items())),
        union_size=len(union),
        deficiency=best,
    )
    assert witness.validate(within=q)
    return best, witness


def maximum_matching(q: FormalProjection) -> int:
    """Size of a maximum summand-to-coordinate matching in ``q``."""
    return _MatchingState(list(q.term_instances())).run()


def is_trivial_subequivalent(m: int, q: FormalProjection) -> bool:
    """Whether ``m`` trivial line bundles embed in ``q``."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise InvalidFamilyError(f"number of copies must be a nonnegative integer, got {m!r}")
    return m <= max_trivial_multiple(q)[0]


def brute_force_max_trivial(q: FormalProjection, max_distinct: int = 20) -> int:
    """Exhaustive oracle for :func:`max_trivial_multiple`.

    Enumerates subfamilies of distinct nontrivial sets, taking all copies
    of any included set (an extra copy of an included set always improves
    the deficiency by one, so nothing is lost).  Exponential in the number
    of distinct sets, hence the bound.
    """
    distinct = [(frozenset(c), m) for c, m in q.terms() if c]
    if len(distinct) > max_distinct:
        raise SizeExceededError(
            f"{len(distinct)} distinct nontrivial sets exceed the brute-force bound {max_distinct}"
        )
    best = 0
    for mask in range(1, 1 << len(distinct)):
        copies = 0
        union: frozenset[int] = frozenset()
        for bit, (coords, mult) in enumerate(distinct):
            if (mask >> bit) & 1:
                copies += mult
                union |= coords
        best = max(best, copies - len(union))
    return best + q.trivial_count


def closed_form_max_trivial(summary: DisjointFamilySummary) -> int:
    """Maximum trivial multiple of a pairwise-disjoint family.

    Each set of cardinality ``s`` taken with multiplicity ``mult``
    contributes ``max(0, mult - s)``, and trivial summands count fully;
    disjointness makes the contributions independent.
    """
    total = summary.trivial
    for s, count, mult in summary.groups:
        if mult > s:
            total += count * (mult - s)
    return total
