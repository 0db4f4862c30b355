"""Formal sums of Bott line bundles over finite products of 2-spheres.

A rank-one summand is described by the set of sphere coordinates it is
pulled back along: the empty set stands for the trivial line bundle, and
a nonempty set ``{i1, ..., is}`` for the tensor product of the Bott
bundles pulled back from those coordinates.  A :class:`FormalProjection`
is a finite multiset of such index sets and models a direct sum of these
line bundles (equivalently, a projection in a matrix algebra over the
product of spheres, up to equivalence).

When the nonempty index sets happen to be pairwise disjoint the whole
multiset is determined by how many sets of each cardinality and
multiplicity occur; :class:`DisjointFamilySummary` stores exactly that
and scales to astronomically many summands.
"""

from __future__ import annotations

import json
from collections import Counter
from typing import Iterable, Iterator, Mapping

from .errors import InvalidFamilyError, NotDisjointError

Coords = tuple[int, ...]

__all__ = [
    "Coords",
    "FormalProjection",
    "DisjointFamilySummary",
    "CoordinateAllocator",
    "canonical_coords",
]


def canonical_coords(coords: Iterable[int]) -> Coords:
    """Normalise an iterable of coordinate labels to a sorted tuple.

    Labels must be positive integers; duplicates collapse, since an
    index *set* is meant.
    """
    out = tuple(sorted(set(coords)))
    for c in out:
        if not isinstance(c, int) or isinstance(c, bool) or c < 1:
            raise InvalidFamilyError(f"coordinate labels must be positive integers, got {c!r}")
    return out


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class CoordinateAllocator:
    """Hands out fresh coordinate labels, so separately expanded summands
    can be guaranteed disjoint within one ambient sphere product."""

    def __init__(self, start: int = 1):
        if start < 1:
            raise InvalidFamilyError("coordinate labels start at 1")
        self._next = start

    def fresh(self) -> int:
        c = self._next
        self._next += 1
        return c

    def block(self, size: int) -> Coords:
        """Allocate ``size`` consecutive fresh labels."""
        if size < 0:
            raise InvalidFamilyError("block size must be nonnegative")
        out = tuple(range(self._next, self._next + size))
        self._next += size
        return out

    @property
    def next_label(self) -> int:
        return self._next


class FormalProjection:
    """An explicit multiset of coordinate index sets.

    Instances are immutable value objects; terms are kept in a canonical
    sorted order so equal multisets compare and hash equal and all
    iteration is deterministic.
    """

    __slots__ = ("_terms", "_rank")

    def __init__(self, terms: Mapping[Iterable[int], int] | Iterable[tuple[Iterable[int], int]] = ()):
        counter: Counter[Coords] = Counter()
        items = terms.items() if isinstance(terms, Mapping) else terms
        for coords, mult in items:
            if not isinstance(mult, int) or isinstance(mult, bool) or mult < 0:
                raise InvalidFamilyError(f"multiplicity must be a nonnegative integer, got {mult!r}")
            if mult:
                counter[canonical_coords(coords)] += mult
        self._terms: tuple[tuple[Coords, int], ...] = tuple(sorted(counter.items()))
        self._rank = sum(m for _, m in self._terms)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "FormalProjection":
        return cls()

    @classmethod
    def trivial(cls, count: int = 1) -> "FormalProjection":
        """``count`` copies of the trivial line bundle."""
        return cls([((), count)])

    @classmethod
    def single(cls, coords: Iterable[int], mult: int = 1) -> "FormalProjection":
        return cls([(coords, mult)])

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "FormalProjection":
        """Build from bare index sets, each with multiplicity one
        (repeats accumulate)."""
        return cls((s, 1) for s in sets)

    # -- inspection ---------------------------------------------------

    @property
    def rank(self) -> int:
        """Total number of rank-one summands, counted with multiplicity."""
        return self._rank

    def terms(self) -> Iterator[tuple[Coords, int]]:
        """Yield ``(coords, multiplicity)`` in canonical order."""
        return iter(self._terms)

    def term_instances(self) -> Iterator[Coords]:
        """Yield each index set once per unit of multiplicity, in
        canonical order (empty sets first)."""
        for coords, mult in self._terms:
            for _ in range(mult):
                yield coords

    @property
    def distinct_count(self) -> int:
        return len(self._terms)

    @property
    def trivial_count(self) -> int:
        for coords, mult in self._terms:
            if coords == ():
                return mult
        return 0

    @property
    def support(self) -> frozenset[int]:
        """All coordinate labels used by some summand."""
        return frozenset(c for coords, _ in self._terms for c in coords)

    def multiplicity(self, coords: Iterable[int]) -> int:
        key = canonical_coords(coords)
        for c, m in self._terms:
            if c == key:
                return m
        return 0

    # -- algebra ------------------------------------------------------

    def direct_sum(self, other: "FormalProjection") -> "FormalProjection":
        return FormalProjection(list(self._terms) + list(other._terms))

    __add__ = direct_sum

    def scale(self, n: int) -> "FormalProjection":
        """The ``n``-fold direct sum of this projection with itself."""
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise InvalidFamilyError(f"scale factor must be a nonnegative integer, got {n!r}")
        return FormalProjection((c, m * n) for c, m in self._terms)

    def __rmul__(self, n: int) -> "FormalProjection":
        return self.scale(n)

    def relabel(self, mapping: Mapping[int, int], forbidden: Iterable[int] = ()) -> "FormalProjection":
        """Rename coordinates through an injective ``mapping``.

        The mapping must cover the support.  Labels in ``forbidden``
        (e.g. a block already reserved by another summand) are rejected
        as images.
        """
        support = self.support
        missing = support - mapping.keys()
        if missing:
            raise InvalidFamilyError(f"relabel mapping is missing coordinates {sorted(missing)}")
        images = [mapping[c] for c in sorted(support)]
        if len(set(images)) != len(images):
            raise InvalidFamilyError("relabel mapping is not injective on the support")
        bad = set(images) & set(forbidden)
        if bad:
            raise InvalidFamilyError(f"relabel images {sorted(bad)} collide with reserved labels")
        return FormalProjection(
            (tuple(mapping[c] for c in coords), m) for coords, m in self._terms
        )

    def compress(self) -> "DisjointFamilySummary":
        """Summarise as a disjoint family.

        Raises :class:`NotDisjointError` if two distinct nonempty
        summands share a coordinate.  Multiple copies of one set are
        fine; the copies share coordinates with themselves only.
        """
        seen: dict[int, Coords] = {}
        for coords, _ in self._terms:
            for c in coords:
                if c in seen:
                    raise NotDisjointError(seen[c], coords, c)
                seen[c] = coords
        groups: Counter[tuple[int, int]] = Counter()
        trivial = 0
        for coords, mult in self._terms:
            if coords == ():
                trivial = mult
            else:
                groups[(len(coords), mult)] += 1
        return DisjointFamilySummary(
            [(s, count, mult) for (s, mult), count in groups.items()], trivial
        )

    # -- serialisation ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "terms": [
                {"coords": list(coords), "mult": mult} for coords, mult in self._terms
            ]
        }

    def canonical_json(self) -> str:
        return _canonical_json(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FormalProjection":
        if not isinstance(data, Mapping) or "terms" not in data:
            raise InvalidFamilyError('explicit form requires a "terms" array')
        terms = data["terms"]
        if not isinstance(terms, list):
            raise InvalidFamilyError('"terms" must be an array')
        pairs = []
        for entry in terms:
            if not isinstance(entry, Mapping) or "coords" not in entry:
                raise InvalidFamilyError('each term needs a "coords" array')
            pairs.append((entry["coords"], entry.get("mult", 1)))
        return cls(pairs)

    # -- dunder -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalProjection):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __len__(self) -> int:
        return self._rank

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{set(c) if c else '{}'}x{m}" for c, m in self._terms
        )
        return f"FormalProjection({inner})"


class DisjointFamilySummary:
    """Compressed form of a pairwise-disjoint family of index sets.

    ``groups`` lists ``(cardinality, set_count, multiplicity)`` triples:
    ``set_count`` distinct sets of the stated cardinality, each summand
    repeated ``multiplicity`` times.  ``trivial`` counts copies of the
    trivial line bundle.  The concrete coordinate labels are forgotten;
    they are interchangeable once disjointness is known.
    """

    __slots__ = ("_groups", "_trivial")

    def __init__(self, groups: Iterable[tuple[int, int, int]] = (), trivial: int = 0):
        if not isinstance(trivial, int) or isinstance(trivial, bool) or trivial < 0:
            raise InvalidFamilyError(f"trivial count must be a nonnegative integer, got {trivial!r}")
        merged: Counter[tuple[int, int]] = Counter()
        for s, count, mult in groups:
            for v, name in ((s, "cardinality"), (count, "set count"), (mult, "multiplicity")):
                if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                    raise InvalidFamilyError(f"{name} must be a nonnegative integer, got {v!r}")
            if s == 0:
                raise InvalidFamilyError("cardinality-0 sets belong in the trivial count")
            if count and mult:
                merged[(s, mult)] += count
        self._groups: tuple[tuple[int, int, int], ...] = tuple(
            sorted((s, count, mult) for (s, mult), count in merged.items())
        )
        self._trivial = trivial

    @classmethod
    def trivial_only(cls, count: int) -> "DisjointFamilySummary":
        return cls((), count)

    # -- inspection ---------------------------------------------------

    @property
    def groups(self) -> tuple[tuple[int, int, int], ...]:
        return self._groups

    @property
    def trivial(self) -> int:
        return self._trivial

    @property
    def rank(self) -> int:
        return self._trivial + sum(count * mult for _, count, mult in self._groups)

    @property
    def set_count(self) -> int:
        """Number of distinct nonempty sets in the family."""
        return sum(count for _, count, _ in self._groups)

    @property
    def coord_usage(self) -> int:
        """Total number of coordinates the family occupies."""
        return sum(s * count for s, count, _ in self._groups)

    # -- algebra ------------------------------------------------------

    def scale(self, n: int) -> "DisjointFamilySummary":
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise InvalidFamilyError(f"scale factor must be a nonnegative integer, got {n!r}")
        return DisjointFamilySummary(
            ((s, count, mult * n) for s, count, mult in self._groups),
            self._trivial * n,
        )

    def __rmul__(self, n: int) -> "DisjointFamilySummary":
        return self.scale(n)

    def direct_sum(self, other: "DisjointFamilySummary") -> "DisjointFamilySummary":
        """Concatenate two summaries.

        The caller vouches that the two families live on disjoint
        coordinate blocks; the summary has no way to check this.
        """
        return DisjointFamilySummary(
            list(self._groups) + list(other._groups), self._trivial + other._trivial
        )

    __add__ = direct_sum

    def expand(self, allocator: CoordinateAllocator | None = None) -> FormalProjection:
        """Materialise an explicit representative on fresh coordinates.

        Deterministic: groups are walked in canonical order and labels
        are taken consecutively from the allocator.
        """
        allocator = allocator or CoordinateAllocator()
        pairs: list[tuple[Coords, int]] = [((), self._trivial)] if self._trivial else []
        for s, count, mult in self._groups:
            for _ in range(count):
                pairs.append((allocator.block(s), mult))
        return FormalProjection(pairs)

    # -- serialisation ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "groups": [
                {"s": s, "count": count, "mult": mult} for s, count, mult in self._groups
            ],
            "trivial": self._trivial,
        }

    def canonical_json(self) -> str:
        return _canonical_json(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "DisjointFamilySummary":
        if not isinstance(data, Mapping) or "groups" not in data:
            raise InvalidFamilyError('compressed form requires a "groups" array')
        raw = data["groups"]
        if not isinstance(raw, list):
            raise InvalidFamilyError('"groups" must be an array')
        groups = []
        for entry in raw:
            if not isinstance(entry, Mapping):
                raise InvalidFamilyError("each group must be an object")
            try:
                groups.append((entry["s"], entry["count"], entry["mult"]))
            except KeyError as exc:
                raise InvalidFamilyError(f"group is missing key {exc}") from exc
        return cls(groups, data.get("trivial", 0))

    # -- dunder -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, DisjointFamilySummary):
            return NotImplemented
        return self._groups == other._groups and self._trivial == other._trivial

    def __hash__(self) -> int:
        return hash((self._groups, self._trivial))

    def __repr__(self) -> str:
        return f"DisjointFamilySummary(groups={list(self._groups)}, trivial={self._trivial})"
