"""Finite stages of an inductive system of sphere-product algebras.

Stage ``j`` of the tower carries ``coord_count(j)`` sphere coordinates
and a distinguished projection built from ``unit_multiplicity(j)``
pairwise disjoint index sets of cardinality ``j``.  The composed
connecting map from stage ``j`` into stage ``i`` splits into coordinate
pullbacks, which replicate a family verbatim on fresh coordinate blocks,
and point evaluations, each of which flattens every line bundle to a
trivial summand.  The recurrences are

    unit_multiplicity(1) = 1
    unit_multiplicity(j+1) = (k(j) + 1) * unit_multiplicity(j)
    coord_count(1) = 1
    coord_count(j+1) = k(j) * coord_count(j) + (j+1) * unit_multiplicity(j+1)

with fan-out sequence ``k``, and the stage-``j``-to-``i`` map uses
``prod(k(r) for r in [j, i))`` pullbacks out of a total multiplicity
``prod(k(r) + 1 for r in [j, i))``.

Everything is exact integer or rational arithmetic; no floating point
enters any certified value.  The fan-out series

    sum over s >= 1 of (1 - prod(k(r)/(k(r)+1) for r >= s))

converges whenever the fan-outs grow fast enough; `Tower.series_enclosure`
returns a certified rational interval around it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import DepthTooSmallError, ParameterError, StageRangeError
from .projections import DisjointFamilySummary

__all__ = [
    "FanoutSequence",
    "TowerParams",
    "StageData",
    "ConnectingCounts",
    "RationalInterval",
    "Tower",
    "threshold_window",
    "fraction_to_json",
    "fraction_from_json",
    "decimal_approx",
]


def fraction_to_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def fraction_from_json(data: Mapping) -> Fraction:
    """Parse ``{"num": ..., "den": ...}``, insisting on the canonical form.

    The strings must be plain base-10 integer renderings (arbitrary
    size), the denominator positive and coprime to the numerator, so
    that every value has exactly one accepted encoding.
    """
    try:
        num_s, den_s = data["num"], data["den"]
        num, den = int(num_s), int(den_s)
        if str(num) != num_s or str(den) != den_s:
            raise ValueError("integer strings are not in canonical form")
        value = Fraction(num, den)
        if value.numerator != num or value.denominator != den:
            raise ValueError("rational is not in lowest terms with a positive denominator")
        return value
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"malformed rational {data!r}: {exc}") from exc


def decimal_approx(x: Fraction, places: int = 12) -> str:
    """Decimal rendering for display, truncated toward zero; exact-path
    code never consumes this."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = (x.numerator * 10**places) // x.denominator
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}" if places else f"{sign}{digits}"


@dataclass(frozen=True)
class FanoutSequence:
    """The fan-out numbers ``k(j)`` of the tower, all at least 1.

    kind "geometric": k(j) = base * 2**j (the default, base 1).
    kind "explicit": a finite prefix, continued by doubling its last entry.
    kind "constant": k(j) = constant for every j; the fan-out series then
    diverges, so enclosures fail at every depth -- kept to exercise that
    guard.
    """

    kind: str = "geometric"
    base: int = 1
    values: tuple[int, ...] = ()
    constant: int = 1

    def __post_init__(self):
        if self.kind == "geometric":
            if not isinstance(self.base, int) or self.base < 1:
                raise ParameterError(f"geometric base must be a positive integer, got {self.base!r}")
        elif self.kind == "explicit":
            object.__setattr__(self, "values", tuple(self.values))
            if not self.values:
                raise ParameterError("an explicit fan-out sequence needs at least one value")
            if any(not isinstance(v, int) or v < 1 for v in self.values):
                raise ParameterError(f"fan-out values must be positive integers, got {self.values!r}")
        elif self.kind == "constant":
            if not isinstance(self.constant, int) or self.constant < 1:
                raise ParameterError(f"constant fan-out must be a positive integer, got {self.constant!r}")
        else:
            raise ParameterError(f"unknown fan-out kind {self.kind!r}")

    @classmethod
    def geometric(cls, base: int = 1) -> "FanoutSequence":
        return cls(kind="geometric", base=base)

    @classmethod
    def explicit(cls, values) -> "FanoutSequence":
        return cls(kind="explicit", values=tuple(values))

    @classmethod
    def constant_value(cls, value: int) -> "FanoutSequence":
        return cls(kind="constant", constant=value)

    def value(self, j: int) -> int:
        """k(j) for a 1-based stage index."""
        if j < 1:
            raise StageRangeError(f"fan-out index must be at least 1, got {j}")
        if self.kind == "geometric":
            return self.base << j
        if self.kind == "constant":
            return self.constant
        if j <= len(self.values):
            return self.values[j - 1]
        return self.values[-1] << (j - len(self.values))

    def doubling_start(self) -> int | None:
        """Smallest stage from which ``k(j+1) >= 2*k(j)`` holds forever.

        None when no such stage exists (the constant kind); geometric
        sequences double everywhere, and explicit ones double beyond the
        listed prefix by construction.
        """
        if self.kind == "geometric":
            return 1
        if self.kind == "constant":
            return None
        start = len(self.values)
        while start > 1 and self.values[start - 1] >= 2 * self.values[start - 2]:
            start -= 1
        return start

    def to_json_dict(self) -> dict:
        if self.kind == "geometric":
            return {"kind": "geometric", "base": self.base}
        if self.kind == "explicit":
            return {"kind": "explicit", "values": list(self.values)}
        return {"kind": "constant", "constant": self.constant}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FanoutSequence":
        if not isinstance(data, Mapping) or "kind" not in data:
            raise ParameterError("fan-out description requires a 'kind'")
        kind = data["kind"]
        if kind == "geometric":
            return cls(kind="geometric", base=data.get("base", 1))
        if kind == "explicit":
            return cls(kind="explicit", values=tuple(data.get("values", ())))
        if kind == "constant":
            return cls(kind="constant", constant=data.get("constant", 1))
        raise ParameterError(f"unknown fan-out kind {kind!r}")


@dataclass(frozen=True)
class TowerParams:
    """Fan-out sequence plus the stage and truncation budgets."""

    fanouts: FanoutSequence = field(default_factory=FanoutSequence)
    max_stage: int = 12
    truncation_depth: int = 40

    def __post_init__(self):
        if not isinstance(self.max_stage, int) or self.max_stage < 1:
            raise ParameterError(f"max stage must be a positive integer, got {self.max_stage!r}")
        if not isinstance(self.truncation_depth, int) or self.truncation_depth < self.max_stage:
            raise ParameterError(
                f"truncation depth {self.truncation_depth!r} must be an integer >= max stage {self.max_stage}"
            )

    def to_json_dict(self) -> dict:
        return {
            "fanouts": self.fanouts.to_json_dict(),
            "max_stage": self.max_stage,
            "truncation_depth": self.truncation_depth,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "TowerParams":
        if not isinstance(data, Mapping):
            raise ParameterError("tower parameters must be an object")
        fanouts = FanoutSequence.from_json_dict(data.get("fanouts", {"kind": "geometric", "base": 1}))
        return cls(
            fanouts=fanouts,
            max_stage=data.get("max_stage", 12),
            truncation_depth=data.get("truncation_depth", 40),
        )


@dataclass(frozen=True)
class StageData:
    """Exact data of one tower stage."""

    index: int
    unit_multiplicity: int
    coord_count: int
    projection: DisjointFamilySummary

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "unit_multiplicity": self.unit_multiplicity,
            "coord_count": self.coord_count,
            "projection": self.projection.to_json_dict(),
        }


@dataclass(frozen=True)
class ConnectingCounts:
    """Pullback/evaluation split of the composed map from ``source`` to ``target``."""

    target: int
    source: int
    pullbacks: int
    evaluations: int

    @property
    def multiplicity(self) -> int:
        return self.pullbacks + self.evaluations

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "source": self.source,
            "pullbacks": self.pullbacks,
            "evaluations": self.evaluations,
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class RationalInterval:
    """Exact rational enclosure ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not isinstance(self.lo, Fraction) or not isinstance(self.hi, Fraction):
            raise ParameterError("interval endpoints must be Fractions")
        if self.lo > self.hi:
            raise ParameterError(f"empty interval: {self.lo} > {self.hi}")

    @classmethod
    def point(cls, x) -> "RationalInterval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def is_within(self, outer: "RationalInterval") -> bool:
        return outer.lo <= self.lo and self.hi <= outer.hi

    def to_json_dict(self) -> dict:
        return {"lo": fraction_to_json(self.lo), "hi": fraction_to_json(self.hi)}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "RationalInterval":
        if not isinstance(data, Mapping) or "lo" not in data or "hi" not in data:
            raise ParameterError("interval requires 'lo' and 'hi'")
        return cls(fraction_from_json(data["lo"]), fraction_from_json(data["hi"]))


class Tower:
    """Exact stage data for one parameter set, memoised per instance.

    The memo tables only grow and every accessor is deterministic, so
    sharing one instance across threads is safe under the usual
    interpreter guarantees.  Only :meth:`stage` enforces the configured
    stage budget; the arithmetic accessors are total because all the
    recurrences are, which lets trace reports run past the budget.
    """

    def __init__(self, params: TowerParams | None = None):
        self.params = params or TowerParams()
        self._mult = [1]
        self._coords = [1]

    def _extend(self, j: int) -> None:
        while len(self._mult) < j:
            stage = len(self._mult)
            k = self.params.fanouts.value(stage)
            m_next = (k + 1) * self._mult[-1]
            self._mult.append(m_next)
            self._coords.append(k * self._coords[-1] + (stage + 1) * m_next)

    def unit_multiplicity(self, j: int) -> int:
        """Rank of the stage-``j`` distinguished projection."""
        if j < 1:
            raise StageRangeError(f"stage index must be at least 1, got {j}")
        self._extend(j)
        return self._mult[j - 1]

    def coord_count(self, j: int) -> int:
        """Number of sphere coordinates of stage ``j``."""
        if j < 1:
            raise StageRangeError(f"stage index must be at least 1, got {j}")
        self._extend(j)
        return self._coords[j - 1]

    def stage_projection(self, j: int) -> DisjointFamilySummary:
        """The distinguished stage projection: ``unit_multiplicity(j)``
        disjoint sets of cardinality ``j``, each used once."""
        return DisjointFamilySummary([(j, self.unit_multiplicity(j), 1)], 0)

    def stage(self, j: int) -> StageData:
        """Full data of stage ``j``; the index must respect the budget."""
        if not (1 <= j <= self.params.max_stage):
            raise StageRangeError(
                f"stage {j} outside the configured range 1..{self.params.max_stage}"
            )
        return StageData(
            index=j,
            unit_multiplicity=self.unit_multiplicity(j),
            coord_count=self.coord_count(j),
            projection=self.stage_projection(j),
        )

    def map_counts(self, i: int, j: int) -> ConnectingCounts:
        """Pullback and evaluation counts of the composed map from ``j`` to ``i``."""
        if j < 1 or i < j:
            raise StageRangeError(f"need target >= source >= 1, got target {i}, source {j}")
        pullbacks = 1
        total = 1
        for r in range(j, i):
            k = self.params.fanouts.value(r)
            pullbacks *= k
            total *= k + 1
        return ConnectingCounts(target=i, source=j, pullbacks=pullbacks, evaluations=total - pullbacks)

    def pushforward(self, i: int, j: int, family: DisjointFamilySummary) -> DisjointFamilySummary:
        """Image of a stage-``j`` family under the map into stage ``i``.

        Every pullback replicates the family on a fresh coordinate block;
        every point evaluation contributes ``rank`` trivial summands.
        """
        counts = self.map_counts(i, j)
        if family.coord_usage > self.coord_count(j):
            raise StageRangeError(
                f"family occupies {family.coord_usage} coordinates but stage {j} has {self.coord_count(j)}"
            )
        groups = [(s, count * counts.pullbacks, mult) for s, count, mult in family.groups]
        trivial = counts.pullbacks * family.trivial + counts.evaluations * family.rank
        return DisjointFamilySummary(groups, trivial)

    def partial_sum(self, i: int, j: int) -> DisjointFamilySummary:
        """The first ``j`` stage projections, pushed into stage ``i`` and summed."""
        if not (1 <= j <= i):
            raise StageRangeError(f"need target >= source >= 1, got target {i}, source {j}")
        groups = []
        trivial = 0
        for s in range(1, j + 1):
            counts = self.map_counts(i, s)
            mult = self.unit_multiplicity(s)
            groups.append((s, mult * counts.pullbacks, 1))
            trivial += mult * counts.evaluations
        return DisjointFamilySummary(groups, trivial)

    def trivial_copy_capacity(self, i: int, j: int, factor: int) -> int:
        """Largest trivial multiple of ``factor`` copies of ``partial_sum(i, j)``.

        Closed form by disjointness: a pulled-back cardinality-``s`` set
        taken ``factor`` times contributes ``max(0, factor - s)``, and
        evaluation summands count fully.
        """
        if not isinstance(factor, int) or factor < 1:
            raise ParameterError(f"scale factor must be a positive integer, got {factor!r}")
        if not (1 <= j <= i):
            raise StageRangeError(f"need target >= source >= 1, got target {i}, source {j}")
        total = 0
        for s in range(1, j + 1):
            counts = self.map_counts(i, s)
            mult = self.unit_multiplicity(s)
            if factor > s:
                total += mult * counts.pullbacks * (factor - s)
            total += factor * mult * counts.evaluations
        return total

    def series_enclosure(self, depth: int | None = None) -> RationalInterval:
        """Certified enclosure of the fan-out series.

        The series is ``sum_s (1 - P(s))`` with ``P(s)`` the infinite
        product of ``k(r)/(k(r)+1)`` from ``r = s`` on.  Head terms use
        exact partial products to the truncation depth ``T``; both tails
        rest on ``sum_{r>T} 1/(k(r)+1) <= 3/(k(T+1)+1)``, valid because
        the fan-outs double from some stage on, making consecutive bound
        ratios at most 2/3.  When no doubling stage precedes the depth,
        or the tail bound is not yet below 1, the depth certifies nothing.
        """
        depth = self.params.truncation_depth if depth is None else depth
        if not isinstance(depth, int) or depth < 1:
            raise ParameterError(f"depth must be a positive integer, got {depth!r}")
        fan = self.params.fanouts
        start = fan.doubling_start()
        if start is None or depth + 1 < start:
            raise DepthTooSmallError(
                "the fan-out sequence does not provably double within this depth; "
                "the series tail cannot be bounded"
            )
        tail_unit = Fraction(1, fan.value(depth + 1) + 1)
        tail_sum = 3 * tail_unit          # sum of 1/(k(r)+1) beyond the depth
        if tail_sum >= 1:
            raise DepthTooSmallError(
                f"tail bound {tail_sum} at depth {depth} is not below 1; increase the depth"
            )
        head_lo = Fraction(0)
        partial_total = Fraction(0)
        product = Fraction(1)
        for s in range(depth, 0, -1):
            k = fan.value(s)
            product *= Fraction(k, k + 1)
            head_lo += 1 - product
            partial_total += product
        # terms beyond the depth: each is at most its own tail sum, and
        # sum_{s>T} sum_{r>=s} 1/(k(r)+1) <= (1 + 2*(2/3) + 3*(2/3)^2 + ...) * tail_unit
        term_tail = 9 * tail_unit
        return RationalInterval(head_lo, head_lo + partial_total * tail_sum + term_tail)


def threshold_window(n: int, enclosure: RationalInterval) -> RationalInterval:
    """Enclosure of ``n(n-1)/2 + n * series`` from a series enclosure."""
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    base = Fraction(n * (n - 1), 2)
    return RationalInterval(base + n * enclosure.lo, base + n * enclosure.hi)
