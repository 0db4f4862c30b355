"""Certificate-producing verification and trace-growth reports.

The verified claim: for an admissible multiple ``n`` (strictly above the
fan-out series), choose the least integer threshold strictly above
``n(n-1)/2 + n * series_hi``.  Then that many trivial summands never
embed in ``n`` copies of any stage partial sum -- the uniform bound
guarantees it at every stage, and the certificate also records the exact
per-stage inequalities -- yet at some witness stage they do embed in
``2n`` copies.  If the scaled limit projection were properly infinite,
the doubled-copy embedding would force the single-copy one, so it is not.

Certificates are canonical JSON and self-checking: every recorded
inequality re-evaluates from its stored operands, and the whole record is
recomputed from its parameter echo and compared byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    BottcertError,
    BudgetExhaustedError,
    CertificateError,
    InadmissibleNError,
    ParameterError,
)
from .projections import DisjointFamilySummary
from .tower import (
    RationalInterval,
    Tower,
    TowerParams,
    decimal_approx,
    fraction_from_json,
    fraction_to_json,
    threshold_window,
)

__all__ = [
    "CONCLUSION_TAG",
    "CERTIFICATE_SCHEMA",
    "StageRecord",
    "Certificate",
    "choose_threshold",
    "verify_not_properly_infinite",
    "check_certificate",
    "TraceGrowthReport",
    "trace_growth",
    "ObstructionReport",
    "stable_matrix_obstruction",
]

CONCLUSION_TAG = "scaled-limit-projection-not-properly-infinite"
CERTIFICATE_SCHEMA = "bottcert.certificate/1"
UNIFORM_BOUND_STATEMENT = (
    "threshold > n*(n-1)/2 + n*series_hi"
    " >= capacity(i,j,n)/unit_multiplicity(i) for every i >= j"
)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CertificateError(message)


def _as_int(value, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise CertificateError(f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class StageRecord:
    """One exact inequality between a capacity and a threshold bound.

    ``capacity`` is the largest trivial multiple of ``scale`` copies of
    the stage partial sum from ``source`` into ``target``; ``bound`` is
    threshold times the target's unit multiplicity.
    """

    target: int
    source: int
    scale: int
    capacity: int
    bound: int

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "source": self.source,
            "scale": self.scale,
            "capacity": self.capacity,
            "bound": self.bound,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping, name: str) -> "StageRecord":
        if not isinstance(data, Mapping) or set(data) != {"target", "source", "scale", "capacity", "bound"}:
            raise CertificateError(f"{name} must have exactly the stage-record fields")
        return cls(**{key: _as_int(data[key], f"{name}.{key}") for key in data})


@dataclass(frozen=True)
class Certificate:
    """Self-checking record of one successful verification."""

    params: TowerParams
    n: int
    threshold: int
    series: RationalInterval
    uniform_bound: Fraction
    stage_checks: tuple[StageRecord, ...]
    witness: StageRecord
    conclusion: str = CONCLUSION_TAG

    def to_json_dict(self) -> dict:
        return {
            "schema": CERTIFICATE_SCHEMA,
            "conclusion": self.conclusion,
            "params": self.params.to_json_dict(),
            "n": self.n,
            "threshold": self.threshold,
            "series_enclosure": self.series.to_json_dict(),
            "uniform_bound": {
                "threshold": self.threshold,
                "value": fraction_to_json(self.uniform_bound),
                "statement": UNIFORM_BOUND_STATEMENT,
            },
            "stage_checks": [record.to_json_dict() for record in self.stage_checks],
            "witness_stage": self.witness.to_json_dict(),
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Certificate":
        if not isinstance(data, Mapping):
            raise CertificateError("certificate must be a JSON object")
        expected = {
            "schema", "conclusion", "params", "n", "threshold",
            "series_enclosure", "uniform_bound", "stage_checks", "witness_stage",
        }
        if set(data) != expected:
            raise CertificateError(
                f"certificate fields {sorted(set(data) ^ expected)} unexpected or missing"
            )
        _require(data["schema"] == CERTIFICATE_SCHEMA, f"unknown schema {data['schema']!r}")
        try:
            params = TowerParams.from_json_dict(data["params"])
            series = RationalInterval.from_json_dict(data["series_enclosure"])
        except ParameterError as exc:
            raise CertificateError(str(exc)) from exc
        bound_record = data["uniform_bound"]
        if not isinstance(bound_record, Mapping) or set(bound_record) != {"threshold", "value", "statement"}:
            raise CertificateError("uniform_bound must carry threshold, value and statement")
        _require(bound_record["statement"] == UNIFORM_BOUND_STATEMENT, "unexpected uniform-bound statement")
        try:
            uniform_value = fraction_from_json(bound_record["value"])
        except ParameterError as exc:
            raise CertificateError(str(exc)) from exc
        checks_raw = data["stage_checks"]
        if not isinstance(checks_raw, list):
            raise CertificateError("stage_checks must be an array")
        checks = tuple(
            StageRecord.from_json_dict(entry, f"stage_checks[{pos}]")
            for pos, entry in enumerate(checks_raw)
        )
        cert = cls(
            params=params,
            n=_as_int(data["n"], "n"),
            threshold=_as_int(data["threshold"], "threshold"),
            series=series,
            uniform_bound=uniform_value,
            stage_checks=checks,
            witness=StageRecord.from_json_dict(data["witness_stage"], "witness_stage"),
            conclusion=data["conclusion"],
        )
        _require(_as_int(bound_record["threshold"], "uniform_bound.threshold") == cert.threshold,
                 "uniform_bound threshold does not echo the certificate threshold")
        return cert


def choose_threshold(n: int, enclosure: RationalInterval) -> tuple[int, Fraction]:
    """Least integer strictly above ``n(n-1)/2 + n * hi``, with that bound.

    The bound dominates ``capacity(i, j, n) / m_i`` for every pair
    ``i >= j``: each pullback weight is a product of factors
    ``k/(k+1) <= 1``, so the pullback part is at most
    ``sum over s < n of (n - s) = n(n-1)/2``, and the evaluation part is
    ``n`` times a partial sum of the fan-out series, hence at most
    ``n * hi``.  That makes a single rational comparison per stage
    sufficient for the universally quantified claim.
    """
    window = threshold_window(n, enclosure)
    return math.floor(window.hi) + 1, window.hi


def verify_not_properly_infinite(params: TowerParams | None = None, n: int = 2) -> Certificate:
    """Produce a certificate that ``n`` times the limit projection is not
    properly infinite, or raise.

    Stage checks cover every source/target pair up to the stage budget;
    the witness search walks doubled-scale capacities with the source
    starting at ``2n`` (below that the doubled inequality cannot hold),
    taking the first hit in (source, target) order.
    """
    tower = Tower(params)
    params = tower.params
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    enclosure = tower.series_enclosure()
    if Fraction(n) <= enclosure.hi:
        raise InadmissibleNError(
            f"n = {n} does not exceed the series upper bound "
            f"{decimal_approx(enclosure.hi, 6)}; no threshold separates the scales"
        )
    threshold, uniform_bound = choose_threshold(n, enclosure)
    checks = []
    for i in range(1, params.max_stage + 1):
        bound = threshold * tower.unit_multiplicity(i)
        for j in range(1, i + 1):
            capacity = tower.trivial_copy_capacity(i, j, n)
            if capacity >= bound:
                raise BottcertError(
                    f"internal error: stage ({i}, {j}) capacity {capacity} contradicts "
                    f"the uniform bound; the enclosure or the closed form is wrong"
                )
            checks.append(StageRecord(target=i, source=j, scale=n, capacity=capacity, bound=bound))
    witness = None
    for j in range(2 * n, params.max_stage + 1):
        for i in range(j, params.max_stage + 1):
            capacity = tower.trivial_copy_capacity(i, j, 2 * n)
            bound = threshold * tower.unit_multiplicity(i)
            if capacity >= bound:
                witness = StageRecord(target=i, source=j, scale=2 * n, capacity=capacity, bound=bound)
                break
        if witness is not None:
            break
    if witness is None:
        raise BudgetExhaustedError(
            f"no witness stage up to the budget {params.max_stage} for n = {n}; "
            f"the verification is inconclusive, raise the stage budget"
        )
    return Certificate(
        params=params,
        n=n,
        threshold=threshold,
        series=enclosure,
        uniform_bound=uniform_bound,
        stage_checks=tuple(checks),
        witness=witness,
    )


def check_certificate(data: "Certificate | Mapping | str") -> Certificate:
    """Re-verify a certificate; return the parsed value or raise
    :class:`CertificateError`.

    First every stored inequality is re-evaluated from stored operands,
    then the certificate is recomputed from its parameter echo and the
    two canonical serializations are compared byte for byte, so any
    single altered field is caught.
    """
    try:
        if isinstance(data, Certificate):
            payload = data.to_json_dict()
        elif isinstance(data, str):
            payload = json.loads(data)
        else:
            payload = data
        cert = Certificate.from_json_dict(payload)

        _require(cert.conclusion == CONCLUSION_TAG, f"unknown conclusion {cert.conclusion!r}")
        _require(cert.n >= 1, "n must be positive")
        _require(Fraction(cert.n) > cert.series.hi, "n does not exceed the stored series bound")
        window_hi = Fraction(cert.n * (cert.n - 1), 2) + cert.n * cert.series.hi
        _require(cert.uniform_bound == window_hi, "uniform bound does not match the stored enclosure")
        _require(cert.threshold > cert.uniform_bound, "threshold does not exceed the uniform bound")
        _require(cert.threshold == math.floor(window_hi) + 1, "threshold is not the least admissible integer")

        seen = set()
        for record in cert.stage_checks:
            _require(record.scale == cert.n, "stage check at the wrong scale")
            _require(1 <= record.source <= record.target <= cert.params.max_stage,
                     "stage check outside the stage budget")
            _require(record.capacity < record.bound, "a stage check inequality fails")
            seen.add((record.target, record.source))
        wanted = {(i, j) for i in range(1, cert.params.max_stage + 1) for j in range(1, i + 1)}
        _require(seen == wanted and len(cert.stage_checks) == len(wanted),
                 "stage checks do not cover every pair up to the budget exactly once")

        witness = cert.witness
        _require(witness.scale == 2 * cert.n, "witness at the wrong scale")
        _require(2 * cert.n <= witness.source <= witness.target <= cert.params.max_stage,
                 "witness stage outside the search range")
        _require(witness.capacity >= witness.bound, "the witness inequality fails")

        fresh = verify_not_properly_infinite(cert.params, cert.n)
        _require(fresh.canonical_json() == cert.canonical_json(),
                 "recomputation from the parameter echo disagrees with the stored record")
        return cert
    except CertificateError:
        raise
    except (BottcertError, ValueError, TypeError, KeyError) as exc:
        raise CertificateError(f"certificate rejected: {exc}") from exc


@dataclass(frozen=True)
class TraceGrowthReport:
    """Symbolic linear growth of the canonical traces.

    Each entry pairs a summand count with the coefficient of the symbolic
    unit weight; the rendered value is ``coefficient*k``.
    """

    mode: str
    unit_weight: str
    entries: tuple[tuple[int, int], ...]
    verified_rank_stages: int

    def values(self) -> tuple[str, ...]:
        return tuple(f"{coeff}*{self.unit_weight}" for _, coeff in self.entries)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "unit_weight": self.unit_weight,
            "entries": [
                {"count": count, "coefficient": coeff, "value": f"{coeff}*{self.unit_weight}"}
                for count, coeff in self.entries
            ],
            "verified_rank_stages": self.verified_rank_stages,
        }


def trace_growth(params: TowerParams | None = None, mode: str = "simple", stages: int = 10) -> TraceGrowthReport:
    """Report the exactly linear trace values of the first partial sums.

    In "simple" mode the rank identity behind the growth is verified
    first: the stage projection, and the image of one trivial summand
    from stage 1, both have rank equal to the stage unit multiplicity.
    Then the trace of the first ``c`` summands is ``c`` times the unit
    weight, in either mode, because every summand has unit trace weight
    (stage projections after normalisation, rank-one summands directly).
    """
    if mode not in ("simple", "nonsimple"):
        raise ParameterError(f"mode must be 'simple' or 'nonsimple', got {mode!r}")
    if not isinstance(stages, int) or stages < 1:
        raise ParameterError(f"stages must be a positive integer, got {stages!r}")
    verified = 0
    if mode == "simple":
        tower = Tower(params)
        unit = DisjointFamilySummary.trivial_only(1)
        for j in range(1, stages + 1):
            expected = tower.unit_multiplicity(j)
            got_projection = tower.stage_projection(j).rank
            got_unit_image = tower.pushforward(j, 1, unit).rank
            if not (got_projection == got_unit_image == expected):
                raise BottcertError(
                    f"internal error: rank identity fails at stage {j}: "
                    f"{got_projection}, {got_unit_image}, {expected}"
                )
            verified = j
    entries = tuple((c, c) for c in range(1, stages + 1))
    return TraceGrowthReport(mode=mode, unit_weight="k", entries=entries, verified_rank_stages=verified)


@dataclass(frozen=True)
class ObstructionReport:
    """Implication chain from a certificate to non-stability of the
    matrix amplification; boolean-valued for scripting."""

    n: int
    chain: tuple[str, ...]

    def __bool__(self) -> bool:
        return True

    def to_json_dict(self) -> dict:
        return {"n": self.n, "not_stable": True, "chain": list(self.chain)}


def stable_matrix_obstruction(cert: "Certificate | Mapping | str") -> ObstructionReport:
    """Derive, from a valid certificate for ``n``, that the ``n``-fold
    matrix amplification of the corner algebra is not stable.

    Purely report-level: the certificate is re-verified, then the chain
    is recorded for that same ``n`` only (no generalisation to other
    multiples without their own certificates).
    """
    cert = check_certificate(cert)
    n = cert.n
    chain = (
        f"certified: {n} times the limit projection is not properly infinite "
        f"(threshold {cert.threshold}, witness stage {cert.witness.target})",
        f"the multiplier unit of the {n}-fold matrix amplification of the corner algebra "
        f"is that scaled projection",
        "a stable algebra would make its multiplier unit properly infinite",
        f"hence the {n}-fold matrix amplification is not stable",
    )
    return ObstructionReport(n=n, chain=chain)
