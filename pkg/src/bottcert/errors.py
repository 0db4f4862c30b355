"""Exception hierarchy shared across the package.

Everything raised deliberately by this package derives from
:class:`BottcertError`, so callers can catch one type at the boundary.
"""

from __future__ import annotations


class BottcertError(Exception):
    """Base class for all errors raised by this package."""


class InvalidFamilyError(BottcertError, ValueError):
    """An index-set family is malformed (e.g. an empty set where a
    nonempty one is required, or a negative multiplicity)."""


class NotDisjointError(BottcertError, ValueError):
    """Compression to the disjoint-family form was requested, but two
    distinct summands share a coordinate."""

    def __init__(self, first: tuple[int, ...], second: tuple[int, ...], shared: int):
        self.first = first
        self.second = second
        self.shared = shared
        super().__init__(
            f"summands {set(first)} and {set(second)} share coordinate {shared}; "
            "the compressed form requires pairwise disjoint index sets"
        )


class SizeExceededError(BottcertError):
    """An exact but exponential cross-check was asked to run beyond its
    configured size bound."""


class ParameterError(BottcertError, ValueError):
    """Tower or CLI parameters are out of their documented range."""


class StageRangeError(BottcertError, ValueError):
    """A stage index lies outside the range a tower was built for."""


class DepthTooSmallError(BottcertError):
    """The truncation depth does not yet certify convergence of the
    fan-out series, so no sound enclosure can be produced."""


class InadmissibleNError(BottcertError, ValueError):
    """The requested matrix-size parameter admits no valid threshold
    (the lower enclosure endpoint already fails the strict inequality)."""


class BudgetExhaustedError(BottcertError):
    """The stage budget ran out before a witness stage was found; the
    verification is inconclusive rather than false."""


class CertificateError(BottcertError):
    """A certificate failed structural validation or re-verification."""
