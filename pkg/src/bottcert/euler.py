"""Cohomological cross-check for the comparison engine.

The cohomology of a finite product of 2-spheres is the polynomial ring on
one generator per sphere with every generator squaring to zero.  A family
of nonempty index sets admits a system of distinct representatives (SDR)
exactly when the product of its linear forms ``sum of x_i over i in I``
survives in this ring: each surviving monomial picks one distinct
coordinate per set, and coefficients count the SDRs with a given image.
This yields a matching-free route to the engine's numbers on small
instances; it is exponential and sits behind size bounds.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import InvalidFamilyError, SizeExceededError
from .projections import FormalProjection, canonical_coords

__all__ = [
    "MultilinearPoly",
    "mul_mod",
    "sdr_exists",
    "max_transversal_size",
    "max_trivial_by_euler",
]

Monomial = frozenset[int]


class MultilinearPoly:
    """Sparse integer polynomial with square-free monomials.

    Monomials are frozensets of coordinate labels; any product that would
    repeat a variable is discarded.  Coefficients are arbitrary-precision
    (transversal counts overflow 64 bits well below the size bound).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        store: dict[Monomial, int] = {}
        for mono, coeff in items:
            if coeff:
                key = frozenset(mono)
                value = store.get(key, 0) + coeff
                if value:
                    store[key] = value
                else:
                    store.pop(key, None)
        self._terms = store

    @classmethod
    def zero(cls) -> "MultilinearPoly":
        return cls()

    @classmethod
    def one(cls) -> "MultilinearPoly":
        return cls({frozenset(): 1})

    @classmethod
    def variable(cls, i: int) -> "MultilinearPoly":
        return cls({frozenset((i,)): 1})

    @classmethod
    def linear_form(cls, coords: Iterable[int]) -> "MultilinearPoly":
        """The sum of the variables indexed by ``coords``."""
        return cls({frozenset((c,)): 1 for c in canonical_coords(coords)})

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Largest monomial size; the zero polynomial has degree -1."""
        return max((len(m) for m in self._terms), default=-1)

    def coefficient(self, mono: Iterable[int]) -> int:
        return self._terms.get(frozenset(mono), 0)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._terms.items())

    def __add__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            value = out.get(mono, 0) + coeff
            if value:
                out[mono] = value
            else:
                out.pop(mono, None)
        return MultilinearPoly(out)

    def __mul__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        # Distribute over the smaller operand; drop any monomial where a
        # variable would repeat (its square vanishes).
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Monomial, int] = {}
        for mono1, coeff1 in a.items():
            for mono2, coeff2 in b.items():
                if mono1.isdisjoint(mono2):
                    key = mono1 | mono2
                    value = out.get(key, 0) + coeff1 * coeff2
                    if value:
                        out[key] = value
                    else:
                        del out[key]
        return MultilinearPoly(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if self.is_zero:
            return "MultilinearPoly(0)"
        bits = []
        for mono in sorted(self._terms, key=lambda m: (len(m), sorted(m))):
            coeff = self._terms[mono]
            name = "*".join(f"x{i}" for i in sorted(mono)) or "1"
            bits.append(f"{coeff}*{name}")
        return f"MultilinearPoly({' + '.join(bits)})"


def mul_mod(p: MultilinearPoly, q: MultilinearPoly) -> MultilinearPoly:
    """Product in the ring where every variable squares to zero."""
    return p * q


def _checked_family(family: Iterable[Iterable[int]], max_coords: int, allow_empty: bool) -> list[tuple[int, ...]]:
    sets = [canonical_coords(coords) for coords in family]
    if not allow_empty and any(not s for s in sets):
        raise InvalidFamilyError("the family contains an empty index set; it cannot have a representative")
    distinct = {c for s in sets for c in s}
    if len(distinct) > max_coords:
        raise SizeExceededError(
            f"{len(distinct)} distinct coordinates exceed the oracle bound {max_coords}"
        )
    return sets


def sdr_exists(family: Iterable[Iterable[int]], max_coords: int = 24) -> bool:
    """Whether the family of nonempty index sets admits an SDR.

    Evaluates the product of the family's linear forms and reports
    nonvanishing, with an early exit once the product dies.
    """
    sets = _checked_family(family, max_coords, allow_empty=False)
    acc = MultilinearPoly.one()
    for coords in sets:
        acc = acc * MultilinearPoly.linear_form(coords)
        if acc.is_zero:
            return False
    return True


def max_transversal_size(family: Iterable[Iterable[int]], max_coords: int = 24) -> int:
    """Largest subfamily admitting an SDR (the maximum partial transversal).

    The degree of the product of ``1 + linear form`` over the family:
    choosing the linear part of a factor marks that set as represented,
    and square-freeness forces the representatives to be distinct.
    """
    sets = _checked_family(family, max_coords, allow_empty=False)
    acc = MultilinearPoly.one()
    for coords in sets:
        acc = acc * (MultilinearPoly.one() + MultilinearPoly.linear_form(coords))
    return acc.degree


def max_trivial_by_euler(q: FormalProjection, max_coords: int = 24) -> int:
    """The comparison engine's maximum, recomputed cohomologically.

    Number of summand copies minus the maximum partial transversal of the
    nonempty index sets (empty sets never consume a representative, so
    they count fully).
    """
    nonempty = [coords for coords in q.term_instances() if coords]
    return q.rank - max_transversal_size(nonempty, max_coords=max_coords)
