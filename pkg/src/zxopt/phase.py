"""Exact-first phase arithmetic for spider angles.

A phase is an angle alpha normalised into [0, 2*pi).  The exact variant
stores alpha/pi as a reduced :class:`fractions.Fraction`, so Clifford+T
bookkeeping (is this an odd multiple of pi/4?) never goes through floats.
The numeric variant is a float in radians and exists only for results
that have no closed rational form, such as the triple-recolouring map.

Exact + exact stays exact; anything touching a numeric phase degrades to
numeric.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Union

TWO_PI = 2.0 * math.pi

_SQRT_HALF = math.sqrt(0.5)

# e^{i*pi*k/4} for k = 0..7, kept in closed form so that Pauli/Clifford
# scalars come out exactly (1 + e^{i*pi} must be exactly 0, not 1e-16j).
_EIGHTH_TURNS = (
    complex(1.0, 0.0),
    complex(_SQRT_HALF, _SQRT_HALF),
    complex(0.0, 1.0),
    complex(-_SQRT_HALF, _SQRT_HALF),
    complex(-1.0, 0.0),
    complex(-_SQRT_HALF, -_SQRT_HALF),
    complex(0.0, -1.0),
    complex(_SQRT_HALF, -_SQRT_HALF),
)


class Phase:
    """An angle in [0, 2*pi), exact (fraction of pi) or numeric (radians)."""

    __slots__ = ("_frac", "_rad")

    def __init__(self, fraction: Union[Fraction, None] = None, radians: Union[float, None] = None):
        if (fraction is None) == (radians is None):
            raise ValueError("exactly one of fraction/radians must be given")
        if fraction is not None:
            self._frac: Union[Fraction, None] = fraction % 2
            self._rad: Union[float, None] = None
        else:
            r = math.fmod(float(radians), TWO_PI)
            if r < 0.0:
                r += TWO_PI
            if r >= TWO_PI:  # fmod rounding at the boundary
                r = 0.0
            self._frac = None
            self._rad = r

    # -- constructors ---------------------------------------------------

    @staticmethod
    def exact(num: int, den: int = 1) -> "Phase":
        """Phase of ``num/den * pi``, reduced and normalised into [0, 2pi)."""
        return Phase(fraction=Fraction(num, den))

    @staticmethod
    def numeric(radians: float) -> "Phase":
        return Phase(radians=radians)

    @staticmethod
    def zero() -> "Phase":
        return Phase.exact(0)

    @staticmethod
    def pi() -> "Phase":
        return Phase.exact(1)

    # -- views ------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._frac is not None

    @property
    def fraction(self) -> Fraction:
        """alpha/pi as a fraction; only valid for exact phases."""
        if self._frac is None:
            raise ValueError("numeric phase has no exact fraction")
        return self._frac

    @property
    def radians(self) -> float:
        if self._frac is not None:
            return float(self._frac) * math.pi
        return self._rad  # type: ignore[return-value]

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        if self._frac is not None:
            return self._frac == 0
        return self._rad == 0.0

    def is_pi(self) -> bool:
        if self._frac is not None:
            return self._frac == 1
        return self._rad == math.pi

    def is_pauli(self) -> bool:
        """Multiple of pi (0 or pi)."""
        return self._frac is not None and self._frac.denominator == 1

    def is_clifford(self) -> bool:
        """Multiple of pi/2."""
        return self._frac is not None and self._frac.denominator in (1, 2)

    def is_odd_quarter(self, tol: float = 1e-9) -> bool:
        """Odd multiple of pi/4 (the T-count criterion).

        Numeric phases are tested within ``tol`` radians of such a value.
        """
        if self._frac is not None:
            return self._frac.denominator == 4
        k = self._rad / (math.pi / 4.0)  # type: ignore[operator]
        nearest = round(k)
        return nearest % 2 == 1 and abs(k - nearest) * (math.pi / 4.0) <= tol

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Phase") -> "Phase":
        if self._frac is not None and other._frac is not None:
            return Phase(fraction=self._frac + other._frac)
        return Phase(radians=self.radians + other.radians)

    def __sub__(self, other: "Phase") -> "Phase":
        return self + (-other)

    def __neg__(self) -> "Phase":
        if self._frac is not None:
            return Phase(fraction=-self._frac)
        return Phase(radians=-self._rad)  # type: ignore[operator]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        # exact and numeric never compare equal, even at the same angle
        if (self._frac is None) != (other._frac is None):
            return False
        if self._frac is not None:
            return self._frac == other._frac
        return self._rad == other._rad

    def __hash__(self) -> int:
        if self._frac is not None:
            return hash(("e", self._frac))
        return hash(("n", self._rad))

    def exp(self) -> complex:
        """e^{i*alpha}, in closed form for multiples of pi/4."""
        if self._frac is not None:
            f = self._frac
            if f.denominator in (1, 2, 4):
                k = int(f * 4) % 8
                return _EIGHTH_TURNS[k]
            return cmath.exp(1j * math.pi * f.numerator / f.denominator)
        return cmath.exp(1j * self._rad)  # type: ignore[operator]

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> Union[str, float]:
        """Exact phases as ``"num/den"`` in pi-units, numeric ones as radians."""
        if self._frac is not None:
            return f"{self._frac.numerator}/{self._frac.denominator}"
        return self._rad  # type: ignore[return-value]

    @staticmethod
    def from_json(value: Union[str, float, int]) -> "Phase":
        if isinstance(value, str):
            num, _, den = value.partition("/")
            return Phase.exact(int(num), int(den) if den else 1)
        return Phase.numeric(float(value))

    def __repr__(self) -> str:
        if self._frac is not None:
            f = self._frac
            if f == 0:
                return "Phase(0)"
            if f.denominator == 1:
                return f"Phase({f.numerator}pi)" if f.numerator != 1 else "Phase(pi)"
            if f.numerator == 1:
                return f"Phase(pi/{f.denominator})"
            return f"Phase({f.numerator}pi/{f.denominator})"
        return f"Phase({self._rad!r} rad)"
