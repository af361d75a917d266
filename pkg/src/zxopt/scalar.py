"""Global scalar attached to a diagram.

Every rewrite multiplies the scalar by its declared factor; nothing ever
drops it silently.  The ``exact`` flag records provenance: it stays true
while the value is a product of closed-form rule factors and turns false
once a numerically-derived factor (e.g. from triple recolouring) enters.
"""

from __future__ import annotations


class Scalar:
    __slots__ = ("value", "exact")

    def __init__(self, value: complex = 1.0 + 0.0j, exact: bool = True):
        self.value = complex(value)
        self.exact = exact

    @staticmethod
    def one() -> "Scalar":
        return Scalar(1.0)

    @staticmethod
    def zero() -> "Scalar":
        return Scalar(0.0)

    def is_zero(self) -> bool:
        return self.value == 0.0

    def times(self, factor: complex, exact: bool = True) -> "Scalar":
        return Scalar(self.value * factor, self.exact and exact)

    def mul(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value * other.value, self.exact and other.exact)

    def conjugate(self) -> "Scalar":
        return Scalar(self.value.conjugate(), self.exact)

    def copy(self) -> "Scalar":
        return Scalar(self.value, self.exact)

    def to_json(self) -> dict:
        return {"re": self.value.real, "im": self.value.imag, "exact": self.exact}

    @staticmethod
    def from_json(obj: dict) -> "Scalar":
        return Scalar(complex(obj["re"], obj["im"]), bool(obj.get("exact", True)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.value == other.value and self.exact == other.exact

    def __repr__(self) -> str:
        tag = "" if self.exact else ", inexact"
        return f"Scalar({self.value!r}{tag})"
