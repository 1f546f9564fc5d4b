"""Points on the Riemann sphere and Moebius transformations."""

from __future__ import annotations

import math
from dataclasses import dataclass

EPS_MOBIUS = 1e-12


class ExtendedComplex:
    """A finite complex number or the point at infinity.

    Finite values must have finite real and imaginary parts; constructing one
    from NaN raises.  The point at infinity compares equal only to itself.
    """

    __slots__ = ("_value", "_infinite")

    def __init__(self, value: complex = 0j, infinite: bool = False):
        value = complex(value)
        if not infinite and not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError(f"non-finite value {value!r} for a finite sphere point")
        object.__setattr__(self, "_value", 0j if infinite else value)
        object.__setattr__(self, "_infinite", bool(infinite))

    def __setattr__(self, name, value):
        raise AttributeError("ExtendedComplex is immutable")

    @classmethod
    def finite(cls, value: complex) -> "ExtendedComplex":
        return cls(value, False)

    @classmethod
    def infinity(cls) -> "ExtendedComplex":
        return cls(0j, True)

    @property
    def is_infinite(self) -> bool:
        return self._infinite

    @property
    def z(self) -> complex:
        if self._infinite:
            raise ValueError("point at infinity has no finite value")
        return self._value

    def __eq__(self, other):
        if isinstance(other, ExtendedComplex):
            if self._infinite or other._infinite:
                return self._infinite and other._infinite
            return self._value == other._value
        if isinstance(other, (int, float, complex)):
            return (not self._infinite) and self._value == complex(other)
        return NotImplemented

    def __hash__(self):
        return hash(("inf",)) if self._infinite else hash(self._value)

    def __repr__(self):
        return "ExtendedComplex(inf)" if self._infinite else f"ExtendedComplex({self._value!r})"


INFINITY = ExtendedComplex.infinity()


def as_extended(value) -> ExtendedComplex:
    if isinstance(value, ExtendedComplex):
        return value
    return ExtendedComplex.finite(complex(value))


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d) with ad - bc bounded away from zero."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.a * self.d - self.b * self.c) <= EPS_MOBIUS:
            raise ValueError("Moebius map is (numerically) singular")

    def __call__(self, z) -> ExtendedComplex:
        return mobius_apply(self, z)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)


def mobius_apply(m: MobiusMap, z) -> ExtendedComplex:
    """Apply a Moebius map with full point-at-infinity handling."""
    zx = as_extended(z)
    if zx.is_infinite:
        if m.c == 0:
            return INFINITY
        return ExtendedComplex.finite(m.a / m.c)
    zz = zx.z
    den = m.c * zz + m.d
    if den == 0:
        return INFINITY
    w = (m.a * zz + m.b) / den
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        return INFINITY
    return ExtendedComplex.finite(w)


# The two coordinate changes used throughout: one sends the fixed points 1, -1
# to infinity and 0; the other just sends 1 to infinity and infinity to 0.
HALF_PLANE_SWAP = MobiusMap(1, 1, 1, -1)   # z -> (z+1)/(z-1), an involution
SHIFT_TO_ZERO = MobiusMap(0, 1, 1, -1)     # z -> 1/(z-1)


def rotation_map(xi: complex) -> MobiusMap:
    return MobiusMap(xi, 0, 0, 1)
