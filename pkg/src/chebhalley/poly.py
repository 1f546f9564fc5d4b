"""Dense complex polynomials with ascending coefficient storage."""

from __future__ import annotations

from typing import Iterable, Sequence


class Polynomial:
    """Immutable polynomial sum(c[k] * z**k) over complex coefficients.

    Trailing zero coefficients are trimmed on construction, so the leading
    coefficient of a constructed polynomial is always nonzero.  The zero
    polynomial is not representable and raises ValueError.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex]):
        cs = [complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("zero polynomial is not representable")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1.0) -> "Polynomial":
        cs = [complex(leading)]
        for r in roots:
            r = complex(r)
            cs.append(0j)
            for k in range(len(cs) - 1, 0, -1):
                cs[k] = cs[k - 1] - r * cs[k]
            cs[0] = -r * cs[0]
        # cs currently holds ascending coefficients times nothing extra
        return cls(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def __call__(self, z: complex) -> complex:
        acc = self.coeffs[-1]
        for k in range(len(self.coeffs) - 2, -1, -1):
            acc = acc * z + self.coeffs[k]
        return acc

    def eval_reversed(self, w: complex) -> complex:
        """Evaluate w**degree * p(1/w), i.e. the reversed-coefficient polynomial."""
        acc = self.coeffs[0]
        for k in range(1, len(self.coeffs)):
            acc = acc * w + self.coeffs[k]
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant is the zero polynomial")
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def scale_argument(self, s: complex) -> "Polynomial":
        """Return p(s*z) as a polynomial in z."""
        out = []
        power = 1.0 + 0j
        for c in self.coeffs:
            out.append(c * power)
            power = power * s
        return Polynomial(out)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial([(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial([(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            a, b = self.coeffs, other.coeffs
            out = [0j] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
            return Polynomial(out)
        return Polynomial([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def monic(self) -> "Polynomial":
        lead = self.coeffs[-1]
        return Polynomial([c / lead for c in self.coeffs])

    def strip_low_zeros(self) -> tuple["Polynomial", int]:
        """Divide out the largest power of z with exactly-zero low coefficients."""
        k = 0
        while k < self.degree and self.coeffs[k] == 0:
            k += 1
        if k == 0:
            return self, 0
        return Polynomial(self.coeffs[k:]), k

    def max_coeff_magnitude(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


def derivative_values(p: Polynomial, z: complex) -> tuple[complex, complex, complex]:
    """Return (p(z), p'(z), p''(z)) from one pass of coefficient recurrences."""
    d = p.degree
    f = p.coeffs[d]
    f1 = 0j
    f2 = 0j
    for k in range(d - 1, -1, -1):
        f2 = f2 * z + f1
        f1 = f1 * z + f
        f = f * z + p.coeffs[k]
    return f, f1, 2 * f2
