"""The Chebyshev-Halley iteration families as explicit rational maps.

Every family is expanded once, at construction time, into numerator and
denominator polynomials; evaluation is then plain Horner with pole and
point-at-infinity handling on the Riemann sphere.

Families
--------
O(n, alpha)    the iteration applied to z**n - 1: a degree-2n map whose
               superattracting fixed points are the n-th roots of unity
Oc(n, alpha, c) the same dynamics moved to the roots of z**n + c, defined
               as the conjugate of O by the scaling eta_c(z) = z / (-c)**(1/n)
B(a)           degree-4 model of the n = 2 family in coordinates where the
               superattracting fixed points sit at 0 and infinity:
               z**3 (z - a) / (1 - a z), with a = 2 (alpha - 1)
R(n, alpha)    the family in coordinates where z = 1 is moved to infinity
               (and infinity to 0); numerator degree 2n, denominator 2n - 3
newton(n)      Newton's method on z**n - 1
generic        the iteration applied to an arbitrary polynomial
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Optional

from .poly import Polynomial, derivative_values
from .sphere import INFINITY, ExtendedComplex, as_extended

EPS_DEGENERATE = 1e-8
# Above this modulus, rational maps are evaluated through the reciprocal
# coordinate w = 1/z so Horner never overflows (z**deg blows past 1e308 long
# before |z| does for degrees >= 3).
RECIPROCAL_THRESHOLD = 1e10
_POLE_RATIO = 1e-300


class DegenerateParameterError(ValueError):
    """alpha sits at a value where the family drops degree."""


class DegenerateCriticalPointsError(ValueError):
    """The free-critical-point formula has a vanishing denominator."""


class PoleAtPointError(ValueError):
    """Derivative requested at a pole of the map."""


class IndeterminateError(ArithmeticError):
    """0/0 combination in the iteration formula (multiple root of g)."""


def degenerate_alpha_upper(n: int) -> float:
    """The larger of the two degenerate parameter values, (2n-1)/(2n-2)."""
    return (2.0 * n - 1.0) / (2.0 * n - 2.0)


def degenerate_check(n: int, alpha: complex) -> bool:
    """True iff alpha is within EPS_DEGENERATE of 1/2 or (2n-1)/(2n-2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    alpha = complex(alpha)
    return (
        abs(alpha - 0.5) < EPS_DEGENERATE
        or abs(alpha - degenerate_alpha_upper(n)) < EPS_DEGENERATE
    )


def roots_of_unity(n: int) -> list[complex]:
    tau = 2.0 * math.pi
    return [complex(math.cos(tau * j / n), math.sin(tau * j / n)) for j in range(n)]


def principal_nth_root(w: complex, n: int) -> complex:
    """The n-th root with argument in (-pi/n, pi/n]."""
    w = complex(w)
    r = math.sqrt(w.real * w.real + w.imag * w.imag)
    if r == 0.0:
        return 0j
    theta = math.atan2(w.imag, w.real)
    mag = math.exp(math.log(r) / n)
    return complex(mag * math.cos(theta / n), mag * math.sin(theta / n))


@dataclass(frozen=True)
class MapSpec:
    """A rational map stored as expanded numerator/denominator polynomials."""

    kind: str
    num: Polynomial
    den: Polynomial
    n: Optional[int] = None
    alpha: Optional[complex] = None
    a: Optional[complex] = None
    c: Optional[complex] = None
    poly: Optional[Polynomial] = None

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def label(self) -> str:
        bits = [self.kind]
        if self.n is not None:
            bits.append(f"n={self.n}")
        if self.alpha is not None:
            bits.append(f"alpha={self.alpha!r}")
        if self.a is not None:
            bits.append(f"a={self.a!r}")
        if self.c is not None:
            bits.append(f"c={self.c!r}")
        return " ".join(bits)


# --- family coefficient recipes -------------------------------------------
#
# All closed-form coefficients below are linear in alpha; they are assembled
# as (integer constant) + (integer slope) * alpha so construction is exact.


def _o_coefficient_pairs(n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    a0 = (n - 1, -2 * (n - 1))
    a1 = (2 - 4 * n, -2 * (n - 1) * (n - 2))
    a2 = ((n - 1) * (1 - 2 * n), 2 * (n - 1) * (n - 1))
    num = [(0, 0)] * (2 * n + 1)
    num[0] = a0
    num[n] = a1
    num[2 * n] = a2
    # denominator 2n z^(n-1) (E1 + E2 z^n), E1 = -alpha (n-1), E2 = alpha (n-1) - n
    den = [(0, 0)] * (2 * n)
    den[n - 1] = (0, -2 * n * (n - 1))
    den[2 * n - 1] = (-2 * n * n, 2 * n * (n - 1))
    return num, den


def _pairs_to_poly(pairs: list[tuple[int, int]], alpha: complex) -> Polynomial:
    return Polynomial([p + q * alpha for p, q in pairs])


def _check_coprime(num: Polynomial, den: Polynomial, context: str) -> None:
    """Numeric common-root scan, used for the generic family only.

    The closed-form families are coprime by construction away from their
    guarded degenerate parameters, and at large alpha their zero/pole pairs
    approach each other below double resolution (the Newton limit), where any
    value-based scan would false-positive; those families rely on the exact
    parameter guards instead.
    """
    from .polyroots import find_roots

    if den.degree == 0:
        return
    for r in find_roots(den).roots:
        value = num.coeffs[-1]
        noise = abs(value)
        az = abs(r)
        for k in range(num.degree - 1, -1, -1):
            value = value * r + num.coeffs[k]
            noise = noise * az + abs(num.coeffs[k])
        if abs(value) <= 16.0 * 2.0 ** -52 * noise:
            raise ValueError(f"{context}: numerator and denominator share a root near {r!r}")


def family_map(n: int, alpha: complex, *, allow_degenerate: bool = False) -> MapSpec:
    """The main family O(n, alpha) applied to z**n - 1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    alpha = complex(alpha)
    if not allow_degenerate and degenerate_check(n, alpha):
        raise DegenerateParameterError(f"alpha={alpha!r} degenerates the n={n} family")
    num_pairs, den_pairs = _o_coefficient_pairs(n)
    num = _pairs_to_poly(num_pairs, alpha)
    den = _pairs_to_poly(den_pairs, alpha)
    if num.degree != 2 * n:
        raise DegenerateParameterError(f"numerator degree dropped at alpha={alpha!r}")
    # coprimality: den's roots are 0 (P(0) = (1-2alpha)(n-1) != 0 away from
    # alpha = 1/2) and the n-th roots of -E1/E2, where a shared root would
    # force the guarded degenerate parameters; no numeric scan needed.
    return MapSpec("O", num, den, n=n, alpha=alpha)


def conjugate_family_map(n: int, alpha: complex, c: complex, *, allow_degenerate: bool = False) -> MapSpec:
    """The family with superattracting fixed points at the n-th roots of -1/c.

    Built by conjugating O(n, alpha) with the scaling eta_c(z) = z * lam_inv,
    lam_inv = 1/(-c)**(1/n); the defining identity is
    Oc(eta_c(z)) = eta_c(O(z)).
    """
    c = complex(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    base = family_map(n, alpha, allow_degenerate=allow_degenerate)
    lam = principal_nth_root(-c, n)
    num = base.num.scale_argument(lam) * (1.0 / lam)
    den = base.den.scale_argument(lam)
    return MapSpec("Oc", num, den, n=n, alpha=complex(alpha), c=c)


def circle_map(a: complex) -> MapSpec:
    """The degree-4 map z**3 (z - a) / (1 - a z); a = 2 (alpha - 1)."""
    a = complex(a)
    if abs(a - 1.0) < EPS_DEGENERATE or abs(a + 1.0) < EPS_DEGENERATE:
        raise DegenerateParameterError(
            f"a={a!r}: numerator and denominator share a root (degenerate map)")
    num = Polynomial([0, 0, 0, -a, 1])
    den = Polynomial([1, -a])
    return MapSpec("B", num, den, a=a)


def _shifted_coefficient_pairs(n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Exact integer (constant, alpha-slope) coefficient pairs for R(n, alpha).

    Numerator: 2n z (z+1)^(n-1) [E1 z^n + E2 (z+1)^n].
    Denominator: the conjugate of the main family's fixed-point displacement,
    w^(2n) (A(u) - B(u)) with u = (w+1)/w; its top three coefficients cancel
    identically, leaving degree 2n - 3.
    """
    size = 2 * n + 1
    num = [[0, 0] for _ in range(size)]
    den = [[0, 0] for _ in range(size)]

    # numerator terms
    for k in range(n + 1, 2 * n + 1):  # E1 * 2n * w^(n+1) (w+1)^(n-1)
        num[k][1] += -2 * n * (n - 1) * comb(n - 1, k - n - 1)
    for k in range(1, 2 * n + 1):      # E2 * 2n * w (w+1)^(2n-1)
        b = comb(2 * n - 1, k - 1)
        num[k][0] += -2 * n * n * b
        num[k][1] += 2 * n * (n - 1) * b

    # denominator terms: a0 w^(2n) + a1 w^n (w+1)^n + a2 (w+1)^(2n) - numerator
    a0 = (n - 1, -2 * (n - 1))
    a1 = (2 - 4 * n, -2 * (n - 1) * (n - 2))
    a2 = ((n - 1) * (1 - 2 * n), 2 * (n - 1) * (n - 1))
    den[2 * n][0] += a0[0]
    den[2 * n][1] += a0[1]
    for k in range(n, 2 * n + 1):
        b = comb(n, k - n)
        den[k][0] += a1[0] * b
        den[k][1] += a1[1] * b
    for k in range(0, 2 * n + 1):
        b = comb(2 * n, k)
        den[k][0] += a2[0] * b
        den[k][1] += a2[1] * b
    for k in range(size):
        den[k][0] -= num[k][0]
        den[k][1] -= num[k][1]

    for k in (2 * n, 2 * n - 1, 2 * n - 2):
        if den[k] != [0, 0]:
            raise AssertionError("shifted-family denominator failed to drop degree")
    num_pairs = [tuple(p) for p in num]
    den_pairs = [tuple(p) for p in den[: 2 * n - 2]]
    return num_pairs, den_pairs


def shifted_map(n: int, alpha: complex, *, allow_degenerate: bool = False) -> MapSpec:
    """R(n, alpha): the main family conjugated so z=1 goes to infinity."""
    if n < 2:
        raise ValueError("n must be >= 2")
    alpha = complex(alpha)
    if not allow_degenerate and degenerate_check(n, alpha):
        raise DegenerateParameterError(f"alpha={alpha!r} degenerates the n={n} family")
    num_pairs, den_pairs = _shifted_coefficient_pairs(n)
    num = _pairs_to_poly(num_pairs, alpha)
    den = _pairs_to_poly(den_pairs, alpha)
    if num.degree != 2 * n or den.degree != 2 * n - 3:
        raise DegenerateParameterError(f"shifted family degree dropped at alpha={alpha!r}")
    # coprime away from the guarded degenerate parameters; at large alpha the
    # zero/pole separation falls below double resolution (the Newton limit),
    # so a numeric scan would reject legitimate maps.
    return MapSpec("R", num, den, n=n, alpha=alpha)


def shifted_denominator_split(n: int) -> tuple[list[int], list[int]]:
    """Integer coefficient vectors (Q1, Q2) with den(z) = Q1(z) + alpha Q2(z)."""
    _, den_pairs = _shifted_coefficient_pairs(n)
    return [p for p, _ in den_pairs], [q for _, q in den_pairs]


def newton_map(n: int) -> MapSpec:
    """Newton's method on z**n - 1: ((n-1) z**n + 1) / (n z**(n-1))."""
    if n < 2:
        raise ValueError("n must be >= 2")
    num = [0j] * (n + 1)
    num[0] = 1 + 0j
    num[n] = complex(n - 1)
    den = [0j] * n
    den[n - 1] = complex(n)
    return MapSpec("newton", Polynomial(num), Polynomial(den), n=n)


def generic_ch_map(g: Polynomial, alpha: complex) -> MapSpec:
    """The iteration applied to an arbitrary polynomial g (degree >= 2).

    Expanded to N/D with
        D = 2 g' (g'^2 - alpha g g''),
        N = z D - g (2 g'^2 - (2 alpha - 1) g g'').
    A common monomial factor z**k (exact zero low-order coefficients) is
    divided out; g with multiple roots is rejected by the coprimality check.
    """
    if g.degree < 2:
        raise ValueError("generic family needs degree >= 2 (use ch_step for degree 1)")
    alpha = complex(alpha)
    g1 = g.derivative()
    g2 = g1.derivative()
    gg2 = g * g2
    d_poly = 2.0 * (g1 * (g1 * g1 - alpha * gg2))
    n_poly = Polynomial([0, 1]) * d_poly - g * (2.0 * (g1 * g1) - (2.0 * alpha - 1.0) * gg2)
    n_strip, kn = n_poly.strip_low_zeros()
    d_strip, kd = d_poly.strip_low_zeros()
    k = min(kn, kd)
    if k:
        n_poly = Polynomial(n_poly.coeffs[k:])
        d_poly = Polynomial(d_poly.coeffs[k:])
    spec = MapSpec("ch", n_poly, d_poly, alpha=alpha, poly=g)
    _check_coprime(n_poly, d_poly, "generic family")
    return spec


def reciprocal_map(spec: MapSpec) -> MapSpec:
    """Conjugate by z -> 1/z: the chart in which infinity becomes the origin."""
    dp, dq = spec.num.degree, spec.den.degree
    if dp <= dq:
        raise ValueError("reciprocal chart expects deg num > deg den")
    num = [0j] * (dp - dq) + list(reversed(spec.den.coeffs))
    den = list(reversed(spec.num.coeffs))
    return MapSpec(
        f"recip-{spec.kind}", Polynomial(num), Polynomial(den),
        n=spec.n, alpha=spec.alpha, a=spec.a, c=spec.c,
    )


# --- evaluation -------------------------------------------------------------


def _finite_or_infinity(w: complex) -> ExtendedComplex:
    if math.isfinite(w.real) and math.isfinite(w.imag):
        return ExtendedComplex.finite(w)
    return INFINITY


def evaluate(spec: MapSpec, z) -> ExtendedComplex:
    """Evaluate the map on the sphere; poles map to the point at infinity."""
    zx = as_extended(z)
    dp, dq = spec.num.degree, spec.den.degree
    if zx.is_infinite:
        if dp > dq:
            return INFINITY
        if dp < dq:
            return ExtendedComplex.finite(0j)
        return _finite_or_infinity(spec.num.leading / spec.den.leading)
    zz = zx.z
    if abs(zz) > RECIPROCAL_THRESHOLD:
        w = 1.0 / zz
        pn = spec.num.eval_reversed(w)
        pd = spec.den.eval_reversed(w)
        if pd == 0:
            return INFINITY
        r = pn / pd
        if dp >= dq:
            for _ in range(dp - dq):
                r = r * zz
        else:
            for _ in range(dq - dp):
                r = r * w
        return _finite_or_infinity(r)
    p = spec.num(zz)
    q = spec.den(zz)
    if q == 0:
        return INFINITY
    if abs(q) < _POLE_RATIO * abs(p):
        return INFINITY
    return _finite_or_infinity(p / q)


def _pole_guard(spec: MapSpec, z: complex) -> complex:
    q = spec.den(z)
    qscale = sum(abs(c) * max(1.0, abs(z)) ** k for k, c in enumerate(spec.den.coeffs))
    if abs(q) <= 1e-14 * qscale:
        raise PoleAtPointError(f"z={z!r} is (numerically) a pole of {spec.label()}")
    return q


def evaluate_derivative(spec: MapSpec, z: complex) -> complex:
    """(P' Q - P Q') / Q**2 at a non-pole point."""
    z = complex(z)
    q = _pole_guard(spec, z)
    p, p1, _ = derivative_values(spec.num, z)
    _, q1, _ = derivative_values(spec.den, z)
    return (p1 * q - p * q1) / (q * q)


def evaluate_second_derivative(spec: MapSpec, z: complex) -> complex:
    z = complex(z)
    q = _pole_guard(spec, z)
    p, p1, p2 = derivative_values(spec.num, z)
    _, q1, q2 = derivative_values(spec.den, z)
    n1 = p1 * q - p * q1
    n2 = (p2 * q - p * q2) * q - 2.0 * q1 * n1
    return n2 / (q * q * q)


def ch_step(g: Polynomial, alpha: complex, z: complex) -> ExtendedComplex:
    """One iteration step on g, straight from the defining formula.

    step = z - (1 + L / (2 (1 - alpha L))) g/g' with L = g g'' / g'^2.
    Exact roots of g are fixed; g'(z) = 0 or 1 - alpha L = 0 with g(z) != 0
    sends the step to infinity; a multiple root of g (g = g' = 0) raises
    IndeterminateError.
    """
    if g.degree < 1:
        raise ValueError("g must have degree >= 1")
    alpha = complex(alpha)
    z = complex(z)
    gv, g1, g2 = derivative_values(g, z)
    if gv == 0:
        if g1 == 0:
            raise IndeterminateError(f"g and g' both vanish at z={z!r}")
        return ExtendedComplex.finite(z)
    if g1 == 0:
        return INFINITY
    big_l = gv * g2 / (g1 * g1)
    d = 1.0 - alpha * big_l
    if d == 0:
        return INFINITY
    w = z - (1.0 + 0.5 * big_l / d) * (gv / g1)
    return _finite_or_infinity(w)


def free_critical_points(spec: MapSpec) -> list[complex]:
    """Critical points other than the forced ones (superattracting roots, 0).

    For the main family these are the n rotations of the principal value of
    (alpha (n-1)^2 (2 alpha - 1) / (n(2n-1) - alpha(4n-1)(n-1)
     + 2 alpha^2 (n-1)^2))**(1/n); for the degree-4 circle model they are
    c_-, c_+ = (2 + a^2 -+ sqrt((a^2-4)(a^2-1))) / (3a), with c_- c_+ = 1.
    """
    if spec.kind == "O" or spec.kind == "Oc":
        n = spec.n
        alpha = spec.alpha
        num = (n - 1) * (n - 1) * (alpha * (2.0 * alpha - 1.0))
        den = n * (2 * n - 1) - ((4 * n - 1) * (n - 1)) * alpha \
            + (2 * (n - 1) * (n - 1)) * (alpha * alpha)
        if abs(den) <= 1e-14 * (1.0 + abs(num)):
            raise DegenerateCriticalPointsError(
                f"critical-point denominator vanishes at alpha={alpha!r}"
            )
        base = principal_nth_root(num / den, n)
        points = [xi * base for xi in roots_of_unity(n)]
        if spec.kind == "Oc":
            lam = principal_nth_root(-spec.c, n)
            points = [p / lam for p in points]
        return points
    if spec.kind == "B":
        a = spec.a
        if a == 0:
            raise DegenerateCriticalPointsError("a = 0 has no free critical points")
        import cmath

        s = cmath.sqrt((a * a - 4.0) * (a * a - 1.0))
        return [(2.0 + a * a - s) / (3.0 * a), (2.0 + a * a + s) / (3.0 * a)]
    raise ValueError(f"free critical points only defined for O/Oc/B, not {spec.kind!r}")


def default_targets(spec: MapSpec) -> list[complex]:
    """The natural finite attractor list for orbit classification."""
    if spec.kind in ("O", "newton"):
        return roots_of_unity(spec.n)
    if spec.kind == "Oc":
        lam = principal_nth_root(-spec.c, spec.n)
        return [xi / lam for xi in roots_of_unity(spec.n)]
    if spec.kind == "B":
        return [0j]
    if spec.kind == "R":
        return [1.0 / (xi - 1.0) for xi in roots_of_unity(spec.n)[1:]]
    if spec.kind == "ch":
        from .polyroots import find_roots

        return find_roots(spec.poly).roots
    if spec.kind.startswith("recip-"):
        return [0j]
    raise ValueError(f"no default targets for {spec.kind!r}")


def default_escape_radius(spec: MapSpec) -> Optional[float]:
    """Rigorous escape radius where one exists: 2|a| for B, n|alpha| for R."""
    if spec.kind == "B":
        return 2.0 * abs(spec.a)
    if spec.kind == "R":
        return spec.n * abs(spec.alpha)
    return None
