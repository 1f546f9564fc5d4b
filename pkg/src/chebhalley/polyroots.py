"""Global polynomial root finding (Aberth-Ehrlich) and preimage computation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .poly import Polynomial
from .sphere import as_extended

if TYPE_CHECKING:  # pragma: no cover
    from .maps import MapSpec

TOL_ROOT = 1e-10
MAX_SWEEPS = 500
_EPS = 2.0 ** -52


class NonConvergenceError(RuntimeError):
    """Aberth sweeps exhausted; .rootset carries the partial results."""

    def __init__(self, message: str, rootset: "RootSet"):
        super().__init__(message)
        self.rootset = rootset


class RootNotPresentError(ValueError):
    """Deflation residual check failed: the claimed root is not a root."""


@dataclass(frozen=True)
class RootSet:
    """All roots of a polynomial, sorted by (re, im), with residuals."""

    roots: list[complex]
    residuals: list[float]
    converged: list[bool]

    def __len__(self):
        return len(self.roots)

    def all_converged(self) -> bool:
        return all(self.converged)


def _eval_with_scale(coeffs: Sequence[complex], z: complex) -> tuple[complex, float]:
    """Horner value plus sum(|c_k| |z|^k), the evaluation-noise scale."""
    acc = coeffs[-1]
    s = abs(coeffs[-1])
    az = abs(z)
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * z + coeffs[k]
        s = s * az + abs(coeffs[k])
    return acc, s


def find_roots(p: Polynomial, max_sweeps: int = MAX_SWEEPS) -> RootSet:
    """Simultaneous (Aberth-Ehrlich) iteration for all roots of p.

    Deterministic: initial guesses sit on the Cauchy-bound circle rotated by a
    fixed offset, and sweeps update all roots simultaneously.  Roots are
    frozen either when the correction falls below 1e-13 (1 + |z|) or when the
    residual is at the evaluation-noise floor, which is the right stopping
    rule for clustered/multiple roots.
    """
    d = p.degree
    if d < 1:
        raise ValueError("find_roots needs degree >= 1")
    monic = p.monic().coeffs
    deriv = [k * monic[k] for k in range(1, d + 1)]
    cauchy = 1.0 + max(abs(c) for c in monic[:-1])
    tau = 2.0 * math.pi
    zs = [cauchy * complex(math.cos(tau * k / d + 0.4), math.sin(tau * k / d + 0.4))
          for k in range(d)]
    frozen = [False] * d

    for _ in range(max_sweeps):
        if all(frozen):
            break
        new_zs = list(zs)
        for i in range(d):
            if frozen[i]:
                continue
            zi = zs[i]
            pv, scale = _eval_with_scale(monic, zi)
            if abs(pv) <= 8.0 * _EPS * scale:
                frozen[i] = True
                continue
            dv = deriv[-1]
            for k in range(len(deriv) - 2, -1, -1):
                dv = dv * zi + deriv[k]
            if dv == 0:
                new_zs[i] = zi + (1e-3 + 5e-4j) * (1.0 + abs(zi))
                continue
            newton = pv / dv
            rep = 0j
            for j in range(d):
                if j != i:
                    dz = zi - zs[j]
                    if dz != 0:
                        rep += 1.0 / dz
            denom = 1.0 - newton * rep
            if denom == 0:
                new_zs[i] = zi + (1e-3 + 5e-4j) * (1.0 + abs(zi))
                continue
            corr = newton / denom
            new_zs[i] = zi - corr
            if abs(corr) <= 1e-13 * (1.0 + abs(zi)):
                frozen[i] = True
        zs = new_zs

    scale_in = 1.0 + p.max_coeff_magnitude()
    order = sorted(range(d), key=lambda i: (zs[i].real, zs[i].imag))
    roots = [zs[i] for i in order]
    residuals = []
    converged = []
    for i, r in enumerate(roots):
        pv, hscale = _eval_with_scale(p.coeffs, r)
        residuals.append(abs(pv))
        # the flat bound TOL_ROOT * scale_in is not achievable once the
        # evaluation-noise floor eps * sum |c_k| |r|^k exceeds it
        bound = max(TOL_ROOT * scale_in, 64.0 * _EPS * hscale)
        converged.append(frozen[order[i]] and residuals[-1] <= bound)
    rs = RootSet(roots, residuals, converged)
    if not rs.all_converged():
        raise NonConvergenceError(
            f"{converged.count(False)} of {d} roots unconverged after {max_sweeps} sweeps", rs)
    return rs


def preimage_polynomial(spec: "MapSpec", w) -> Polynomial:
    """P - w Q for finite w; Q itself for w at infinity."""
    wx = as_extended(w)
    if wx.is_infinite:
        return spec.den
    if wx.z == 0:
        return spec.num
    return spec.num - wx.z * spec.den


def preimages(spec: "MapSpec", w) -> RootSet:
    """All solutions of spec(z) = w, counted with multiplicity."""
    return find_roots(preimage_polynomial(spec, w))


def deflate(p: Polynomial, root: complex, multiplicity: int = 1) -> Polynomial:
    """Divide (z - root) out of p `multiplicity` times by synthetic division.

    Each stage checks that the remainder is at the residual tolerance; a
    failing stage raises RootNotPresentError, so a successful call certifies
    the root's multiplicity is at least the requested one.
    """
    root = complex(root)
    if multiplicity < 1:
        raise ValueError("multiplicity must be >= 1")
    cur = p
    for stage in range(multiplicity):
        scale = 1.0 + cur.max_coeff_magnitude()
        grow = max(1.0, abs(root)) ** cur.degree
        if abs(cur(root)) > TOL_ROOT * scale * grow:
            raise RootNotPresentError(
                f"stage {stage}: |p(root)| = {abs(cur(root)):.3e} exceeds tolerance")
        if cur.degree == 0:
            raise RootNotPresentError("cannot deflate a constant")
        coeffs = cur.coeffs
        out = [0j] * cur.degree
        acc = coeffs[-1]
        for k in range(cur.degree - 1, 0, -1):
            out[k] = acc
            acc = coeffs[k] + root * acc
        out[0] = acc
        cur = Polynomial(out)
    return cur


def cluster_roots(roots: Sequence[complex], tol: float = 1e-6) -> list[tuple[complex, int]]:
    """Greedy clustering of near-coincident roots into (center, multiplicity)."""
    remaining = sorted((complex(r) for r in roots), key=lambda z: (z.real, z.imag))
    clusters: list[list[complex]] = []
    for r in remaining:
        for cl in clusters:
            if any(abs(r - other) <= tol for other in cl):
                cl.append(r)
                break
        else:
            clusters.append([r])
    out = []
    for cl in clusters:
        center = sum(cl) / len(cl)
        out.append((center, len(cl)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out
