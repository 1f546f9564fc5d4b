"""Executable numerical checks of the escape/zero-location results.

Every check returns a LemmaReport: reproducible (fixed PRNG seed recorded in
the report), line-serializable, and passing exactly when its worst margin is
positive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

import numpy as np

from . import backend
from .dynamics import ClassificationGrid, classify_orbit
from .maps import (
    ch_step,
    circle_map,
    degenerate_check,
    evaluate,
    family_map,
    conjugate_family_map,
    principal_nth_root,
    roots_of_unity,
    shifted_denominator_split,
    shifted_map,
)
from .poly import Polynomial
from .rng import DEFAULT_SEED, SplitMix64
from .sphere import INFINITY, ExtendedComplex

ALPHA_LADDER = (10.0, 50.0, 100.0, 500.0, 1000.0, 5000.0)
KAPPA_SAMPLES = 10001


class SignCheckFailedError(ArithmeticError):
    """Endpoint sign pattern of the bracketing interval failed."""


class WindowNotSymmetricError(ValueError):
    """Grid window is not rotation-symmetric about the origin."""


@dataclass
class LemmaReport:
    lemma: str
    parameters: dict
    samples: int
    worst_margin: float
    passed: bool
    witnesses: list[complex] = field(default_factory=list)
    seed: Optional[int] = None

    def to_json_line(self) -> str:
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            return v

        record = {
            "lemma": self.lemma,
            "pass": self.passed,
            "worst_margin": enc(self.worst_margin),
            "samples": self.samples,
            "seed": self.seed,
            "parameters": enc(self.parameters),
            "witnesses": enc(self.witnesses),
        }
        return json.dumps(record)


def _finish(lemma, parameters, samples, margins, witnesses, seed) -> LemmaReport:
    worst = min(margins) if margins else math.inf
    return LemmaReport(lemma, parameters, samples, worst, worst > 0.0,
                       witnesses, seed)


def _abs_or_inf(value: ExtendedComplex) -> float:
    return math.inf if value.is_infinite else abs(value.z)


def verify_escape_bound_b(a: float, n_samples: int = 1000,
                          seed: int = DEFAULT_SEED) -> LemmaReport:
    """|B_a(z)| > |z| on random samples with |z| in (2a, 4a] (needs a > 1)."""
    if not a > 1:
        raise ValueError("escape bound needs a > 1")
    spec = circle_map(a)
    rng = SplitMix64(seed)
    margins = []
    witnesses = []
    min_ratio = math.inf
    for _ in range(n_samples):
        z = rng.in_annulus_open_closed(2.0 * a, 4.0 * a)
        bz = _abs_or_inf(evaluate(spec, z))
        margins.append(bz - abs(z))
        if bz / abs(z) < min_ratio:
            min_ratio = bz / abs(z)
        if margins[-1] <= 0:
            witnesses.append(z)
    params = {"a": a, "min_growth_ratio": min_ratio}
    return _finish("escape-b", params, n_samples, margins, witnesses[:8], seed)


def verify_critical_value_escape(a: float) -> LemmaReport:
    """c_+ in (a/2, a), |B_a(c_+)| > a^2/162, and orbit escape when that
    bound clears the rigorous escape radius 2a."""
    if not a > 2:
        raise ValueError("needs a > 2")
    s = math.sqrt((a * a - 4.0) * (a * a - 1.0))
    c_plus = (2.0 + a * a + s) / (3.0 * a)
    spec = circle_map(a)
    b_val = _abs_or_inf(evaluate(spec, c_plus))
    gap = a * a / 162.0 - 2.0 * a
    margins = [c_plus - a / 2.0, a - c_plus, b_val - a * a / 162.0]
    orbit_checked = gap > 0.0
    escaped = None
    if orbit_checked:
        out = classify_orbit(spec, c_plus, [0j], max_iter=2000, conv_tol=1e-9,
                             escape_radius=2.0 * a)
        escaped = out.is_escaped
        margins.append(1.0 if escaped else -1.0)
        margins.append(b_val - 2.0 * a)
    params = {
        "a": a,
        "c_plus": c_plus,
        "b_at_c_plus": b_val,
        "bound_a2_over_162": a * a / 162.0,
        "gap_over_2a": gap,
        "gap_applies_above_400": a > 400.0,
        "gap_applies_above_324": a > 324.0,
        "orbit_checked": orbit_checked,
        "orbit_escaped": escaped,
    }
    witnesses = [] if min(margins) > 0 else [complex(c_plus)]
    return _finish("crit-escape", params, 1, margins, witnesses, None)


def _s_coefficients(n: int, alpha: float) -> list[float]:
    """S(x) = -n x^n + (alpha (n-1) - n) sum_{k<n} C(n,k) x^k, real coeffs."""
    e2 = alpha * (n - 1) - n
    coeffs = [e2 * comb(n, k) for k in range(n)]
    coeffs.append(float(-n))
    return coeffs


def _eval_real(coeffs: Sequence[float], x: float) -> float:
    acc = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * x + coeffs[k]
    return acc


def _bisect_root(coeffs: Sequence[float], lo: float, hi: float) -> float:
    """Bisection to floating-point convergence; f(lo) > 0 > f(hi)."""
    flo = _eval_real(coeffs, lo)
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            return mid
        fm = _eval_real(coeffs, mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid


def zero_location(n: int, alpha: float) -> float:
    """The real zero of the shifted family bracketed by the sign check."""
    coeffs = _s_coefficients(n, alpha)
    left = alpha * (n - 1) - n
    right = alpha * (n - 1)
    s_left = _eval_real(coeffs, left)
    s_right = _eval_real(coeffs, right)
    if not (s_left > 0.0 > s_right):
        raise SignCheckFailedError(
            f"S({left}) = {s_left}, S({right}) = {s_right}: expected + then -")
    return _bisect_root(coeffs, left, right)


def verify_zero_interval(n: int, alpha: float) -> LemmaReport:
    """Sign check and bisection of the zero in (alpha(n-1) - n, alpha(n-1));
    cross-checks that the shifted map vanishes there."""
    if n < 3 or not alpha > 2:
        raise ValueError("needs n >= 3 and alpha > 2")
    coeffs = _s_coefficients(n, alpha)
    left = alpha * (n - 1) - n
    right = alpha * (n - 1)
    s_left = _eval_real(coeffs, left)
    s_right = _eval_real(coeffs, right)
    if not (s_left > 0.0 > s_right):
        raise SignCheckFailedError(
            f"S({left}) = {s_left}, S({right}) = {s_right}: expected + then -")
    z0 = _bisect_root(coeffs, left, right)
    spec = shifted_map(n, alpha)
    r_resid = _abs_or_inf(evaluate(spec, z0))
    scale = 1.0 + abs(z0)
    margins = [s_left, -s_right, 1e-6 * scale - r_resid, z0 - left, right - z0]
    params = {
        "n": n, "alpha": alpha, "interval": [left, right], "root": z0,
        "s_at_root": _eval_real(coeffs, z0), "map_residual_at_root": r_resid,
    }
    witnesses = [] if min(margins) > 0 else [complex(z0)]
    return _finish("zero-interval", params, 1, margins, witnesses, None)


def _escape_margins_r(n: int, alpha: float, n_samples: int, seed: int):
    spec = shifted_map(n, alpha)
    rng = SplitMix64(seed)
    margins = []
    witnesses = []
    for _ in range(n_samples):
        z = rng.in_annulus_open_closed(n * alpha, 2.0 * n * alpha)
        rz = _abs_or_inf(evaluate(spec, z))
        margins.append(rz - abs(z))
        if margins[-1] <= 0:
            witnesses.append(z)
    return margins, witnesses


def verify_escape_bound_r(n: int, alpha: float, n_samples: int = 1000,
                          seed: int = DEFAULT_SEED,
                          ladder: Sequence[float] = ALPHA_LADDER) -> LemmaReport:
    """|R(z)| > |z| for |z| in (n alpha, 2 n alpha]; holds for alpha large.

    Also scans an alpha ladder and records the smallest ladder value at which
    every sample passes (small alpha may legitimately fail: recorded, not an
    error).
    """
    if n < 3:
        raise ValueError("needs n >= 3")
    margins, witnesses = _escape_margins_r(n, alpha, n_samples, seed)
    ladder_pass = {}
    smallest = None
    for la in ladder:
        if degenerate_check(n, la):
            continue
        lm, _ = _escape_margins_r(n, la, n_samples, seed)
        ok = min(lm) > 0
        ladder_pass[str(la)] = ok
        if ok and smallest is None:
            smallest = la
    params = {"n": n, "alpha": alpha, "ladder": ladder_pass,
              "smallest_passing_alpha": smallest}
    return _finish("escape-r", params, n_samples, margins, witnesses[:8], seed)


def segment_kappa(n: int) -> tuple[float, float, float]:
    """kappa = C / (2 D) from dense sampling of the leading coefficients.

    With w = n (1/2 + i t), the top (alpha-degree 2n-2) coefficient of the
    numerator of T = R / (1+z)^2 along z = alpha w is
    c(t) = 2 n^2 w^(2n-3) (n - 1 - w), and of the denominator is
    d(t) = q2 w^(2n-3) with q2 the leading coefficient of the alpha-slope
    part of the denominator.  C = min |c|, D = max |d| over t in [-1, 1].
    """
    _, q2 = shifted_denominator_split(n)
    q2_lead = q2[-1]
    c_min = math.inf
    d_max = 0.0
    for j in range(KAPPA_SAMPLES):
        t = -1.0 + 2.0 * j / (KAPPA_SAMPLES - 1)
        w = n * complex(0.5, t)
        wpow = w ** (2 * n - 3)
        c_val = abs(2.0 * n * n * wpow * ((n - 1) - w))
        d_val = abs(q2_lead * wpow)
        c_min = min(c_min, c_val)
        d_max = max(d_max, d_val)
    return c_min / (2.0 * d_max), c_min, d_max


def verify_segment(n: int, alpha: float, n_samples: int = 201) -> LemmaReport:
    """The vertical segment Re z = n alpha / 2, |Im z| <= n alpha maps beyond
    the escape radius: |T| > kappa and |R| > n alpha along it, the endpoints
    already lie beyond the radius, and the real zero sits inside (n alpha/2,
    n alpha)."""
    if n < 3:
        raise ValueError("needs n >= 3")
    spec = shifted_map(n, alpha)
    kappa, c_min, d_max = segment_kappa(n)
    margins = [kappa]
    witnesses = []
    radius = n * alpha
    for j in range(n_samples):
        t = -1.0 + 2.0 * j / (n_samples - 1)
        z = radius * complex(0.5, t)
        rz = evaluate(spec, z)
        r_abs = _abs_or_inf(rz)
        t_abs = math.inf if rz.is_infinite else abs(rz.z / ((1.0 + z) * (1.0 + z)))
        margins.append(t_abs - kappa)
        margins.append(r_abs - radius)
        if t_abs <= kappa or r_abs <= radius:
            witnesses.append(z)
    for sgn in (1.0, -1.0):
        z_end = radius * complex(0.5, sgn)
        margins.append(abs(z_end) - radius)
    z0 = zero_location(n, alpha)
    margins.append(z0 - radius / 2.0)
    margins.append(radius - z0)
    params = {"n": n, "alpha": alpha, "kappa": kappa, "coeff_min": c_min,
              "coeff_max": d_max, "zero": z0}
    return _finish("segment", params, n_samples, margins, witnesses[:8], None)


def _rel_residual(a: ExtendedComplex, b: ExtendedComplex) -> float:
    if a.is_infinite or b.is_infinite:
        return 0.0 if (a.is_infinite and b.is_infinite) else math.inf
    return abs(a.z - b.z) / (1.0 + abs(a.z) + abs(b.z))


def verify_conjugacies(n: int, alpha: complex, c: complex,
                       n_samples: int = 500,
                       seed: int = DEFAULT_SEED) -> LemmaReport:
    """Residuals of the conjugacy identities plus step-formula agreement.

    Checks, per random sample z: the root-scaling conjugacy (eta_c), rotation
    equivariance, the half-plane-swap identity with the degree-4 circle model
    (n = 2, a = 2 (alpha - 1)), the shift conjugacy with the shifted family,
    and agreement of the expanded family with the raw iteration step on
    z**n - 1.  Passes when the worst relative residual is at most 1e-9.
    """
    alpha = complex(alpha)
    c = complex(c)
    spec_o = family_map(n, alpha)
    spec_oc = conjugate_family_map(n, alpha, c)
    spec_r = shifted_map(n, alpha)
    lam = principal_nth_root(-c, n)
    xis = roots_of_unity(n)
    fn_coeffs = [0j] * (n + 1)
    fn_coeffs[0] = -1.0 + 0j
    fn_coeffs[n] = 1.0 + 0j
    fn = Polynomial(fn_coeffs)

    two_ok = not degenerate_check(2, alpha)
    if two_ok:
        spec_o2 = family_map(2, alpha)
        spec_b = circle_map(2.0 * (alpha - 1.0))

    def m2(v: ExtendedComplex) -> ExtendedComplex:
        if v.is_infinite:
            return ExtendedComplex.finite(1.0 + 0j)
        if v.z == 1.0:
            return INFINITY
        return ExtendedComplex.finite((v.z + 1.0) / (v.z - 1.0))

    def mshift(v: ExtendedComplex) -> ExtendedComplex:
        if v.is_infinite:
            return ExtendedComplex.finite(0j)
        if v.z == 1.0:
            return INFINITY
        return ExtendedComplex.finite(1.0 / (v.z - 1.0))

    rng = SplitMix64(seed)
    worst = 0.0
    worst_witness = None
    rejected = 0
    accepted = 0
    attempts = 0
    max_attempts = 40 * n_samples
    while accepted < n_samples and attempts < max_attempts:
        attempts += 1
        z = rng.in_annulus_open_closed(0.2, 2.5)
        if abs(z - 1.0) < 0.05:
            rejected += 1
            continue
        oz = evaluate(spec_o, z)
        if oz.is_infinite or abs(oz.z - 1.0) < 0.05 or abs(oz.z) > 1e6:
            rejected += 1
            continue
        residuals = []
        # eta_c conjugacy: Oc(eta_c(z)) = eta_c(O(z))
        residuals.append(_rel_residual(
            evaluate(spec_oc, z / lam), ExtendedComplex.finite(oz.z / lam)))
        # rotation equivariance, cycling through the nontrivial rotations
        xi = xis[1 + accepted % (n - 1)] if n > 1 else xis[0]
        residuals.append(_rel_residual(
            evaluate(spec_o, xi * z),
            ExtendedComplex.finite(xi * oz.z)))
        # half-plane-swap conjugacy with the circle model (n = 2 dynamics)
        if two_ok:
            o2z = evaluate(spec_o2, z)
            if not o2z.is_infinite and abs(o2z.z - 1.0) >= 0.05:
                residuals.append(_rel_residual(m2(o2z), evaluate(spec_b, m2(ExtendedComplex.finite(z)).z)))
        # shift conjugacy with the shifted family
        residuals.append(_rel_residual(mshift(oz), evaluate(spec_r, mshift(ExtendedComplex.finite(z)).z)))
        # expanded family vs raw step formula on z**n - 1
        residuals.append(_rel_residual(ch_step(fn, alpha, z), oz))
        accepted += 1
        local = max(residuals)
        if local > worst:
            worst = local
            worst_witness = z
    params = {"n": n, "alpha": alpha, "c": c, "rejected": rejected,
              "includes_circle_model": two_ok, "worst_residual": worst}
    margins = [1e-9 - worst, float(accepted - n_samples + 0.5)]
    witnesses = [worst_witness] if (worst > 1e-9 and worst_witness is not None) else []
    return _finish("conjugacies", params, accepted, margins, witnesses, seed)


def symmetry_report(grid: ClassificationGrid, n: int) -> LemmaReport:
    """Fraction of pixels whose outcome matches the rotation by e^(2 pi i/n).

    Root outcomes must match under the induced permutation of the target
    roots; other outcomes must match in kind (cycles also in period).
    Boundary-adjacent pixels and pixels whose rotation leaves the window are
    excluded.  Passes at fraction >= 0.99.
    """
    w = grid.window
    pix = w.re_step
    if abs(w.re_min + w.re_max) > 0.5 * pix or abs(w.im_min + w.im_max) > 0.5 * pix:
        raise WindowNotSymmetricError("window must be centered at the origin")
    if abs((w.re_max - w.re_min) - (w.im_max - w.im_min)) > 0.5 * pix:
        raise WindowNotSymmetricError("window must be square")
    xi = complex(math.cos(2.0 * math.pi / n), math.sin(2.0 * math.pi / n))
    targets = grid.targets
    perm = np.full(len(targets), -1, dtype=np.int64)
    for j, t in enumerate(targets):
        rotated = xi * t
        dists = [abs(rotated - s) for s in targets]
        k = int(np.argmin(dists))
        if dists[k] > 1e-6 * (1.0 + abs(t)):
            raise WindowNotSymmetricError("targets are not closed under the rotation")
        perm[j] = k

    h, width = grid.kind.shape
    xs = np.arange(width, dtype=np.float64)
    ys = np.arange(h, dtype=np.float64)
    re = w.re0 + xs[None, :] * w.re_step
    im = w.im0 + ys[:, None] * w.im_step
    rot_re = xi.real * re - xi.imag * im
    rot_im = xi.real * im + xi.imag * re
    px = np.floor((rot_re - w.re_min) / w.re_step).astype(np.int64)
    py = np.floor((rot_im - w.im_max) / w.im_step).astype(np.int64)
    inside = (px >= 0) & (px < width) & (py >= 0) & (py < h)

    from .dynamics import _boundary_adjacent_mask

    excluded = _boundary_adjacent_mask(grid) | ~inside
    px_c = np.clip(px, 0, width - 1)
    py_c = np.clip(py, 0, h - 1)
    kind_rot = grid.kind[py_c, px_c]
    index_rot = grid.index[py_c, px_c]

    match = np.zeros((h, width), dtype=bool)
    same_kind = grid.kind == kind_rot
    is_root = grid.kind == backend.KIND_ROOT
    idx_safe = np.clip(grid.index, 0, len(targets) - 1)
    expected = perm[idx_safe]
    match |= same_kind & is_root & (index_rot == expected)
    is_cycle = grid.kind == backend.KIND_CYCLE
    match |= same_kind & is_cycle & (index_rot == grid.index)
    other = ~is_root & ~is_cycle
    match |= same_kind & other

    counted = ~excluded
    total = int(np.count_nonzero(counted))
    if total == 0:
        raise WindowNotSymmetricError("no comparable pixels")
    good = int(np.count_nonzero(match & counted))
    fraction = good / total
    mism = np.argwhere(counted & ~match)
    witnesses = [w.pixel_center(int(x), int(y)) for y, x in mism[:8]]
    params = {"n": n, "fraction": fraction, "compared": total,
              "label": grid.label}
    return _finish("rotation-symmetry", params, total, [fraction - 0.99],
                   witnesses if fraction < 0.99 else [], None)


def run_standard_suite(n: int, alpha: float, a: Optional[float] = None,
                       c: complex = complex(-1.0, 2.0),
                       n_samples: int = 1000,
                       seed: int = DEFAULT_SEED) -> list[LemmaReport]:
    """The full quantitative-check suite at one (n, alpha); drives `verify --all`."""
    if a is None:
        a = 2.0 * (alpha - 1.0)
    reports = [
        verify_escape_bound_b(a, n_samples, seed),
        verify_critical_value_escape(a),
        verify_conjugacies(n, complex(alpha), c, min(n_samples, 500), seed),
    ]
    if n >= 3 and alpha > 2:
        reports.append(verify_zero_interval(n, alpha))
        reports.append(verify_escape_bound_r(n, alpha, n_samples, seed))
        reports.append(verify_segment(n, alpha))
    return reports
