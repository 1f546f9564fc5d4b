"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one ACCEPTANCE line.  Golden image hashes live in
tests/goldens.json; they are created on the first verified run and compared
afterwards (set CHEBHALLEY_REGEN_GOLDENS=1 to refresh).
"""

import json
import math
import os
import time
from pathlib import Path

import pytest

from chebhalley.dynamics import (
    GridWindow,
    ProbeConfig,
    classify_grid,
    classify_orbit,
    classify_parameter_grid,
    connectivity_probe,
)
from chebhalley.maps import (
    ch_step,
    circle_map,
    evaluate,
    evaluate_derivative,
    evaluate_second_derivative,
    family_map,
    free_critical_points,
    newton_map,
    roots_of_unity,
)
from chebhalley.poly import Polynomial
from chebhalley.polyroots import deflate, find_roots, preimage_polynomial
from chebhalley.render import color_grid, default_palette
from chebhalley.rng import SplitMix64
from chebhalley.verify import (
    verify_conjugacies,
    verify_escape_bound_b,
    verify_segment,
    verify_zero_interval,
    zero_location,
)

GOLDEN_PATH = Path(__file__).parent / "goldens.json"


def _criterion(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:>2} {name}: {status}  {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _unity_poly(n):
    coeffs = [0j] * (n + 1)
    coeffs[0] = -1.0
    coeffs[n] = 1.0
    return Polynomial(coeffs)


def _load_goldens():
    if GOLDEN_PATH.exists():
        return json.loads(GOLDEN_PATH.read_text())
    return {}


def _check_golden(name, value):
    """Compare against the stored golden, creating it on first verified run."""
    goldens = _load_goldens()
    if os.environ.get("CHEBHALLEY_REGEN_GOLDENS") == "1" or name not in goldens:
        goldens[name] = value
        GOLDEN_PATH.write_text(json.dumps(goldens, indent=1, sort_keys=True) + "\n")
        return True
    return goldens[name] == value


# -- shared expensive renders -------------------------------------------------

@pytest.fixture(scope="module")
def figure1_grids():
    spec = family_map(3, 10.0)
    win = GridWindow(-10, 10, -10, 10, 800, 800)
    out = {}
    for workers in (1, 2, 8):
        t0 = time.perf_counter()
        grid = classify_grid(spec, win, roots_of_unity(3), 512, 1e-9,
                             workers=workers)
        out[workers] = (grid, time.perf_counter() - t0)
    return out


@pytest.fixture(scope="module")
def figure4_grids():
    win = GridWindow(-1, 4, -2.5, 2.5, 500, 500)
    out = {}
    for n in (3, 5):
        per_workers = {}
        for workers in (1, 2, 8):
            t0 = time.perf_counter()
            grid = classify_parameter_grid(n, win, 2000, 1e-9, workers=workers)
            per_workers[workers] = (grid, time.perf_counter() - t0)
        out[n] = per_workers
    return out


def test_criterion_1_closed_form_agreement():
    rng = SplitMix64(11)
    polys = {n: _unity_poly(n) for n in range(2, 7)}
    samples = []
    while len(samples) < 10_000:
        n = 2 + rng.next_u64() % 5
        alpha = rng.complex_in_box(-3, 3, -3, 3)
        if abs(alpha - 0.5) < 1e-3 or abs(alpha - (2 * n - 1) / (2 * n - 2)) < 1e-3:
            continue
        z = rng.in_annulus_open_closed(0.2, 2.5)
        samples.append((n, alpha, z))
    specs = {}
    t0 = time.perf_counter()
    worst = 0.0
    for n, alpha, z in samples:
        key = (n, alpha)
        spec = specs.get(key)
        if spec is None:
            spec = specs[key] = family_map(n, alpha)
        a = ch_step(polys[n], alpha, z)
        b = evaluate(spec, z)
        if a.is_infinite or b.is_infinite:
            continue
        worst = max(worst, abs(a.z - b.z) / (1 + abs(b.z)))
    elapsed = time.perf_counter() - t0
    _criterion(1, "closed-form agreement", worst <= 1e-10 and elapsed < 1.0,
               f"worst rel err {worst:.3e}, {elapsed:.2f}s for 10^4 samples")


def test_criterion_2_conjugacy_suite():
    t0 = time.perf_counter()
    reports = [
        verify_conjugacies(3, 10.0 + 0j, -1.0 + 2.0j, 1000, seed=21),
        verify_conjugacies(2, 3.0 + 0j, 1.0 - 1.0j, 1000, seed=22),
    ]
    elapsed = time.perf_counter() - t0
    worst = max(r.parameters["worst_residual"] for r in reports)
    ok = all(r.passed for r in reports) and worst <= 1e-9 and elapsed < 1.0
    _criterion(2, "conjugacy suite", ok,
               f"worst residual {worst:.3e}, {elapsed:.2f}s")


def test_criterion_3_superattraction():
    rng = SplitMix64(33)
    worst_val = worst_d1 = worst_d2 = 0.0
    for n in range(2, 7):
        count = 0
        while count < 20:
            alpha = rng.complex_in_box(-4, 4, -4, 4)
            if abs(alpha - 0.5) < 1e-3 or abs(alpha - (2 * n - 1) / (2 * n - 2)) < 1e-3:
                continue
            count += 1
            spec = family_map(n, alpha)
            for xi in roots_of_unity(n):
                worst_val = max(worst_val, abs(evaluate(spec, xi).z - xi))
                worst_d1 = max(worst_d1, abs(evaluate_derivative(spec, xi)))
                worst_d2 = max(worst_d2, abs(evaluate_second_derivative(spec, xi)))
    ok = worst_val <= 1e-10 and worst_d1 <= 1e-8 and worst_d2 <= 1e-6
    _criterion(3, "superattraction", ok,
               f"|O-xi| {worst_val:.2e}, |O'| {worst_d1:.2e}, |O''| {worst_d2:.2e}")


def test_criterion_4_escape_bound_circle_model():
    worst = math.inf
    for a in (2.0, 20.0, 500.0):
        rep = verify_escape_bound_b(a, 1000, seed=44)
        worst = min(worst, rep.worst_margin)
        assert rep.passed
    _criterion(4, "escape bound |B(z)|>|z| beyond 2a", worst > 0,
               f"min margin {worst:.3e} over a in (2, 20, 500)")


def test_criterion_5_critical_value_escape_and_probe():
    a = 500.0
    b = circle_map(a)
    c_plus = free_critical_points(b)[1].real
    bound = a * a / 162.0
    b_val = abs(evaluate(b, c_plus).z)
    orbit = classify_orbit(b, c_plus, [0j], 2000, 1e-9, escape_radius=2 * a)
    t0 = time.perf_counter()
    verdict = connectivity_probe(2, a / 2 + 1, ProbeConfig(resolution=1024))
    elapsed = time.perf_counter() - t0
    ok = (a / 2 < c_plus < a and b_val > bound > 2 * a and orbit.is_escaped
          and verdict.variant == "InfinitelyConnected" and elapsed < 30.0)
    _criterion(5, "critical value escapes; probe infinitely connected", ok,
               f"c+={c_plus:.3f}, |B(c+)|={b_val:.1f} > {bound:.1f} > {2*a:.0f}, "
               f"probe {verdict.variant} in {elapsed:.1f}s at 1024^2")


def test_criterion_6_hyperbolic_component_boundary():
    verdict = connectivity_probe(2, 9.0, ProbeConfig(resolution=1024))
    _criterion(6, "a=16 (>15.133) infinitely connected",
               verdict.variant == "InfinitelyConnected",
               f"verdict {verdict.variant}")


def test_criterion_7_zero_interval():
    ok = True
    details = []
    for n, alpha in ((3, 10.0), (4, 50.0), (5, 100.0)):
        rep = verify_zero_interval(n, alpha)
        ok = ok and rep.passed
        details.append(f"({n},{alpha:g}): z0={rep.parameters['root']:.4f}")
    z0 = zero_location(3, 10.0)
    ok = ok and 17.9 < z0 < 18.0
    _criterion(7, "zero bracketing and location", ok, "; ".join(details))


def test_criterion_8_escape_and_segment_shifted_family():
    from chebhalley.verify import verify_escape_bound_r

    t0 = time.perf_counter()
    ok = True
    details = []
    for n, alpha in ((3, 1000.0), (4, 2000.0), (5, 2000.0)):
        esc = verify_escape_bound_r(n, alpha, 1000, seed=88, ladder=())
        seg = verify_segment(n, alpha, 201)
        radius = n * alpha
        z0 = seg.parameters["zero"]
        ok = ok and esc.passed and seg.passed and radius / 2 < z0 < radius
        details.append(f"({n},{alpha:g}) esc {esc.worst_margin:.2e} seg {seg.worst_margin:.2e}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 2.0
    _criterion(8, "shifted-family escape + segment", ok,
               f"{'; '.join(details)}; {elapsed:.2f}s")


def test_criterion_9_figure_reproduction(figure1_grids, figure4_grids):
    from chebhalley.verify import symmetry_report

    ok = True
    details = []
    grid1, secs1 = figure1_grids[8]
    ok = ok and all(secs < 60.0 for _, secs in figure1_grids.values())
    rep = symmetry_report(grid1, 3)
    ok = ok and rep.passed
    details.append(f"fig1 {secs1:.1f}s sym {rep.parameters['fraction']:.4f}")

    img_hashes = {w: color_grid(g, default_palette(3)).sha256()
                  for w, (g, _) in figure1_grids.items()}
    ok = ok and len(set(img_hashes.values())) == 1
    ok = ok and _check_golden("figure1_dyn_800", img_hashes[1])

    for n in (3, 5):
        per_workers = figure4_grids[n]
        hashes = {w: color_grid(g, default_palette(n)).sha256()
                  for w, (g, _) in per_workers.items()}
        secs = per_workers[8][1]
        ok = ok and all(s < 60.0 for _, s in per_workers.values())
        ok = ok and len(set(hashes.values())) == 1
        ok = ok and _check_golden(f"figure4_param_n{n}_500", hashes[1])
        details.append(f"fig4 n={n} {secs:.1f}s")
    _criterion(9, "figure renders: timed, symmetric, stable hashes", ok,
               "; ".join(details))


def test_criterion_10_julia_copy_evidence(figure1_grids):
    from chebhalley.verify import symmetry_report

    grid1, _ = figure1_grids[1]
    rep_o = symmetry_report(grid1, 3)

    newt = classify_grid(newton_map(3), GridWindow(-2, 2, -2, 2, 400, 400),
                         roots_of_unity(3), 512, 1e-9)
    rep_n = symmetry_report(newt, 3)

    zoom_win = GridWindow(1.620, 1.623, -0.0015, 0.0015, 400, 400)
    zoom = classify_grid(family_map(3, 10.0), zoom_win, roots_of_unity(3),
                         2000, 1e-9)
    counts = zoom.counts()
    total = 400 * 400
    non_root1 = total - counts.get("root:0", 0)
    frac = non_root1 / total
    ok = rep_o.passed and rep_n.passed and frac >= 0.01
    _criterion(10, "rotation symmetry + Julia component inside basin of 1", ok,
               f"zoom non-root-1 fraction {frac:.3f}")


def test_criterion_11_preimage_bookkeeping():
    rng = SplitMix64(110)
    ok = True
    worst_resid = 0.0
    for n in (2, 3, 4):
        checked = 0
        while checked < 5:
            alpha = rng.complex_in_box(-3, 3, -3, 3)
            if abs(alpha - 0.5) < 1e-2 or abs(alpha - (2 * n - 1) / (2 * n - 2)) < 1e-2:
                continue
            checked += 1
            spec = family_map(n, alpha)
            pm = preimage_polynomial(spec, 1.0)
            quotient = deflate(pm, 1.0, 3)  # multiplicity three at z = 1
            ok = ok and quotient.degree == 2 * n - 3
            roots = find_roots(quotient).roots
            ok = ok and len(roots) == 2 * n - 3
            for r in roots:
                out = evaluate(spec, r)
                resid = math.inf if out.is_infinite else abs(out.z - 1.0)
                worst_resid = max(worst_resid, resid)
    ok = ok and worst_resid <= 1e-6
    _criterion(11, "preimages of 1: multiplicity 3 plus 2n-3 others", ok,
               f"worst map residual {worst_resid:.3e}")


def test_criterion_12_determinism(figure1_grids, figure4_grids):
    grid_hashes = {w: g.content_hash() for w, (g, _) in figure1_grids.items()}
    ok = len(set(grid_hashes.values())) == 1
    for n in (3, 5):
        hs = {w: g.content_hash() for w, (g, _) in figure4_grids[n].items()}
        ok = ok and len(set(hs.values())) == 1
    # in-process rerun reproduces the same bytes
    spec = family_map(3, 10.0)
    win = GridWindow(-10, 10, -10, 10, 160, 160)
    a = color_grid(classify_grid(spec, win, roots_of_unity(3), 300, 1e-9,
                                 workers=3), default_palette(3)).sha256()
    b = color_grid(classify_grid(spec, win, roots_of_unity(3), 300, 1e-9,
                                 workers=5), default_palette(3)).sha256()
    ok = ok and a == b
    # reports are byte-stable given the seed
    r1 = verify_escape_bound_b(20.0, 300, seed=7).to_json_line()
    r2 = verify_escape_bound_b(20.0, 300, seed=7).to_json_line()
    ok = ok and r1 == r2
    _criterion(12, "bit-identical images and reports", ok,
               f"grid hash {list(grid_hashes.values())[0][:12]}...")
