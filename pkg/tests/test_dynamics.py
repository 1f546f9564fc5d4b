import math

import numpy as np
import pytest
from scipy import ndimage

from chebhalley import backend
from chebhalley.dynamics import (
    NO,
    UNDECIDED,
    YES,
    AnchorMisclassifiedError,
    GridWindow,
    ProbeConfig,
    classify_grid,
    classify_orbit,
    classify_parameter_grid,
    component_surrounds,
    connectivity_probe,
    immediate_component,
    in_immediate_basin,
    verdict_from_evidence,
)
from chebhalley.maps import (
    DegenerateParameterError,
    circle_map,
    family_map,
    free_critical_points,
    roots_of_unity,
)
from chebhalley.rng import SplitMix64
from chebhalley.sphere import INFINITY


def test_orbit_converges_inside_superattracting_basin():
    spec = family_map(3, 10.0)
    out = classify_orbit(spec, 1.0001, roots_of_unity(3), 2000, 1e-9)
    assert out.converged_to_root and out.root_index == 0
    assert out.iterations <= 10


def test_orbit_escape_of_critical_value():
    b = circle_map(500.0)
    c_plus = free_critical_points(b)[1]
    out = classify_orbit(b, c_plus, [0j], 2000, 1e-9, escape_radius=1000.0)
    assert out.is_escaped
    assert out.iterations == 1  # |B(c+)| > a^2/162 > 2a already


def test_orbit_preimage_of_zero():
    out = classify_orbit(circle_map(5.0), 5.0, [0j], 2000, 1e-9, escape_radius=10.0)
    assert out.converged_to_root and out.root_index == 0
    assert out.iterations <= 5


def test_orbit_pole_hit_is_cycle_at_infinity():
    # the origin maps straight to the (repelling) fixed point at infinity
    out = classify_orbit(family_map(3, 10.0), 0.0, roots_of_unity(3), 200, 1e-9)
    assert out.converged_to_cycle and out.period == 1
    assert math.isinf(out.representative.real)


def test_orbit_fixed_nonroot_point_detected_as_cycle():
    # z = 0 is a non-target fixed point of the circle model
    out = classify_orbit(circle_map(5.0), 0.0, [], 200, 1e-9, escape_radius=10.0)
    assert out.converged_to_cycle and out.period == 1
    assert abs(out.representative) < 1e-12


def test_grid_window_geometry():
    win = GridWindow(-1, 1, -1, 1, 10, 10)
    assert win.pixel_of(win.pixel_center(3, 7)) == (3, 7)
    assert win.pixel_of(5.0) is None
    with pytest.raises(ValueError):
        GridWindow(1, -1, 0, 1, 4, 4)


def test_classify_grid_all_basins_present():
    spec = family_map(3, 10.0)
    win = GridWindow(-10, 10, -10, 10, 200, 200)
    grid = classify_grid(spec, win, roots_of_unity(3), 400, 1e-9)
    counts = grid.counts()
    for j in range(3):
        assert counts.get(f"root:{j}", 0) > 2000


def test_classify_grid_worker_invariance():
    spec = family_map(3, 0.2 + 1.592j)
    win = GridWindow(-2, 2, -2, 2, 160, 160)
    hashes = {classify_grid(spec, win, roots_of_unity(3), 300, 1e-9,
                            workers=w).content_hash() for w in (1, 2, 8)}
    assert len(hashes) == 1


def test_immediate_component_synthetic_blobs():
    spec = family_map(3, 10.0)
    win = GridWindow(-4, 4, -4, 4, 64, 64)
    grid = classify_grid(spec, win, roots_of_unity(3), 300, 1e-9)
    # overwrite with two disjoint synthetic blobs of root 0
    grid.kind[:] = backend.KIND_UNDECIDED
    grid.index[:] = -1
    grid.kind[10:20, 10:20] = backend.KIND_ROOT
    grid.index[10:20, 10:20] = 0
    grid.kind[40:50, 40:50] = backend.KIND_ROOT
    grid.index[40:50, 40:50] = 0
    anchor = win.pixel_center(15, 15)
    comp = immediate_component(grid, anchor, 0)
    assert len(comp) == 100
    xs = {i % 64 for i in comp}
    assert xs == set(range(10, 20))


def test_immediate_component_separates_root_basins():
    spec = family_map(3, 10.0)
    win = GridWindow(-10, 10, -10, 10, 256, 256)
    grid = classify_grid(spec, win, roots_of_unity(3), 400, 1e-9)
    comp = immediate_component(grid, 1.0 + 0j, 0)
    xi = roots_of_unity(3)[1]
    px = win.pixel_of(xi)
    assert px[1] * 256 + px[0] not in comp


def test_anchor_misclassified():
    spec = family_map(3, 10.0)
    win = GridWindow(-10, 10, -10, 10, 64, 64)
    grid = classify_grid(spec, win, roots_of_unity(3), 300, 1e-9)
    with pytest.raises(AnchorMisclassifiedError):
        immediate_component(grid, 1.0 + 0j, 2)


def test_membership_point_equals_root():
    spec = family_map(3, 10.0)
    win = GridWindow(-2, 2, -2, 2, 256, 256)
    assert in_immediate_basin(spec, 1.0, 1.0, win, max_iter=600, conv_tol=1e-9) == YES


def test_membership_circle_model_critical_point_in_infinity_basin():
    # a = 16 > 15.133: c+ lies in the immediate basin of infinity; the
    # basin of infinity is handled in the reciprocal chart w = 1/z
    b = circle_map(16.0)
    c_plus = free_critical_points(b)[1]
    win = GridWindow(-2, 2, -2, 2, 512, 512)
    assert in_immediate_basin(b, c_plus, INFINITY, win,
                              max_iter=2000, conv_tol=1e-9) == YES


def test_membership_other_basin_is_decisive_no():
    # the pole's neighborhood belongs to the basin of 0 at moderate a, so a
    # point converging to 0 is decisively outside the basin of 1's twin
    spec = family_map(2, 9.0)
    win = GridWindow(-1.8, 1.8, -1.8, 1.8, 512, 512)
    # the extra preimage of +1 converges to 1 in one step but sits in a
    # separate component; the nearby bulk converges to the other root
    assert in_immediate_basin(spec, -1.21, 1.0, win,
                              max_iter=2000, conv_tol=1e-9) == NO


def test_escaped_component_surrounds_preimage_blob():
    # the immediate basin of infinity surrounds the preimage z0 = a of the
    # origin without containing it
    b = circle_map(5.0)
    win = GridWindow(-12, 12, -12, 12, 1024, 1024)
    grid = classify_grid(b, win, [0j], 2000, 1e-9, escape_radius=10.0)
    esc = grid.kind == backend.KIND_ESCAPED
    labels, _ = ndimage.label(esc, structure=np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], bool))
    ax, ay = win.pixel_of(complex(11.5, 11.5))
    comp = set(int(i) for i in np.flatnonzero(labels.ravel() == labels[ay, ax]))
    zx, zy = win.pixel_of(5.0 + 0j)
    assert zy * 1024 + zx not in comp
    assert component_surrounds(grid, comp, (zx, zy))


def test_chart_component_surrounds_pole_blob():
    # same structure in the reciprocal chart: the chart image of z0 = a is
    # the pole 1/a of the chart map, surrounded by the component of 0
    b = circle_map(5.0)
    win = GridWindow(-0.5, 0.5, -0.5, 0.5, 1024, 1024)
    grid = classify_grid(b, win, [0j], 2000, 1e-9, escape_radius=10.0)
    comp = immediate_component(grid, 0j, 0)
    px = win.pixel_of(0.2 + 0j)
    assert px[1] * 1024 + px[0] not in comp
    assert component_surrounds(grid, comp, px)


def test_verdict_mapping_exhaustive():
    rng = SplitMix64(7)
    states = (YES, NO, UNDECIDED)
    for _ in range(500):
        crit = states[rng.next_u64() % 3]
        extras = [states[rng.next_u64() % 3] for _ in range(rng.next_u64() % 4)]
        verdict = verdict_from_evidence(crit, extras)
        assert verdict in ("SimplyConnectedCase1", "SimplyConnectedCase2",
                           "InfinitelyConnected", "Undecided")
        if crit == NO:
            assert verdict == "SimplyConnectedCase1"
        elif crit == YES and any(e == YES for e in extras):
            assert verdict == "SimplyConnectedCase2"
        elif crit == YES and all(e == NO for e in extras):
            assert verdict == "InfinitelyConnected"


@pytest.mark.parametrize("n,alpha", [(2, 9.0), (3, 10.0)])
def test_probe_infinitely_connected_cases(n, alpha):
    v = connectivity_probe(n, alpha, ProbeConfig(resolution=512))
    assert v.variant == "InfinitelyConnected"
    assert v.evidence.critical_in_immediate == YES
    assert all(r == NO for r in v.evidence.extra_preimage_results)


def test_probe_chebyshev_regression():
    # no quantitative claim applies at alpha = 0; frozen as a regression:
    # the free critical points collapse onto the pre-pole at the origin,
    # so no critical point lies in the immediate basin of 1
    v = connectivity_probe(3, 0.0, ProbeConfig(resolution=512))
    assert v.variant == "SimplyConnectedCase1"
    assert abs(v.evidence.critical_point) < 1e-12


def test_probe_rejects_degenerate():
    with pytest.raises(DegenerateParameterError):
        connectivity_probe(3, 1.25)


def test_probe_preimage_count():
    v = connectivity_probe(4, 10.0, ProbeConfig(resolution=512))
    assert len(v.evidence.extra_preimages) == 2 * 4 - 3


def test_escape_soundness_under_more_iterations():
    b = circle_map(16.0)
    win = GridWindow(-40, 40, -40, 40, 48, 48)
    grid = classify_grid(b, win, [0j], 500, 1e-9, escape_radius=32.0)
    rng = SplitMix64(9)
    escaped = np.argwhere(grid.kind == backend.KIND_ESCAPED)
    for _ in range(40):
        y, x = escaped[rng.next_u64() % len(escaped)]
        z = win.pixel_center(int(x), int(y))
        again = classify_orbit(b, z, [0j], 2000, 1e-9, escape_radius=32.0)
        assert again.is_escaped


def test_grid_rotation_symmetry_of_outcomes():
    spec = family_map(3, 10.0)
    win = GridWindow(-10, 10, -10, 10, 256, 256)
    grid = classify_grid(spec, win, roots_of_unity(3), 400, 1e-9)
    from chebhalley.verify import symmetry_report

    rep = symmetry_report(grid, 3)
    assert rep.passed
    assert rep.parameters["fraction"] >= 0.99


def test_parameter_grid_marks_degenerate_pixels():
    # a window crossing alpha = 1/2 exactly
    win = GridWindow(0.5 - 0.05, 0.5 + 0.05, -0.0500001, 0.05, 5, 5)
    grid = classify_parameter_grid(3, win, 60, 1e-9)
    assert grid.counts()  # runs; degenerate pixels (if hit) are undecided


def test_parameter_grid_large_alpha_uniform_convergence():
    win = GridWindow(50, 60, -5, 5, 48, 48)
    grid = classify_parameter_grid(3, win, 2000, 1e-9)
    counts = grid.counts()
    assert counts.get("root:0", 0) == 48 * 48


def test_hd_workers_env_default(monkeypatch):
    from chebhalley.dynamics import default_workers

    monkeypatch.setenv("HD_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("HD_WORKERS", "not-a-number")
    assert default_workers() >= 1
