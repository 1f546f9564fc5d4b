"""Parity between the compiled and pure-Python kernels (bit-identical)."""

import os

import numpy as np
import pytest

from chebhalley.backend import load_backend, using_compiled
from chebhalley.dynamics import GridWindow, _kernel_args, _target_arrays
from chebhalley.maps import (
    circle_map,
    family_map,
    newton_map,
    roots_of_unity,
    shifted_map,
)

pytestmark = pytest.mark.skipif(
    not using_compiled(), reason="compiled backend unavailable")


def _tile_outputs(impl, args, targets, win, max_iter, radius):
    t_re, t_im = _target_arrays(targets)
    size = win.width * win.height
    kind = np.zeros(size, np.uint8)
    index = np.full(size, -1, np.int32)
    iters = np.zeros(size, np.int32)
    rre = np.zeros(size)
    rim = np.zeros(size)
    impl.classify_tile(*args, t_re, t_im,
                       win.re0, win.re_step, win.im0, win.im_step,
                       0, win.width, 0, win.height, win.width,
                       max_iter, 1e-9, radius,
                       kind, index, iters, rre, rim)
    return kind, index, iters, rre, rim


CASES = [
    (family_map(3, 0.2 + 1.592j), roots_of_unity(3), 0.0,
     GridWindow(-2, 2, -2, 2, 96, 96)),
    (family_map(2, 251.0), roots_of_unity(2), 0.0,
     GridWindow(-1.51, 1.51, -1.51, 1.51, 96, 96)),
    (circle_map(16.0), [0j], 32.0, GridWindow(-40, 40, -40, 40, 96, 96)),
    (shifted_map(3, 10.0), [], 30.0, GridWindow(-25, 25, -25, 25, 64, 64)),
    (newton_map(3), roots_of_unity(3), 0.0, GridWindow(-2, 2, -2, 2, 96, 96)),
]


@pytest.mark.parametrize("case", range(len(CASES)))
def test_classify_tile_bit_identical(case):
    spec, targets, radius, win = CASES[case]
    args = _kernel_args(spec)
    cy = load_backend("cython")
    py = load_backend("python")
    a = _tile_outputs(cy, args, targets, win, 400, radius)
    b = _tile_outputs(py, args, targets, win, 400, radius)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_param_tile_bit_identical(n):
    cy = load_backend("cython")
    py = load_backend("python")
    win = GridWindow(-1, 4, -2.5, 2.5, 64, 64)
    t_re, t_im = _target_arrays(roots_of_unity(n))

    def run(impl):
        size = win.width * win.height
        kind = np.zeros(size, np.uint8)
        index = np.full(size, -1, np.int32)
        iters = np.zeros(size, np.int32)
        rre = np.zeros(size)
        rim = np.zeros(size)
        impl.param_tile(n, t_re, t_im, win.re0, win.re_step, win.im0, win.im_step,
                        0, win.width, 0, win.height, win.width,
                        300, 1e-9, 1e-8, kind, index, iters, rre, rim)
        return kind, index, iters, rre, rim

    for x, y in zip(run(cy), run(py)):
        assert np.array_equal(x, y)


def test_scalar_point_parity_edge_cases():
    cy = load_backend("cython")
    py = load_backend("python")
    b = circle_map(500.0)
    args = _kernel_args(b)
    t_re, t_im = _target_arrays([0j])
    # pole hit, big value, escape, near-pole neighbor
    for z in (0.002 + 0j, 333.0 + 0j, 5.0 + 5.0j, 0.002000001 + 1e-9j, 1e200 + 0j):
        ra = cy.classify_point(*args, t_re, t_im, z.real, z.imag, 2000, 1e-9, 1000.0)
        rb = py.classify_point(*args, t_re, t_im, z.real, z.imag, 2000, 1e-9, 1000.0)
        assert ra == rb


def test_env_forces_python_backend():
    import subprocess
    import sys

    code = ("import chebhalley.backend as b; "
            "print(b.BACKEND); assert b.BACKEND == 'python'")
    env = dict(os.environ, CHEBHALLEY_PURE_PY="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "python"
