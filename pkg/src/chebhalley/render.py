"""Deterministic image rendering of classification grids (binary PPM P6)."""

from __future__ import annotations

import colorsys
import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import backend
from .dynamics import (
    ClassificationGrid,
    GridWindow,
    classify_grid,
    classify_parameter_grid,
)
from .maps import MapSpec, default_escape_radius, default_targets


@dataclass(frozen=True)
class Palette:
    """Colors per outcome: one hue per root, plus cycle/escape/undecided."""

    root_colors: tuple[tuple[int, int, int], ...]
    cycle_color: tuple[int, int, int] = (235, 235, 235)
    undecided_color: tuple[int, int, int] = (0, 0, 0)
    escape_lo: tuple[int, int, int] = (8, 8, 40)
    escape_hi: tuple[int, int, int] = (168, 208, 255)
    shade: float = 0.62


def default_palette(n_roots: int) -> Palette:
    colors = []
    for j in range(max(n_roots, 1)):
        r, g, b = colorsys.hsv_to_rgb(j / max(n_roots, 1), 0.82, 0.96)
        colors.append((int(round(255 * r)), int(round(255 * g)), int(round(255 * b))))
    return Palette(tuple(colors))


@dataclass
class Image:
    width: int
    height: int
    pixels: np.ndarray  # (h, w, 3) uint8

    def tobytes(self) -> bytes:
        return np.ascontiguousarray(self.pixels).tobytes()

    def sha256(self) -> str:
        return hashlib.sha256(self.tobytes()).hexdigest()


def color_grid(grid: ClassificationGrid, palette: Optional[Palette] = None) -> Image:
    """Map outcomes to RGB: root hue shaded by log(1 + iterations)."""
    if palette is None:
        palette = default_palette(len(grid.targets))
    h, w = grid.kind.shape
    out = np.zeros((h, w, 3), dtype=np.float64)
    denom = math.log1p(max(grid.max_iter, 1))
    s = np.log1p(grid.iters.astype(np.float64)) / denom
    np.clip(s, 0.0, 1.0, out=s)
    fade = 1.0 - palette.shade * s

    root_lut = np.array(palette.root_colors, dtype=np.float64)
    is_root = grid.kind == backend.KIND_ROOT
    if np.any(is_root):
        idx = np.clip(grid.index, 0, len(palette.root_colors) - 1)
        out[is_root] = root_lut[idx[is_root]] * fade[is_root, None]

    is_cycle = grid.kind == backend.KIND_CYCLE
    if np.any(is_cycle):
        out[is_cycle] = np.array(palette.cycle_color, dtype=np.float64) * fade[is_cycle, None]

    is_escaped = grid.kind == backend.KIND_ESCAPED
    if np.any(is_escaped):
        lo = np.array(palette.escape_lo, dtype=np.float64)
        hi = np.array(palette.escape_hi, dtype=np.float64)
        out[is_escaped] = lo + (hi - lo) * s[is_escaped, None]

    is_undecided = grid.kind == backend.KIND_UNDECIDED
    if np.any(is_undecided):
        out[is_undecided] = np.array(palette.undecided_color, dtype=np.float64)

    pixels = np.rint(out).astype(np.uint8)
    return Image(w, h, pixels)


def render_dynamical(spec: MapSpec, window: GridWindow,
                     palette: Optional[Palette] = None, *,
                     targets: Optional[Sequence[complex]] = None,
                     max_iter: int = 512, conv_tol: float = 1e-9,
                     escape_radius: Optional[float] = None,
                     workers: Optional[int] = None) -> Image:
    """Dynamical-plane render: classify the window, then color it."""
    if targets is None:
        targets = default_targets(spec)
    if escape_radius is None:
        escape_radius = default_escape_radius(spec)
    grid = classify_grid(spec, window, targets, max_iter, conv_tol,
                         escape_radius, workers)
    return color_grid(grid, palette)


def render_parameter(n: int, window: GridWindow,
                     palette: Optional[Palette] = None, *,
                     max_iter: int = 2000, conv_tol: float = 1e-9,
                     workers: Optional[int] = None) -> Image:
    """Parameter-plane render: per-pixel alpha, color the critical orbit fate."""
    grid = classify_parameter_grid(n, window, max_iter, conv_tol, workers)
    return color_grid(grid, palette)


def write_ppm(img: Image, path: str) -> None:
    """Binary PPM (P6, maxval 255); byte-exact for identical inputs."""
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(img.tobytes())
    except OSError as exc:
        raise OSError(f"writing PPM to {path!r}: {exc}") from exc


def dump_grid(grid: ClassificationGrid, path: str) -> None:
    """Line-delimited grid dump: pixel index, outcome tag, iterations."""
    kind = grid.kind.ravel()
    index = grid.index.ravel()
    iters = grid.iters.ravel()
    try:
        with open(path, "w") as fh:
            for i in range(kind.size):
                k = int(kind[i])
                if k == backend.KIND_ROOT:
                    tag = f"root:{int(index[i])}"
                elif k == backend.KIND_CYCLE:
                    tag = f"cycle:{int(index[i])}"
                elif k == backend.KIND_ESCAPED:
                    tag = "escaped"
                else:
                    tag = "undecided"
                fh.write(f"{i} {tag} {int(iters[i])}\n")
    except OSError as exc:
        raise OSError(f"writing grid dump to {path!r}: {exc}") from exc
