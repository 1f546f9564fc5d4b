"""Orbit classification, basin grids, and the basin-connectivity probe."""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage

from . import backend
from .maps import (
    DegenerateParameterError,
    MapSpec,
    default_escape_radius,
    default_targets,
    degenerate_check,
    family_map,
    free_critical_points,
    reciprocal_map,
    roots_of_unity,
)
from .polyroots import deflate, find_roots
from .sphere import INFINITY, as_extended

TILE = 64

YES = "yes"
NO = "no"
UNDECIDED = "undecided"

KIND_NAMES = {
    backend.KIND_UNDECIDED: "undecided",
    backend.KIND_ROOT: "root",
    backend.KIND_CYCLE: "cycle",
    backend.KIND_ESCAPED: "escaped",
}


class AnchorMisclassifiedError(ValueError):
    """Flood-fill anchor pixel does not carry the expected classification."""


@dataclass(frozen=True)
class OrbitOutcome:
    """Classification of one forward orbit."""

    kind: int
    root_index: int = -1
    period: int = 0
    representative: complex = 0j
    iterations: int = 0

    @classmethod
    def undecided(cls) -> "OrbitOutcome":
        return cls(backend.KIND_UNDECIDED)

    @classmethod
    def to_root(cls, index: int, iterations: int) -> "OrbitOutcome":
        return cls(backend.KIND_ROOT, root_index=index, iterations=iterations)

    @classmethod
    def to_cycle(cls, period: int, representative: complex, iterations: int) -> "OrbitOutcome":
        return cls(backend.KIND_CYCLE, period=period,
                   representative=representative, iterations=iterations)

    @classmethod
    def escaped(cls, iterations: int) -> "OrbitOutcome":
        return cls(backend.KIND_ESCAPED, iterations=iterations)

    @property
    def converged_to_root(self) -> bool:
        return self.kind == backend.KIND_ROOT

    @property
    def converged_to_cycle(self) -> bool:
        return self.kind == backend.KIND_CYCLE

    @property
    def is_escaped(self) -> bool:
        return self.kind == backend.KIND_ESCAPED

    @property
    def is_undecided(self) -> bool:
        return self.kind == backend.KIND_UNDECIDED

    def tag(self) -> str:
        if self.converged_to_root:
            return f"root:{self.root_index}"
        if self.converged_to_cycle:
            return f"cycle:{self.period}"
        return KIND_NAMES[self.kind]


@dataclass(frozen=True)
class GridWindow:
    """A rectangle in the plane sampled at pixel centers, row 0 at the top."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    width: int
    height: int

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("window bounds must be increasing")
        if self.width < 1 or self.height < 1:
            raise ValueError("window must have positive pixel dimensions")

    @classmethod
    def square(cls, half: float, resolution: int) -> "GridWindow":
        return cls(-half, half, -half, half, resolution, resolution)

    @property
    def re_step(self) -> float:
        return (self.re_max - self.re_min) / self.width

    @property
    def im_step(self) -> float:
        # negative: rows run downward from im_max
        return (self.im_min - self.im_max) / self.height

    @property
    def re0(self) -> float:
        return self.re_min + 0.5 * self.re_step

    @property
    def im0(self) -> float:
        return self.im_max + 0.5 * self.im_step

    def pixel_center(self, x: int, y: int) -> complex:
        return complex(self.re0 + x * self.re_step, self.im0 + y * self.im_step)

    def pixel_of(self, z: complex) -> Optional[tuple[int, int]]:
        z = complex(z)
        x = math.floor((z.real - self.re_min) / self.re_step)
        y = math.floor((z.imag - self.im_max) / self.im_step)
        if 0 <= x < self.width and 0 <= y < self.height:
            return int(x), int(y)
        return None


@dataclass
class ClassificationGrid:
    """Per-pixel orbit outcomes over a window (row-major numpy storage)."""

    window: GridWindow
    targets: tuple[complex, ...]
    label: str
    max_iter: int
    conv_tol: float
    escape_radius: Optional[float]
    kind: np.ndarray = field(repr=False)      # uint8 (h, w)
    index: np.ndarray = field(repr=False)     # int32 (h, w)
    iters: np.ndarray = field(repr=False)     # int32 (h, w)
    rep_re: np.ndarray = field(repr=False)    # float64 (h, w)
    rep_im: np.ndarray = field(repr=False)    # float64 (h, w)

    def outcome(self, x: int, y: int) -> OrbitOutcome:
        k = int(self.kind[y, x])
        if k == backend.KIND_ROOT:
            return OrbitOutcome.to_root(int(self.index[y, x]), int(self.iters[y, x]))
        if k == backend.KIND_CYCLE:
            rep = complex(self.rep_re[y, x], self.rep_im[y, x])
            return OrbitOutcome.to_cycle(int(self.index[y, x]), rep, int(self.iters[y, x]))
        if k == backend.KIND_ESCAPED:
            return OrbitOutcome.escaped(int(self.iters[y, x]))
        return OrbitOutcome.undecided()

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        flat_kind = self.kind.ravel()
        flat_index = self.index.ravel()
        for k_val in np.unique(flat_kind):
            mask = flat_kind == k_val
            if k_val == backend.KIND_ROOT:
                for idx in np.unique(flat_index[mask]):
                    out[f"root:{int(idx)}"] = int(np.count_nonzero(mask & (flat_index == idx)))
            elif k_val == backend.KIND_CYCLE:
                out["cycle"] = int(np.count_nonzero(mask))
            else:
                out[KIND_NAMES[int(k_val)]] = int(np.count_nonzero(mask))
        return dict(sorted(out.items()))

    def content_hash(self) -> str:
        h = hashlib.sha256()
        w = self.window
        header = (f"{self.label}|{w.re_min!r},{w.re_max!r},{w.im_min!r},{w.im_max!r},"
                  f"{w.width},{w.height}|{self.max_iter}|{self.conv_tol!r}|{self.escape_radius!r}")
        h.update(header.encode())
        for arr in (self.kind, self.index, self.iters, self.rep_re, self.rep_im):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()


def _kernel_args(spec: MapSpec):
    num, den = spec.num, spec.den
    dpq = num.degree - den.degree
    if dpq < 0:
        raise ValueError("classification kernels expect deg num >= deg den")
    pn = np.array(num.coeffs, dtype=np.complex128)
    pd = np.array(den.coeffs, dtype=np.complex128)
    return (np.ascontiguousarray(pn.real), np.ascontiguousarray(pn.imag),
            np.ascontiguousarray(pd.real), np.ascontiguousarray(pd.imag), dpq)


def _target_arrays(targets: Sequence[complex]):
    t = np.array([complex(v) for v in targets], dtype=np.complex128)
    if t.size > 64:
        raise ValueError("at most 64 targets supported")
    return np.ascontiguousarray(t.real), np.ascontiguousarray(t.imag)


def default_workers() -> int:
    env = os.environ.get("HD_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def classify_orbit(spec: MapSpec, z0, targets: Sequence[complex],
                   max_iter: int = 2000, conv_tol: float = 1e-9,
                   escape_radius: Optional[float] = None) -> OrbitOutcome:
    """Classify the forward orbit of one seed.

    Convergence to targets[k] is declared after three consecutive iterates
    within conv_tol; escape only when an escape radius is supplied (it is
    rigorous only when it comes from the escape lemmas: 2a for the circle
    model, n*alpha for the shifted family); attracting-cycle detection kicks
    in after a 50-iteration burn-in for periods up to 8.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if conv_tol <= 0:
        raise ValueError("conv_tol must be positive")
    z0x = as_extended(z0)
    radius = float(escape_radius) if escape_radius is not None else 0.0
    if z0x.is_infinite:
        if radius > 0.0:
            return OrbitOutcome.escaped(0)
        return OrbitOutcome.to_cycle(1, complex(math.inf, 0.0), 0)
    pn_re, pn_im, pd_re, pd_im, dpq = _kernel_args(spec)
    t_re, t_im = _target_arrays(targets)
    k, idx, it, rre, rim = backend.classify_point(
        pn_re, pn_im, pd_re, pd_im, dpq, t_re, t_im,
        z0x.z.real, z0x.z.imag, int(max_iter), float(conv_tol), radius)
    if k == backend.KIND_ROOT:
        return OrbitOutcome.to_root(idx, it)
    if k == backend.KIND_CYCLE:
        return OrbitOutcome.to_cycle(idx, complex(rre, rim), it)
    if k == backend.KIND_ESCAPED:
        return OrbitOutcome.escaped(it)
    return OrbitOutcome.undecided()


def _run_tiles(window: GridWindow, workers: Optional[int], task) -> None:
    tiles = []
    for y0 in range(0, window.height, TILE):
        for x0 in range(0, window.width, TILE):
            tiles.append((x0, min(x0 + TILE, window.width),
                          y0, min(y0 + TILE, window.height)))
    nworkers = workers if workers else default_workers()
    if nworkers <= 1:
        for t in tiles:
            task(*t)
        return
    with ThreadPoolExecutor(max_workers=nworkers) as pool:
        futures = [pool.submit(task, *t) for t in tiles]
        for f in futures:
            f.result()


def _alloc(window: GridWindow):
    h, w = window.height, window.width
    return (np.zeros((h, w), dtype=np.uint8), np.full((h, w), -1, dtype=np.int32),
            np.zeros((h, w), dtype=np.int32), np.zeros((h, w), dtype=np.float64),
            np.zeros((h, w), dtype=np.float64))


def classify_grid(spec: MapSpec, window: GridWindow, targets: Sequence[complex],
                  max_iter: int = 2000, conv_tol: float = 1e-9,
                  escape_radius: Optional[float] = None,
                  workers: Optional[int] = None) -> ClassificationGrid:
    """Classify every pixel center; output is independent of worker count.

    Tiles of 64 x 64 pixels are distributed over a thread pool; every pixel
    is a pure function of its center, so assembly is race-free and the
    resulting arrays are bit-identical for any schedule.
    """
    pn_re, pn_im, pd_re, pd_im, dpq = _kernel_args(spec)
    t_re, t_im = _target_arrays(targets)
    kind, index, iters, rep_re, rep_im = _alloc(window)
    fk, fi, fit, frr, fri = (kind.ravel(), index.ravel(), iters.ravel(),
                             rep_re.ravel(), rep_im.ravel())
    radius = float(escape_radius) if escape_radius is not None else 0.0

    def task(x0, x1, y0, y1):
        backend.classify_tile(
            pn_re, pn_im, pd_re, pd_im, dpq, t_re, t_im,
            window.re0, window.re_step, window.im0, window.im_step,
            x0, x1, y0, y1, window.width,
            int(max_iter), float(conv_tol), radius,
            fk, fi, fit, frr, fri)

    _run_tiles(window, workers, task)
    return ClassificationGrid(window, tuple(complex(t) for t in targets), spec.label(),
                              int(max_iter), float(conv_tol),
                              escape_radius if escape_radius is not None else None,
                              kind, index, iters, rep_re, rep_im)


def classify_parameter_grid(n: int, window: GridWindow, max_iter: int = 2000,
                            conv_tol: float = 1e-9,
                            workers: Optional[int] = None) -> ClassificationGrid:
    """Per-pixel alpha: classify the orbit of the principal free critical point.

    Degenerate alpha pixels are recorded as undecided with zero iterations.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    targets = roots_of_unity(n)
    t_re, t_im = _target_arrays(targets)
    kind, index, iters, rep_re, rep_im = _alloc(window)
    fk, fi, fit, frr, fri = (kind.ravel(), index.ravel(), iters.ravel(),
                             rep_re.ravel(), rep_im.ravel())

    def task(x0, x1, y0, y1):
        backend.param_tile(
            n, t_re, t_im,
            window.re0, window.re_step, window.im0, window.im_step,
            x0, x1, y0, y1, window.width,
            int(max_iter), float(conv_tol), 1e-8,
            fk, fi, fit, frr, fri)

    _run_tiles(window, workers, task)
    return ClassificationGrid(window, tuple(targets), f"param n={n}",
                              int(max_iter), float(conv_tol), None,
                              kind, index, iters, rep_re, rep_im)


_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def _root_component_labels(grid: ClassificationGrid, root_index: int):
    mask = (grid.kind == backend.KIND_ROOT) & (grid.index == root_index)
    labels, _ = ndimage.label(mask, structure=_FOUR_CONNECTED)
    return labels


def immediate_component(grid: ClassificationGrid, anchor: complex,
                        root_index: int) -> set[int]:
    """Flat pixel indices of the 4-connected same-root component at anchor."""
    px = grid.window.pixel_of(anchor)
    if px is None:
        raise ValueError(f"anchor {anchor!r} lies outside the window")
    x, y = px
    if not (grid.kind[y, x] == backend.KIND_ROOT and grid.index[y, x] == root_index):
        raise AnchorMisclassifiedError(
            f"anchor pixel {px} is {grid.outcome(x, y).tag()!r}, expected root:{root_index}")
    labels = _root_component_labels(grid, root_index)
    lab = labels[y, x]
    return set(int(i) for i in np.flatnonzero(labels.ravel() == lab))


def component_surrounds(grid: ClassificationGrid, component: set[int],
                        pixel: tuple[int, int]) -> bool:
    """True iff flood fill from pixel through non-component pixels is trapped."""
    h, w = grid.kind.shape
    x, y = pixel
    if y * w + x in component:
        return False
    comp_mask = np.zeros(h * w, dtype=bool)
    comp_mask[list(component)] = True
    comp_mask = comp_mask.reshape(h, w)
    labels, _ = ndimage.label(~comp_mask, structure=_FOUR_CONNECTED)
    lab = labels[y, x]
    border = np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    return not bool(np.any(border == lab))


def _boundary_adjacent_mask(grid: ClassificationGrid) -> np.ndarray:
    """Pixels with a 4-neighbor of differing (kind, index) classification."""
    code = grid.kind.astype(np.int64) * (2 ** 32) + (grid.index.astype(np.int64) + 1)
    out = np.zeros_like(code, dtype=bool)
    out[:-1, :] |= code[:-1, :] != code[1:, :]
    out[1:, :] |= code[1:, :] != code[:-1, :]
    out[:, :-1] |= code[:, :-1] != code[:, 1:]
    out[:, 1:] |= code[:, 1:] != code[:, :-1]
    return out


def _pixel_membership(grid: ClassificationGrid, labels: np.ndarray, lab: int,
                      point: complex) -> str:
    px = grid.window.pixel_of(point)
    if px is None:
        return UNDECIDED
    x, y = px
    if _boundary_adjacent_mask(grid)[y, x]:
        return UNDECIDED
    return YES if labels[y, x] == lab else NO


def in_immediate_basin(spec: MapSpec, point: complex, root,
                       window: GridWindow, resolution: Optional[int] = None,
                       max_iter: int = 2000, conv_tol: float = 1e-9,
                       targets: Optional[Sequence[complex]] = None,
                       escape_radius: Optional[float] = None,
                       workers: Optional[int] = None) -> str:
    """Grid-approximate membership of point in the immediate basin of root.

    Returns "yes", "no", or "undecided".  The basin of infinity is handled in
    the reciprocal chart w = 1/z (so for an infinite root the window is a
    w-chart window).  A point whose orbit demonstrably converges elsewhere is
    a decisive "no" without consulting the grid; the grid answer is undecided
    whenever the point's pixel touches a differing classification.
    """
    rootx = as_extended(root)
    if rootx.is_infinite:
        if spec.kind == "B" and escape_radius is None:
            escape_radius = default_escape_radius(spec)
        spec = reciprocal_map(spec)
        pz = complex(point)
        if pz == 0:
            # chart image is infinity itself; its orbit decides
            pass
        point = complex(1.0, 0.0) / pz if pz != 0 else INFINITY
        root_value = 0j
    else:
        root_value = rootx.z
    if resolution is not None and (window.width != resolution or window.height != resolution):
        window = GridWindow(window.re_min, window.re_max, window.im_min, window.im_max,
                            resolution, resolution)
    if targets is None:
        try:
            targets = default_targets(spec)
        except ValueError:
            targets = [root_value]
    targets = list(targets)
    root_index = None
    for j, t in enumerate(targets):
        if abs(t - root_value) <= 1e-9 * (1.0 + abs(t)):
            root_index = j
            break
    if root_index is None:
        targets.append(root_value)
        root_index = len(targets) - 1

    orbit = classify_orbit(spec, point, targets, max_iter, conv_tol, escape_radius)
    if orbit.is_undecided:
        return UNDECIDED
    if not (orbit.converged_to_root and orbit.root_index == root_index):
        return NO

    grid = classify_grid(spec, window, targets, max_iter, conv_tol, escape_radius, workers)
    anchor_px = window.pixel_of(root_value)
    if anchor_px is None:
        raise ValueError("root does not lie inside the window")
    x, y = anchor_px
    if not (grid.kind[y, x] == backend.KIND_ROOT and grid.index[y, x] == root_index):
        raise AnchorMisclassifiedError(
            f"root pixel {anchor_px} classified {grid.outcome(x, y).tag()!r}")
    labels = _root_component_labels(grid, root_index)
    lab = labels[y, x]
    pointx = as_extended(point)
    if pointx.is_infinite:
        return UNDECIDED
    return _pixel_membership(grid, labels, lab, pointx.z)


@dataclass(frozen=True)
class ProbeConfig:
    resolution: int = 1024
    max_iter: int = 2000
    conv_tol: float = 1e-9
    window_scale: float = 1.5
    workers: Optional[int] = None


@dataclass
class ProbeEvidence:
    critical_point: complex
    critical_in_immediate: str
    critical_orbit_tag: str
    extra_preimages: list[complex]
    extra_preimage_results: list[str]
    extra_preimage_in_immediate: str
    preimages_checked: list[complex]
    window_halfwidth: float
    resolution: int
    anchor_ok: bool = True


SIMPLY_CONNECTED_CASE1 = "SimplyConnectedCase1"
SIMPLY_CONNECTED_CASE2 = "SimplyConnectedCase2"
INFINITELY_CONNECTED = "InfinitelyConnected"
VERDICT_UNDECIDED = "Undecided"


@dataclass
class ConnectivityVerdict:
    variant: str
    evidence: ProbeEvidence

    @property
    def definite(self) -> bool:
        return self.variant != VERDICT_UNDECIDED


def verdict_from_evidence(critical_in: str, extras_in: Sequence[str]) -> str:
    """Map (critical point in A*, extra preimages in A*) evidence to a verdict.

    No critical point in the immediate basin forces simple connectivity; with
    the critical point inside, an extra preimage inside again gives simple
    connectivity, while all extra preimages outside forces connectivity
    infinity.  Any undecided answer on the decisive branch is Undecided.
    """
    if critical_in == NO:
        return SIMPLY_CONNECTED_CASE1
    if critical_in == UNDECIDED:
        return VERDICT_UNDECIDED
    if any(r == YES for r in extras_in):
        return SIMPLY_CONNECTED_CASE2
    if all(r == NO for r in extras_in):
        return INFINITELY_CONNECTED
    return VERDICT_UNDECIDED


def _aggregate(results: Sequence[str]) -> str:
    if any(r == YES for r in results):
        return YES
    if all(r == NO for r in results):
        return NO
    return UNDECIDED


def connectivity_probe(n: int, alpha: complex,
                       cfg: ProbeConfig = ProbeConfig()) -> ConnectivityVerdict:
    """Decide the connectivity trichotomy for the immediate basin of z = 1.

    Evidence: (i) whether the free critical point nearest the positive real
    axis lies in the immediate basin of 1, and (ii) whether any of the 2n - 3
    extra preimages of 1 (after deflating z = 1 three times) does.
    """
    alpha = complex(alpha)
    if degenerate_check(n, alpha):
        raise DegenerateParameterError(f"alpha={alpha!r} is degenerate for n={n}")
    spec = family_map(n, alpha)
    crits = free_critical_points(spec)
    c1 = min(crits, key=lambda z: (abs(math.atan2(z.imag, z.real)),
                                   math.atan2(z.imag, z.real)))
    pre_poly = spec.num - spec.den
    quotient = deflate(pre_poly, 1.0, 3)
    extras = find_roots(quotient).roots

    half = cfg.window_scale * max([1.0, abs(c1)] + [abs(r) for r in extras])
    window = GridWindow.square(half, cfg.resolution)
    targets = roots_of_unity(n)
    grid = classify_grid(spec, window, targets, cfg.max_iter, cfg.conv_tol,
                         None, cfg.workers)

    anchor_ok = True
    labels = _root_component_labels(grid, 0)
    px = window.pixel_of(1.0 + 0j)
    x, y = px
    lab = 0
    if grid.kind[y, x] == backend.KIND_ROOT and grid.index[y, x] == 0:
        lab = labels[y, x]
    else:
        # search the 8 neighbors for a correctly classified anchor pixel
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
            nx, ny = x + dx, y + dy
            if 0 <= nx < window.width and 0 <= ny < window.height and \
                    grid.kind[ny, nx] == backend.KIND_ROOT and grid.index[ny, nx] == 0:
                lab = labels[ny, nx]
                break
        else:
            anchor_ok = False

    def membership(point: complex) -> tuple[str, str]:
        orbit = classify_orbit(spec, point, targets, cfg.max_iter, cfg.conv_tol)
        if orbit.is_undecided:
            return UNDECIDED, orbit.tag()
        if not (orbit.converged_to_root and orbit.root_index == 0):
            return NO, orbit.tag()
        if not anchor_ok:
            return UNDECIDED, orbit.tag()
        return _pixel_membership(grid, labels, lab, point), orbit.tag()

    crit_in, crit_tag = membership(c1)
    extra_results = []
    for r in extras:
        res, _ = membership(r)
        extra_results.append(res)

    evidence = ProbeEvidence(
        critical_point=c1,
        critical_in_immediate=crit_in,
        critical_orbit_tag=crit_tag,
        extra_preimages=list(extras),
        extra_preimage_results=extra_results,
        extra_preimage_in_immediate=_aggregate(extra_results) if extras else NO,
        preimages_checked=[1.0 + 0j] * 3 + list(extras),
        window_halfwidth=half,
        resolution=cfg.resolution,
        anchor_ok=anchor_ok,
    )
    return ConnectivityVerdict(verdict_from_evidence(crit_in, extra_results), evidence)
