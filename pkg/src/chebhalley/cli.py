"""Command-line front end: dyn, param, probe, verify, preimages."""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional, Sequence

# let window values like -10,10,-10,10 pass as option arguments
_NEGATIVE_VALUE = re.compile(r"^-[\d.]")

from . import verify as verify_mod
from .dynamics import (
    ConnectivityVerdict,
    GridWindow,
    ProbeConfig,
    classify_grid,
    classify_parameter_grid,
    connectivity_probe,
)
from .maps import (
    DegenerateParameterError,
    MapSpec,
    circle_map,
    conjugate_family_map,
    default_escape_radius,
    default_targets,
    family_map,
    newton_map,
    shifted_map,
)
from .polyroots import cluster_roots, preimages
from .render import color_grid, default_palette, dump_grid, write_ppm
from .rng import DEFAULT_SEED
from .sphere import INFINITY


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' / 'a-bi' (either part optional, scientific notation ok)."""
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from exc


def parse_window(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be re_min,re_max,im_min,im_max")
    try:
        a, b, c, d = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from exc
    return a, b, c, d


def parse_size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("size must be WIDTHxHEIGHT")
    try:
        w, h = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from exc
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("size must be positive")
    return w, h


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{z.imag:+}i" if z.imag else repr(z.real)


class _Emitter:
    """Writes line-delimited JSON records to stdout and optionally a file."""

    def __init__(self, report_path: Optional[str]):
        self._lines: list[str] = []
        self._path = report_path

    def emit(self, record) -> None:
        line = record if isinstance(record, str) else json.dumps(record)
        self._lines.append(line)
        print(line)

    def close(self) -> None:
        if self._path:
            with open(self._path, "w") as fh:
                for line in self._lines:
                    fh.write(line + "\n")


def _echo_args(args: argparse.Namespace, fields: Sequence[str]) -> dict:
    out = {}
    for f in fields:
        v = getattr(args, f, None)
        if isinstance(v, complex):
            v = _fmt_complex(v)
        out[f] = v
    return out


def _build_spec(args: argparse.Namespace) -> MapSpec:
    family = args.family
    if family == "O":
        _require(args.n is not None and args.alpha is not None, "--family O needs --n and --alpha")
        return family_map(args.n, args.alpha)
    if family == "Oc":
        _require(args.n is not None and args.alpha is not None and args.c is not None,
                 "--family Oc needs --n, --alpha, --c")
        return conjugate_family_map(args.n, args.alpha, args.c)
    if family == "B":
        _require(args.a is not None, "--family B needs --a")
        return circle_map(args.a)
    if family == "R":
        _require(args.n is not None and args.alpha is not None, "--family R needs --n and --alpha")
        return shifted_map(args.n, args.alpha)
    if family == "newton":
        _require(args.n is not None, "--family newton needs --n")
        return newton_map(args.n)
    raise _UsageError(f"unknown family {family!r}")


class _UsageError(ValueError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise _UsageError(msg)


def _grid_window(args: argparse.Namespace) -> GridWindow:
    a, b, c, d = args.window
    w, h = args.size
    return GridWindow(a, b, c, d, w, h)


def cmd_dyn(args: argparse.Namespace) -> int:
    emitter = _Emitter(args.report)
    spec = _build_spec(args)
    window = _grid_window(args)
    targets = default_targets(spec)
    radius = args.escape_radius if args.escape_radius is not None else default_escape_radius(spec)
    emitter.emit({"command": "dyn", "args": _echo_args(
        args, ["family", "n", "alpha", "a", "c", "window", "size", "max_iter",
               "conv_tol", "escape_radius", "workers", "output"])})
    grid = classify_grid(spec, window, targets, args.max_iter, args.conv_tol,
                         radius, args.workers)
    img = color_grid(grid, default_palette(len(targets)))
    write_ppm(img, args.output)
    if args.dump_grid:
        dump_grid(grid, args.dump_grid)
    emitter.emit({"histogram": grid.counts()})
    emitter.emit({"image_sha256": img.sha256(), "grid_sha256": grid.content_hash(),
                  "path": args.output})
    emitter.close()
    return 0


def cmd_param(args: argparse.Namespace) -> int:
    emitter = _Emitter(args.report)
    _require(args.n >= 2, "--n must be >= 2")
    window = _grid_window(args)
    emitter.emit({"command": "param", "args": _echo_args(
        args, ["n", "window", "size", "max_iter", "conv_tol", "workers", "output"])})
    grid = classify_parameter_grid(args.n, window, args.max_iter, args.conv_tol,
                                   args.workers)
    img = color_grid(grid, default_palette(args.n))
    write_ppm(img, args.output)
    emitter.emit({"histogram": grid.counts()})
    emitter.emit({"image_sha256": img.sha256(), "path": args.output})
    emitter.close()
    return 0


def cmd_probe(args: argparse.Namespace) -> int:
    emitter = _Emitter(args.report)
    emitter.emit({"command": "probe", "args": _echo_args(
        args, ["n", "alpha", "grid_size", "max_iter", "conv_tol", "workers"])})
    cfg = ProbeConfig(resolution=args.grid_size, max_iter=args.max_iter,
                      conv_tol=args.conv_tol, workers=args.workers)
    verdict = connectivity_probe(args.n, args.alpha, cfg)
    emitter.emit(_verdict_record(verdict))
    emitter.close()
    return 0 if verdict.definite else 3


def _verdict_record(v: ConnectivityVerdict) -> dict:
    e = v.evidence
    return {
        "verdict": v.variant,
        "evidence": {
            "critical_point": [e.critical_point.real, e.critical_point.imag],
            "critical_in_immediate": e.critical_in_immediate,
            "critical_orbit": e.critical_orbit_tag,
            "extra_preimage_in_immediate": e.extra_preimage_in_immediate,
            "extra_preimage_results": e.extra_preimage_results,
            "preimages_checked": [[z.real, z.imag] for z in e.preimages_checked],
            "window_halfwidth": e.window_halfwidth,
            "resolution": e.resolution,
            "anchor_ok": e.anchor_ok,
        },
    }


_LEMMA_CHOICES = ("escape-b", "crit-escape", "zero-interval", "escape-r",
                  "segment", "conjugacies")


def cmd_verify(args: argparse.Namespace) -> int:
    emitter = _Emitter(args.report)
    emitter.emit({"command": "verify", "args": _echo_args(
        args, ["lemma", "all", "n", "alpha", "a", "c", "samples", "seed"])})
    reports = []
    alpha_real = args.alpha.real if args.alpha is not None else None
    if args.all:
        _require(args.n is not None and alpha_real is not None,
                 "--all needs --n and --alpha")
        reports = verify_mod.run_standard_suite(
            args.n, alpha_real, a=args.a,
            c=args.c if args.c is not None else complex(-1.0, 2.0),
            n_samples=args.samples, seed=args.seed)
    else:
        _require(args.lemma is not None, "need --lemma or --all")
        lemma = args.lemma
        if lemma == "escape-b":
            _require(args.a is not None, "escape-b needs --a")
            reports = [verify_mod.verify_escape_bound_b(args.a, args.samples, args.seed)]
        elif lemma == "crit-escape":
            _require(args.a is not None, "crit-escape needs --a")
            reports = [verify_mod.verify_critical_value_escape(args.a)]
        elif lemma == "zero-interval":
            _require(args.n is not None and alpha_real is not None,
                     "zero-interval needs --n and --alpha")
            reports = [verify_mod.verify_zero_interval(args.n, alpha_real)]
        elif lemma == "escape-r":
            _require(args.n is not None and alpha_real is not None,
                     "escape-r needs --n and --alpha")
            reports = [verify_mod.verify_escape_bound_r(args.n, alpha_real,
                                                        args.samples, args.seed)]
        elif lemma == "segment":
            _require(args.n is not None and alpha_real is not None,
                     "segment needs --n and --alpha")
            reports = [verify_mod.verify_segment(args.n, alpha_real)]
        elif lemma == "conjugacies":
            _require(args.n is not None and args.alpha is not None,
                     "conjugacies needs --n and --alpha")
            c = args.c if args.c is not None else complex(-1.0, 2.0)
            reports = [verify_mod.verify_conjugacies(args.n, args.alpha, c,
                                                     min(args.samples, 1000), args.seed)]
    for rep in reports:
        emitter.emit(rep.to_json_line())
    emitter.close()
    return 0 if all(r.passed for r in reports) else 1


def cmd_preimages(args: argparse.Namespace) -> int:
    emitter = _Emitter(args.report)
    spec = _build_spec(args)
    w = INFINITY if args.w.strip().lower() in ("inf", "infinity") else parse_complex(args.w)
    emitter.emit({"command": "preimages", "args": _echo_args(
        args, ["family", "n", "alpha", "a", "c", "w", "cluster_tol"])})
    rs = preimages(spec, w)
    clusters = cluster_roots(rs.roots, args.cluster_tol)
    for center, mult in clusters:
        residual = max(abs(r - center) for r in rs.roots
                       if abs(r - center) <= args.cluster_tol * max(1, mult)) if mult > 1 else 0.0
        emitter.emit({"root": [center.real, center.imag], "multiplicity": mult,
                      "cluster_spread": residual})
    emitter.emit({"count_with_multiplicity": len(rs.roots),
                  "max_poly_residual": max(rs.residuals)})
    emitter.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebhalley",
        description="Chebyshev-Halley family dynamics: renders, probes, checks")
    parser._negative_number_matcher = _NEGATIVE_VALUE
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_family(p):
        p.add_argument("--family", required=True,
                       choices=["O", "Oc", "B", "R", "newton"])
        p.add_argument("--n", type=int)
        p.add_argument("--alpha", type=parse_complex)
        p.add_argument("--a", type=parse_complex)
        p.add_argument("--c", type=parse_complex)

    def add_common(p, max_iter_default):
        p.add_argument("--max-iter", dest="max_iter", type=int, default=max_iter_default)
        p.add_argument("--conv-tol", dest="conv_tol", type=float, default=1e-9)
        p.add_argument("--workers", type=int, default=None,
                       help="worker threads (default: HD_WORKERS or CPU count)")
        p.add_argument("--report", default=None, help="also write records to this file")

    def add_sub(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p._negative_number_matcher = _NEGATIVE_VALUE
        return p

    p_dyn = add_sub("dyn", "render a dynamical plane")
    add_family(p_dyn)
    p_dyn.add_argument("--window", type=parse_window, required=True)
    p_dyn.add_argument("--size", type=parse_size, required=True)
    p_dyn.add_argument("-o", "--output", required=True)
    p_dyn.add_argument("--escape-radius", dest="escape_radius", type=float, default=None)
    p_dyn.add_argument("--dump-grid", dest="dump_grid", default=None)
    add_common(p_dyn, 512)
    p_dyn.set_defaults(func=cmd_dyn)

    p_param = add_sub("param", "render a parameter plane")
    p_param.add_argument("--n", type=int, required=True)
    p_param.add_argument("--window", type=parse_window, required=True)
    p_param.add_argument("--size", type=parse_size, required=True)
    p_param.add_argument("-o", "--output", required=True)
    add_common(p_param, 2000)
    p_param.set_defaults(func=cmd_param)

    p_probe = add_sub("probe", "basin-connectivity trichotomy probe")
    p_probe.add_argument("--n", type=int, required=True)
    p_probe.add_argument("--alpha", type=parse_complex, required=True)
    p_probe.add_argument("--grid-size", dest="grid_size", type=int, default=1024)
    add_common(p_probe, 2000)
    p_probe.set_defaults(func=cmd_probe)

    p_verify = add_sub("verify", "run quantitative lemma checks")
    p_verify.add_argument("--lemma", choices=_LEMMA_CHOICES, default=None)
    p_verify.add_argument("--all", action="store_true")
    p_verify.add_argument("--n", type=int)
    p_verify.add_argument("--alpha", type=parse_complex)
    p_verify.add_argument("--a", type=float)
    p_verify.add_argument("--c", type=parse_complex)
    p_verify.add_argument("--samples", type=int, default=1000)
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--report", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_pre = add_sub("preimages", "preimages of a point under a map")
    add_family(p_pre)
    p_pre.add_argument("--w", required=True, help="target value, or 'inf'")
    p_pre.add_argument("--cluster-tol", dest="cluster_tol", type=float, default=1e-6)
    p_pre.add_argument("--report", default=None)
    p_pre.set_defaults(func=cmd_preimages)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (_UsageError, DegenerateParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
