"""Pure-Python orbit-classification kernels (fallback backend).

This module mirrors the compiled backend ``chebhalley._orbits`` operation for
operation.  Complex arithmetic is spelled out on (re, im) pairs with the same
expression shapes as the C code, and division uses the same scaled (Smith)
algorithm, so grids computed here are bit-identical to compiled ones.
"""

from __future__ import annotations

import math

BACKEND_NAME = "python"

KIND_UNDECIDED = 0
KIND_ROOT = 1
KIND_CYCLE = 2
KIND_ESCAPED = 3

_BIG = 1e10
_POLE_RATIO = 1e-300
_BURN_IN = 50
_MAX_PERIOD = 8
_CONFIRMS = 3


def _cabs(re, im):
    return math.sqrt(re * re + im * im)


def _cdiv(are, aim, bre, bim):
    if abs(bre) >= abs(bim):
        r = bim / bre
        den = bre + bim * r
        return (are + aim * r) / den, (aim - are * r) / den
    r = bre / bim
    den = bre * r + bim
    return (are * r + aim) / den, (aim * r - are) / den


def _horner(c_re, c_im, zre, zim):
    n = len(c_re)
    rre = c_re[n - 1]
    rim = c_im[n - 1]
    for k in range(n - 2, -1, -1):
        tre = rre * zre - rim * zim + c_re[k]
        tim = rre * zim + rim * zre + c_im[k]
        rre = tre
        rim = tim
    return rre, rim


def _horner_reversed(c_re, c_im, wre, wim):
    rre = c_re[0]
    rim = c_im[0]
    for k in range(1, len(c_re)):
        tre = rre * wre - rim * wim + c_re[k]
        tim = rre * wim + rim * wre + c_im[k]
        rre = tre
        rim = tim
    return rre, rim


def _step(pn_re, pn_im, pd_re, pd_im, dpq, zre, zim):
    """One application of P/Q; returns (at_infinity, re, im)."""
    if _cabs(zre, zim) > _BIG:
        wre, wim = _cdiv(1.0, 0.0, zre, zim)
        nre, nim = _horner_reversed(pn_re, pn_im, wre, wim)
        dre, dim = _horner_reversed(pd_re, pd_im, wre, wim)
        if dre == 0.0 and dim == 0.0:
            return 1, 0.0, 0.0
        rre, rim = _cdiv(nre, nim, dre, dim)
        for _ in range(dpq):
            t = rre * zre - rim * zim
            rim = rre * zim + rim * zre
            rre = t
        if not (math.isfinite(rre) and math.isfinite(rim)):
            return 1, 0.0, 0.0
        return 0, rre, rim
    nre, nim = _horner(pn_re, pn_im, zre, zim)
    dre, dim = _horner(pd_re, pd_im, zre, zim)
    if dre == 0.0 and dim == 0.0:
        return 1, 0.0, 0.0
    if _cabs(dre, dim) < _POLE_RATIO * _cabs(nre, nim):
        return 1, 0.0, 0.0
    rre, rim = _cdiv(nre, nim, dre, dim)
    if not (math.isfinite(rre) and math.isfinite(rim)):
        return 1, 0.0, 0.0
    return 0, rre, rim


def _orbit(pn_re, pn_im, pd_re, pd_im, dpq, t_re, t_im,
           zre, zim, max_iter, conv_tol, escape_radius):
    """Classify one forward orbit.

    Returns (kind, index, iterations, rep_re, rep_im) where index is the
    target index for roots and the period for cycles.  Orbits that land on a
    pole go to infinity, which every supported family fixes: with a rigorous
    escape radius that is an escape, otherwise an eventually-fixed (period-1)
    "cycle at infinity".
    """
    nt = len(t_re)
    hist_re = [0.0] * 8
    hist_im = [0.0] * 8
    hist_re[0] = zre
    hist_im[0] = zim
    root_run = [0] * nt
    cyc_run = [0] * (_MAX_PERIOD + 1)
    for m in range(1, max_iter + 1):
        at_inf, zre, zim = _step(pn_re, pn_im, pd_re, pd_im, dpq, zre, zim)
        if at_inf:
            if escape_radius > 0.0:
                return KIND_ESCAPED, -1, m, math.inf, 0.0
            return KIND_CYCLE, 1, m, math.inf, 0.0
        if escape_radius > 0.0 and _cabs(zre, zim) > escape_radius:
            return KIND_ESCAPED, -1, m, zre, zim
        for j in range(nt):
            if _cabs(zre - t_re[j], zim - t_im[j]) <= conv_tol:
                root_run[j] += 1
                if root_run[j] == _CONFIRMS:
                    return KIND_ROOT, j, m, zre, zim
            else:
                root_run[j] = 0
        if m > _BURN_IN:
            for p in range(1, _MAX_PERIOD + 1):
                s = (m - p) % 8
                if _cabs(zre - hist_re[s], zim - hist_im[s]) < conv_tol:
                    cyc_run[p] += 1
                    if cyc_run[p] == _CONFIRMS:
                        return KIND_CYCLE, p, m, zre, zim
                else:
                    cyc_run[p] = 0
        hist_re[m % 8] = zre
        hist_im[m % 8] = zim
    return KIND_UNDECIDED, -1, max_iter, 0.0, 0.0


def _as_floats(values):
    # plain Python floats: silent IEEE overflow, no numpy scalar warnings
    return [float(v) for v in values]


def classify_point(pn_re, pn_im, pd_re, pd_im, dpq, t_re, t_im,
                   zre, zim, max_iter, conv_tol, escape_radius):
    return _orbit(_as_floats(pn_re), _as_floats(pn_im),
                  _as_floats(pd_re), _as_floats(pd_im), dpq,
                  _as_floats(t_re), _as_floats(t_im),
                  zre, zim, max_iter, conv_tol, escape_radius)


def classify_tile(pn_re, pn_im, pd_re, pd_im, dpq, t_re, t_im,
                  re0, restep, im0, imstep, x0, x1, y0, y1, width,
                  max_iter, conv_tol, escape_radius,
                  kind, index, iters, rep_re, rep_im):
    """Classify pixel centers of one tile into flat row-major output arrays."""
    pn_re = _as_floats(pn_re)
    pn_im = _as_floats(pn_im)
    pd_re = _as_floats(pd_re)
    pd_im = _as_floats(pd_im)
    t_re = _as_floats(t_re)
    t_im = _as_floats(t_im)
    for y in range(y0, y1):
        base = y * width
        cim = im0 + y * imstep
        for x in range(x0, x1):
            cre = re0 + x * restep
            k, idx, it, rre, rim = _orbit(
                pn_re, pn_im, pd_re, pd_im, dpq, t_re, t_im,
                cre, cim, max_iter, conv_tol, escape_radius)
            i = base + x
            kind[i] = k
            index[i] = idx
            iters[i] = it
            rep_re[i] = rre
            rep_im[i] = rim


def param_tile(n, t_re, t_im, re0, restep, im0, imstep, x0, x1, y0, y1, width,
               max_iter, conv_tol, eps_degen,
               kind, index, iters, rep_re, rep_im):
    """Parameter-plane tile: per pixel alpha, classify the free critical orbit.

    Degenerate alpha pixels and vanishing critical-point denominators are
    recorded as undecided with zero iterations.
    """
    t_re = _as_floats(t_re)
    t_im = _as_floats(t_im)
    size = 2 * n + 1
    degen2 = (2.0 * n - 1.0) / (2.0 * n - 2.0)
    # (constant, alpha-slope) integer pairs for the family coefficients
    a0c = float(n - 1)
    a0a = float(-2 * (n - 1))
    a1c = float(2 - 4 * n)
    a1a = float(-2 * (n - 1) * (n - 2))
    a2c = float((n - 1) * (1 - 2 * n))
    a2a = float(2 * (n - 1) * (n - 1))
    e1a = float(-2 * n * (n - 1))       # 2n E1 has no constant part
    e2c = float(-2 * n * n)
    e2a = float(2 * n * (n - 1))
    s_num = float((n - 1) * (n - 1))
    d0 = float(n * (2 * n - 1))
    d1 = float((4 * n - 1) * (n - 1))
    d2 = float(2 * (n - 1) * (n - 1))

    pn_re = [0.0] * size
    pn_im = [0.0] * size
    pd_re = [0.0] * (size - 1)
    pd_im = [0.0] * (size - 1)

    for y in range(y0, y1):
        base = y * width
        aim = im0 + y * imstep
        for x in range(x0, x1):
            are = re0 + x * restep
            i = base + x
            if _cabs(are - 0.5, aim) < eps_degen or _cabs(are - degen2, aim) < eps_degen:
                kind[i] = KIND_UNDECIDED
                index[i] = -1
                iters[i] = 0
                rep_re[i] = 0.0
                rep_im[i] = 0.0
                continue
            # free critical point: (num/den)**(1/n), principal branch
            tre = 2.0 * are - 1.0
            tim = 2.0 * aim
            wnre = s_num * (are * tre - aim * tim)
            wnim = s_num * (are * tim + aim * tre)
            sqre = are * are - aim * aim
            sqim = are * aim + aim * are
            wdre = d0 - d1 * are + d2 * sqre
            wdim = -(d1 * aim) + d2 * sqim
            if wdre == 0.0 and wdim == 0.0:
                kind[i] = KIND_UNDECIDED
                index[i] = -1
                iters[i] = 0
                rep_re[i] = 0.0
                rep_im[i] = 0.0
                continue
            wre, wim = _cdiv(wnre, wnim, wdre, wdim)
            r = _cabs(wre, wim)
            if r == 0.0:
                cre = 0.0
                cim = 0.0
            else:
                th = math.atan2(wim, wre)
                mag = math.exp(math.log(r) / n)
                cre = mag * math.cos(th / n)
                cim = mag * math.sin(th / n)
            for k in range(size):
                pn_re[k] = 0.0
                pn_im[k] = 0.0
            for k in range(size - 1):
                pd_re[k] = 0.0
                pd_im[k] = 0.0
            pn_re[0] = a0c + a0a * are
            pn_im[0] = a0a * aim
            pn_re[n] = a1c + a1a * are
            pn_im[n] = a1a * aim
            pn_re[2 * n] = a2c + a2a * are
            pn_im[2 * n] = a2a * aim
            pd_re[n - 1] = e1a * are
            pd_im[n - 1] = e1a * aim
            pd_re[2 * n - 1] = e2c + e2a * are
            pd_im[2 * n - 1] = e2a * aim
            k_, idx, it, rre, rim = _orbit(
                pn_re, pn_im, pd_re, pd_im, 1, t_re, t_im,
                cre, cim, max_iter, conv_tol, 0.0)
            kind[i] = k_
            index[i] = idx
            iters[i] = it
            rep_re[i] = rre
            rep_im[i] = rim
