# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit-classification kernels.

Bit-for-bit twin of chebhalley._orbits_py: identical expression shapes for
complex multiplication, Smith-style division, sqrt(re*re + im*im) magnitudes,
and the same iteration/decision order.  Built with -ffp-contract=off so the
compiler cannot fuse the multiply-adds the Python backend performs separately.
"""

from libc.math cimport atan2, cos, exp, fabs, isfinite, log, sin, sqrt
from libc.math cimport INFINITY as C_INF

BACKEND_NAME = "cython"

cdef enum:
    K_UNDECIDED = 0
    K_ROOT = 1
    K_CYCLE = 2
    K_ESCAPED = 3

KIND_UNDECIDED = K_UNDECIDED
KIND_ROOT = K_ROOT
KIND_CYCLE = K_CYCLE
KIND_ESCAPED = K_ESCAPED

cdef double _BIG = 1e10
cdef double _POLE_RATIO = 1e-300
cdef int _BURN_IN = 50
cdef int _MAX_PERIOD = 8
cdef int _CONFIRMS = 3

cdef int _MAX_COEFFS = 64
cdef int _MAX_TARGETS = 64


cdef inline double _cabs(double re, double im) noexcept nogil:
    return sqrt(re * re + im * im)


cdef inline void _cdiv(double are, double aim, double bre, double bim,
                       double *ore, double *oim) noexcept nogil:
    cdef double r, den
    if fabs(bre) >= fabs(bim):
        r = bim / bre
        den = bre + bim * r
        ore[0] = (are + aim * r) / den
        oim[0] = (aim - are * r) / den
    else:
        r = bre / bim
        den = bre * r + bim
        ore[0] = (are * r + aim) / den
        oim[0] = (aim * r - are) / den


cdef inline void _horner(const double *c_re, const double *c_im, int n,
                         double zre, double zim,
                         double *ore, double *oim) noexcept nogil:
    cdef double rre = c_re[n - 1]
    cdef double rim = c_im[n - 1]
    cdef double tre, tim
    cdef int k
    for k in range(n - 2, -1, -1):
        tre = rre * zre - rim * zim + c_re[k]
        tim = rre * zim + rim * zre + c_im[k]
        rre = tre
        rim = tim
    ore[0] = rre
    oim[0] = rim


cdef inline void _horner_reversed(const double *c_re, const double *c_im, int n,
                                  double wre, double wim,
                                  double *ore, double *oim) noexcept nogil:
    cdef double rre = c_re[0]
    cdef double rim = c_im[0]
    cdef double tre, tim
    cdef int k
    for k in range(1, n):
        tre = rre * wre - rim * wim + c_re[k]
        tim = rre * wim + rim * wre + c_im[k]
        rre = tre
        rim = tim
    ore[0] = rre
    oim[0] = rim


cdef inline int _step(const double *pn_re, const double *pn_im, int npn,
                      const double *pd_re, const double *pd_im, int npd,
                      int dpq, double zre, double zim,
                      double *ore, double *oim) noexcept nogil:
    cdef double wre, wim, nre, nim, dre, dim, rre, rim, t
    cdef int k
    if _cabs(zre, zim) > _BIG:
        _cdiv(1.0, 0.0, zre, zim, &wre, &wim)
        _horner_reversed(pn_re, pn_im, npn, wre, wim, &nre, &nim)
        _horner_reversed(pd_re, pd_im, npd, wre, wim, &dre, &dim)
        if dre == 0.0 and dim == 0.0:
            return 1
        _cdiv(nre, nim, dre, dim, &rre, &rim)
        for k in range(dpq):
            t = rre * zre - rim * zim
            rim = rre * zim + rim * zre
            rre = t
        if not (isfinite(rre) and isfinite(rim)):
            return 1
        ore[0] = rre
        oim[0] = rim
        return 0
    _horner(pn_re, pn_im, npn, zre, zim, &nre, &nim)
    _horner(pd_re, pd_im, npd, zre, zim, &dre, &dim)
    if dre == 0.0 and dim == 0.0:
        return 1
    if _cabs(dre, dim) < _POLE_RATIO * _cabs(nre, nim):
        return 1
    _cdiv(nre, nim, dre, dim, &rre, &rim)
    if not (isfinite(rre) and isfinite(rim)):
        return 1
    ore[0] = rre
    oim[0] = rim
    return 0


cdef struct OrbitResult:
    int kind
    int index
    int iters
    double rep_re
    double rep_im


cdef OrbitResult _orbit(const double *pn_re, const double *pn_im, int npn,
                        const double *pd_re, const double *pd_im, int npd,
                        int dpq, const double *t_re, const double *t_im, int nt,
                        double zre, double zim, int max_iter,
                        double conv_tol, double escape_radius) noexcept nogil:
    cdef OrbitResult res
    cdef double hist_re[8]
    cdef double hist_im[8]
    cdef int root_run[64]
    cdef int cyc_run[9]
    cdef int m, j, p, s, at_inf
    cdef double nzre, nzim
    for j in range(8):
        hist_re[j] = 0.0
        hist_im[j] = 0.0
    hist_re[0] = zre
    hist_im[0] = zim
    for j in range(nt):
        root_run[j] = 0
    for p in range(_MAX_PERIOD + 1):
        cyc_run[p] = 0
    for m in range(1, max_iter + 1):
        at_inf = _step(pn_re, pn_im, npn, pd_re, pd_im, npd, dpq, zre, zim,
                       &nzre, &nzim)
        if at_inf:
            if escape_radius > 0.0:
                res.kind = K_ESCAPED
                res.index = -1
                res.iters = m
                res.rep_re = C_INF
                res.rep_im = 0.0
                return res
            res.kind = K_CYCLE
            res.index = 1
            res.iters = m
            res.rep_re = C_INF
            res.rep_im = 0.0
            return res
        zre = nzre
        zim = nzim
        if escape_radius > 0.0 and _cabs(zre, zim) > escape_radius:
            res.kind = K_ESCAPED
            res.index = -1
            res.iters = m
            res.rep_re = zre
            res.rep_im = zim
            return res
        for j in range(nt):
            if _cabs(zre - t_re[j], zim - t_im[j]) <= conv_tol:
                root_run[j] += 1
                if root_run[j] == _CONFIRMS:
                    res.kind = K_ROOT
                    res.index = j
                    res.iters = m
                    res.rep_re = zre
                    res.rep_im = zim
                    return res
            else:
                root_run[j] = 0
        if m > _BURN_IN:
            for p in range(1, _MAX_PERIOD + 1):
                s = (m - p) % 8
                if _cabs(zre - hist_re[s], zim - hist_im[s]) < conv_tol:
                    cyc_run[p] += 1
                    if cyc_run[p] == _CONFIRMS:
                        res.kind = K_CYCLE
                        res.index = p
                        res.iters = m
                        res.rep_re = zre
                        res.rep_im = zim
                        return res
                else:
                    cyc_run[p] = 0
        hist_re[m % 8] = zre
        hist_im[m % 8] = zim
    res.kind = K_UNDECIDED
    res.index = -1
    res.iters = max_iter
    res.rep_re = 0.0
    res.rep_im = 0.0
    return res


def classify_point(double[::1] pn_re, double[::1] pn_im,
                   double[::1] pd_re, double[::1] pd_im, int dpq,
                   double[::1] t_re, double[::1] t_im,
                   double zre, double zim, int max_iter,
                   double conv_tol, double escape_radius):
    cdef int nt = t_re.shape[0]
    cdef const double *tr = NULL
    cdef const double *ti = NULL
    if nt > _MAX_TARGETS:
        raise ValueError("too many targets")
    if nt > 0:
        tr = &t_re[0]
        ti = &t_im[0]
    cdef OrbitResult res = _orbit(
        &pn_re[0], &pn_im[0], pn_re.shape[0],
        &pd_re[0], &pd_im[0], pd_re.shape[0],
        dpq, tr, ti, nt, zre, zim, max_iter, conv_tol, escape_radius)
    return res.kind, res.index, res.iters, res.rep_re, res.rep_im


def classify_tile(double[::1] pn_re, double[::1] pn_im,
                  double[::1] pd_re, double[::1] pd_im, int dpq,
                  double[::1] t_re, double[::1] t_im,
                  double re0, double restep, double im0, double imstep,
                  int x0, int x1, int y0, int y1, int width,
                  int max_iter, double conv_tol, double escape_radius,
                  unsigned char[::1] kind, int[::1] index, int[::1] iters,
                  double[::1] rep_re, double[::1] rep_im):
    cdef int nt = t_re.shape[0]
    cdef const double *tr = NULL
    cdef const double *ti = NULL
    if nt > _MAX_TARGETS:
        raise ValueError("too many targets")
    if nt > 0:
        tr = &t_re[0]
        ti = &t_im[0]
    cdef int npn = pn_re.shape[0]
    cdef int npd = pd_re.shape[0]
    cdef const double *cnr = &pn_re[0]
    cdef const double *cni = &pn_im[0]
    cdef const double *cdr = &pd_re[0]
    cdef const double *cdi = &pd_im[0]
    cdef int x, y
    cdef Py_ssize_t base, i
    cdef double cre, cim
    cdef OrbitResult res
    with nogil:
        for y in range(y0, y1):
            base = <Py_ssize_t> y * width
            cim = im0 + y * imstep
            for x in range(x0, x1):
                cre = re0 + x * restep
                res = _orbit(cnr, cni, npn, cdr, cdi, npd, dpq, tr, ti, nt,
                             cre, cim, max_iter, conv_tol, escape_radius)
                i = base + x
                kind[i] = <unsigned char> res.kind
                index[i] = res.index
                iters[i] = res.iters
                rep_re[i] = res.rep_re
                rep_im[i] = res.rep_im


def param_tile(int n, double[::1] t_re, double[::1] t_im,
               double re0, double restep, double im0, double imstep,
               int x0, int x1, int y0, int y1, int width,
               int max_iter, double conv_tol, double eps_degen,
               unsigned char[::1] kind, int[::1] index, int[::1] iters,
               double[::1] rep_re, double[::1] rep_im):
    cdef int size = 2 * n + 1
    if size > _MAX_COEFFS:
        raise ValueError("n too large for the compiled kernel")
    cdef int nt = t_re.shape[0]
    cdef const double *tr = NULL
    cdef const double *ti = NULL
    if nt > _MAX_TARGETS:
        raise ValueError("too many targets")
    if nt > 0:
        tr = &t_re[0]
        ti = &t_im[0]
    cdef double degen2 = (2.0 * n - 1.0) / (2.0 * n - 2.0)
    cdef double a0c = <double> (n - 1)
    cdef double a0a = <double> (-2 * (n - 1))
    cdef double a1c = <double> (2 - 4 * n)
    cdef double a1a = <double> (-2 * (n - 1) * (n - 2))
    cdef double a2c = <double> ((n - 1) * (1 - 2 * n))
    cdef double a2a = <double> (2 * (n - 1) * (n - 1))
    cdef double e1a = <double> (-2 * n * (n - 1))
    cdef double e2c = <double> (-2 * n * n)
    cdef double e2a = <double> (2 * n * (n - 1))
    cdef double s_num = <double> ((n - 1) * (n - 1))
    cdef double d0 = <double> (n * (2 * n - 1))
    cdef double d1 = <double> ((4 * n - 1) * (n - 1))
    cdef double d2 = <double> (2 * (n - 1) * (n - 1))

    cdef double pn_re[64]
    cdef double pn_im[64]
    cdef double pd_re[64]
    cdef double pd_im[64]

    cdef int x, y, k
    cdef Py_ssize_t base, i
    cdef double are, aim, tre, tim, wnre, wnim, sqre, sqim, wdre, wdim
    cdef double wre, wim, r, th, mag, cre, cim
    cdef OrbitResult res
    with nogil:
        for y in range(y0, y1):
            base = <Py_ssize_t> y * width
            aim = im0 + y * imstep
            for x in range(x0, x1):
                are = re0 + x * restep
                i = base + x
                if _cabs(are - 0.5, aim) < eps_degen or _cabs(are - degen2, aim) < eps_degen:
                    kind[i] = K_UNDECIDED
                    index[i] = -1
                    iters[i] = 0
                    rep_re[i] = 0.0
                    rep_im[i] = 0.0
                    continue
                tre = 2.0 * are - 1.0
                tim = 2.0 * aim
                wnre = s_num * (are * tre - aim * tim)
                wnim = s_num * (are * tim + aim * tre)
                sqre = are * are - aim * aim
                sqim = are * aim + aim * are
                wdre = d0 - d1 * are + d2 * sqre
                wdim = -(d1 * aim) + d2 * sqim
                if wdre == 0.0 and wdim == 0.0:
                    kind[i] = K_UNDECIDED
                    index[i] = -1
                    iters[i] = 0
                    rep_re[i] = 0.0
                    rep_im[i] = 0.0
                    continue
                _cdiv(wnre, wnim, wdre, wdim, &wre, &wim)
                r = _cabs(wre, wim)
                if r == 0.0:
                    cre = 0.0
                    cim = 0.0
                else:
                    th = atan2(wim, wre)
                    mag = exp(log(r) / n)
                    cre = mag * cos(th / n)
                    cim = mag * sin(th / n)
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
                res = _orbit(pn_re, pn_im, size, pd_re, pd_im, size - 1, 1,
                             tr, ti, nt, cre, cim, max_iter, conv_tol, 0.0)
                kind[i] = <unsigned char> res.kind
                index[i] = res.index
                iters[i] = res.iters
                rep_re[i] = res.rep_re
                rep_im[i] = res.rep_im
