# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: hot inner loops for orbit iteration and separated-set
counting.  Mirrors `_reference` exactly; keep the two in lockstep."""

from libc.math cimport sin, fabs, floor

import numpy as np

cdef double TWO_PI = 6.283185307179586476925287


cdef inline double _trig_disp(double x, double c, double[::1] amps,
                              double[::1] freqs, double[::1] phases,
                              Py_ssize_t nt) noexcept nogil:
    cdef double d = c
    cdef Py_ssize_t j
    for j in range(nt):
        d += amps[j] * sin(TWO_PI * freqs[j] * x + phases[j])
    return d


def trig_lift_checkpoints(double c, amps, freqs, phases, double x0,
                          checkpoints):
    """Lift values F^k(x0) at the given ascending step counts."""
    cdef double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef double[::1] f = np.ascontiguousarray(freqs, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(phases, dtype=np.float64)
    cdef long long[::1] cps = np.ascontiguousarray(checkpoints, dtype=np.int64)
    cdef Py_ssize_t ncp = cps.shape[0], nt = a.shape[0], i
    out = np.empty(ncp, dtype=np.float64)
    cdef double[::1] o = out
    cdef double x = x0
    cdef long long k = 0
    with nogil:
        for i in range(ncp):
            while k < cps[i]:
                x += _trig_disp(x, c, a, f, p, nt)
                k += 1
            o[i] = x
    return out


def trig_orbit_points(double c, amps, freqs, phases, double x0, Py_ssize_t n):
    """Canonical orbit points x_k mod 1 for k = 0..n-1."""
    cdef double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef double[::1] f = np.ascontiguousarray(freqs, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(phases, dtype=np.float64)
    cdef Py_ssize_t nt = a.shape[0], k
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double x = x0
    with nogil:
        for k in range(n):
            o[k] = x - floor(x)
            x += _trig_disp(x, c, a, f, p, nt)
    return out


def trig_bmv_profile(double c, amps, freqs, phases, double x0, double tau,
                     checkpoints):
    """Running max of |F^k(x0) - x0 - k*tau|, sampled at the checkpoints."""
    cdef double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef double[::1] f = np.ascontiguousarray(freqs, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(phases, dtype=np.float64)
    cdef long long[::1] cps = np.ascontiguousarray(checkpoints, dtype=np.int64)
    cdef Py_ssize_t ncp = cps.shape[0], nt = a.shape[0], i
    out = np.empty(ncp, dtype=np.float64)
    cdef double[::1] o = out
    cdef double x = x0, best = 0.0, dev
    cdef long long k = 0
    with nogil:
        for i in range(ncp):
            while k < cps[i]:
                x += _trig_disp(x, c, a, f, p, nt)
                k += 1
                dev = fabs(x - x0 - k * tau)
                if dev > best:
                    best = dev
            o[i] = best
    return out


cdef inline void _torus_step(double* x, double* y, double v1, double v2,
                             long long[::1] coords, double[::1] amps,
                             double[::1] kxs, double[::1] kys,
                             double[::1] phases, Py_ssize_t nt) noexcept nogil:
    cdef double dx = v1, dy = v2, s
    cdef Py_ssize_t i
    for i in range(nt):
        s = amps[i] * sin(TWO_PI * (kxs[i] * x[0] + kys[i] * y[0]) + phases[i])
        if coords[i] == 0:
            dx += s
        else:
            dy += s
    x[0] += dx
    y[0] += dy


def torus_lift_checkpoints(double v1, double v2, coords, amps, kxs, kys,
                           phases, double x0, double y0, checkpoints):
    cdef long long[::1] cr = np.ascontiguousarray(coords, dtype=np.int64)
    cdef double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef double[::1] gx = np.ascontiguousarray(kxs, dtype=np.float64)
    cdef double[::1] gy = np.ascontiguousarray(kys, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(phases, dtype=np.float64)
    cdef long long[::1] cps = np.ascontiguousarray(checkpoints, dtype=np.int64)
    cdef Py_ssize_t ncp = cps.shape[0], nt = a.shape[0], i
    out = np.empty((ncp, 2), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double x = x0, y = y0
    cdef long long k = 0
    with nogil:
        for i in range(ncp):
            while k < cps[i]:
                _torus_step(&x, &y, v1, v2, cr, a, gx, gy, p, nt)
                k += 1
            o[i, 0] = x
            o[i, 1] = y
    return out


def torus_orbit_points(double v1, double v2, coords, amps, kxs, kys, phases,
                       double x0, double y0, Py_ssize_t n):
    cdef long long[::1] cr = np.ascontiguousarray(coords, dtype=np.int64)
    cdef double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef double[::1] gx = np.ascontiguousarray(kxs, dtype=np.float64)
    cdef double[::1] gy = np.ascontiguousarray(kys, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(phases, dtype=np.float64)
    cdef Py_ssize_t nt = a.shape[0], k
    out = np.empty((n, 2), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double x = x0, y = y0
    with nogil:
        for k in range(n):
            o[k, 0] = x - floor(x)
            o[k, 1] = y - floor(y)
            _torus_step(&x, &y, v1, v2, cr, a, gx, gy, p, nt)
    return out


def torus_bmv_profile(double v1, double v2, coords, amps, kxs, kys, phases,
                      double x0, double y0, double tau1, double tau2,
                      checkpoints):
    cdef long long[::1] cr = np.ascontiguousarray(coords, dtype=np.int64)
    cdef double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef double[::1] gx = np.ascontiguousarray(kxs, dtype=np.float64)
    cdef double[::1] gy = np.ascontiguousarray(kys, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(phases, dtype=np.float64)
    cdef long long[::1] cps = np.ascontiguousarray(checkpoints, dtype=np.int64)
    cdef Py_ssize_t ncp = cps.shape[0], nt = a.shape[0], i
    out = np.empty(ncp, dtype=np.float64)
    cdef double[::1] o = out
    cdef double x = x0, y = y0, best = 0.0, dev, d2
    cdef long long k = 0
    with nogil:
        for i in range(ncp):
            while k < cps[i]:
                _torus_step(&x, &y, v1, v2, cr, a, gx, gy, p, nt)
                k += 1
                dev = fabs(x - x0 - k * tau1)
                d2 = fabs(y - y0 - k * tau2)
                if d2 > dev:
                    dev = d2
                if dev > best:
                    best = dev
            o[i] = best
    return out


def greedy_separated_count(coords, double eps, Py_ssize_t cap):
    """First-fit maximal (n, eps)-separated subset size.

    Bowen distance between rows = max over columns of the circle metric.
    Columns are scanned back-to-front so expanding maps exit early.
    """
    m = np.ascontiguousarray(coords, dtype=np.float64).shape[0]
    order = np.arange(m, dtype=np.int64)
    return len(greedy_separated_indices(coords, eps, order, 0, cap))


def greedy_separated_indices(coords, double eps, order, Py_ssize_t nseed,
                             Py_ssize_t cap):
    """First-fit separated subset as row indices, with a pre-kept seed.

    The first `nseed` entries of `order` are kept unconditionally (the caller
    guarantees they are pairwise separated); the rest are scanned first-fit.
    """
    cdef double[:, ::1] xs = np.ascontiguousarray(coords, dtype=np.float64)
    cdef long long[::1] ordv = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t m = ordv.shape[0], L = xs.shape[1]
    if cap > m:
        cap = m
    if m == 0 or cap <= 0:
        return np.empty(0, dtype=np.int64)
    kept_arr = np.empty(cap, dtype=np.int64)
    cdef long long[::1] kept = kept_arr
    cdef Py_ssize_t nk = nseed if nseed < cap else cap
    cdef Py_ssize_t pos, jj, col
    cdef long long i, j
    cdef double d
    cdef bint ok, sep
    kept_arr[:nk] = np.asarray(ordv[:nk])
    with nogil:
        for pos in range(nseed, m):
            if nk >= cap:
                break
            i = ordv[pos]
            ok = True
            for jj in range(nk):
                j = kept[jj]
                sep = False
                for col in range(L - 1, -1, -1):
                    d = fabs(xs[i, col] - xs[j, col])
                    if d > 0.5:
                        d = 1.0 - d
                    if d > eps:
                        sep = True
                        break
                if not sep:
                    ok = False
                    break
            if ok:
                kept[nk] = i
                nk += 1
    return kept_arr[:nk].copy()
