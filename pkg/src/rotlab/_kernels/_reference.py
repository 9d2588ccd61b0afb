"""Pure-Python kernels: one-for-one fallback twin of the compiled module.

Every function here has the same signature and (up to floating-point
round-off of identically ordered operations) the same output as its
counterpart in `_speedups`.  Keep the two in lockstep.

The circle-map family iterated here is

    F(x) = x + c + sum_i amps[i] * sin(TWO_PI * freqs[i] * x + phases[i])

which covers rigid rotations (no terms), the standard sine family,
multi-frequency lifts, and solenoid leaf displacements (frequency 1/b,
phase -TWO_PI*(x mod b)/b).
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def trig_lift_checkpoints(c, amps, freqs, phases, x0, checkpoints):
    """Lift values F^k(x0) at the given ascending step counts."""
    amps = list(amps)
    freqs = list(freqs)
    phases = list(phases)
    terms = list(zip(amps, freqs, phases))
    sin = math.sin
    out = np.empty(len(checkpoints), dtype=np.float64)
    x = float(x0)
    k = 0
    for i, cp in enumerate(checkpoints):
        while k < cp:
            d = c
            for a, f, p in terms:
                d += a * sin(TWO_PI * f * x + p)
            x += d
            k += 1
        out[i] = x
    return out


def trig_orbit_points(c, amps, freqs, phases, x0, n):
    """Canonical orbit points x_k mod 1 for k = 0..n-1."""
    terms = list(zip(amps, freqs, phases))
    sin = math.sin
    out = np.empty(n, dtype=np.float64)
    x = float(x0)
    for k in range(n):
        out[k] = x - math.floor(x)
        d = c
        for a, f, p in terms:
            d += a * sin(TWO_PI * f * x + p)
        x += d
    return out


def trig_bmv_profile(c, amps, freqs, phases, x0, tau, checkpoints):
    """Running max of |F^k(x0) - x0 - k*tau|, sampled at the checkpoints."""
    terms = list(zip(amps, freqs, phases))
    sin = math.sin
    out = np.empty(len(checkpoints), dtype=np.float64)
    x = float(x0)
    k = 0
    best = 0.0
    for i, cp in enumerate(checkpoints):
        while k < cp:
            d = c
            for a, f, p in terms:
                d += a * sin(TWO_PI * f * x + p)
            x += d
            k += 1
            dev = abs(x - x0 - k * tau)
            if dev > best:
                best = dev
        out[i] = best
    return out


def _torus_step(x, y, v1, v2, coords, amps, kxs, kys, phases):
    sin = math.sin
    dx, dy = v1, v2
    for i in range(len(amps)):
        s = amps[i] * sin(TWO_PI * (kxs[i] * x + kys[i] * y) + phases[i])
        if coords[i] == 0:
            dx += s
        else:
            dy += s
    return x + dx, y + dy


def torus_lift_checkpoints(v1, v2, coords, amps, kxs, kys, phases,
                           x0, y0, checkpoints):
    out = np.empty((len(checkpoints), 2), dtype=np.float64)
    x, y = float(x0), float(y0)
    k = 0
    for i, cp in enumerate(checkpoints):
        while k < cp:
            x, y = _torus_step(x, y, v1, v2, coords, amps, kxs, kys, phases)
            k += 1
        out[i, 0] = x
        out[i, 1] = y
    return out


def torus_orbit_points(v1, v2, coords, amps, kxs, kys, phases, x0, y0, n):
    out = np.empty((n, 2), dtype=np.float64)
    x, y = float(x0), float(y0)
    for k in range(n):
        out[k, 0] = x - math.floor(x)
        out[k, 1] = y - math.floor(y)
        x, y = _torus_step(x, y, v1, v2, coords, amps, kxs, kys, phases)
    return out


def torus_bmv_profile(v1, v2, coords, amps, kxs, kys, phases,
                      x0, y0, tau1, tau2, checkpoints):
    out = np.empty(len(checkpoints), dtype=np.float64)
    x, y = float(x0), float(y0)
    k = 0
    best = 0.0
    for i, cp in enumerate(checkpoints):
        while k < cp:
            x, y = _torus_step(x, y, v1, v2, coords, amps, kxs, kys, phases)
            k += 1
            dev = max(abs(x - x0 - k * tau1), abs(y - y0 - k * tau2))
            if dev > best:
                best = dev
        out[i] = best
    return out


def greedy_separated_count(coords, eps, cap):
    """First-fit maximal (n, eps)-separated subset size.

    `coords` is an (m, L) array of circle coordinates in [0, 1); the Bowen
    distance between rows is the max over columns of the circle metric.
    Rows are scanned in order; a row is kept when it is > eps away from every
    kept row.  Stops early once `cap` rows are kept.
    """
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    m = coords.shape[0]
    order = np.arange(m, dtype=np.int64)
    return len(greedy_separated_indices(coords, eps, order, 0, cap))


def greedy_separated_indices(coords, eps, order, nseed, cap):
    """First-fit separated subset as row indices, with a pre-kept seed.

    The first `nseed` entries of `order` are kept unconditionally (the caller
    guarantees they are pairwise separated, e.g. a kept set from a shorter
    orbit horizon); the remaining entries are scanned first-fit.  Returns the
    kept indices in kept order.
    """
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    order = np.asarray(order, dtype=np.int64)
    m = order.shape[0]
    cap = min(cap, m)
    if m == 0 or cap <= 0:
        return np.empty(0, dtype=np.int64)
    kept = np.empty(cap, dtype=np.int64)
    nk = min(nseed, cap)
    kept[:nk] = order[:nk]
    for i in order[nseed:]:
        if nk >= cap:
            break
        if nk:
            d = np.abs(coords[kept[:nk]] - coords[i])
            np.minimum(d, 1.0 - d, out=d)
            if (d.max(axis=1) <= eps).any():
                continue
        kept[nk] = i
        nk += 1
    return kept[:nk].copy()
