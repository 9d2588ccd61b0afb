"""Rotation numbers, vectors, elements and rotation sets.

Every estimator reports window partial averages and an oscillation bound
alongside the point estimate, so convergence quality is visible in the
output rather than asserted.  Maps with constant displacement (rigid
rotations and translations) short-circuit to the exact value: the Birkhoff
average of a constant is that constant.

Rational values are detected through continued-fraction convergents with a
denominator cap; a detection is a *candidate* (Poincare's theorem makes it
meaningful only together with a periodic-orbit confirmation, which the
conjugacy tools provide).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from rotlab.errors import DepthError, WeightError
from rotlab.groups import (CirclePoint, SolenoidPoint, TorusPoint,
                           format_rational)
from rotlab.maps import SolenoidLeafMap, TorusLiftMap

RATIONAL_DENOM_CAP = 64
DEGENERATE_DIAMETER = 1e-6


def worker_count() -> int:
    """Worker parallelism cap from ROTLAB_THREADS (default 1 = serial)."""
    try:
        return max(1, int(os.environ.get("ROTLAB_THREADS", "1")))
    except ValueError:
        return 1


def window_schedule(n: int, parts: int = 10) -> list[int]:
    """Ascending checkpoints j*n/parts, deduplicated, ending at n."""
    ws = sorted({max(1, (j * n) // parts) for j in range(1, parts + 1)})
    if ws[-1] != n:
        ws.append(n)
    return ws


def continued_fraction_convergents(x: float, qmax: int):
    """Convergents p/q of x with q <= qmax."""
    a = math.floor(x)
    h0, k0, h1, k1 = 1, 0, a, 1
    yield Fraction(a, 1)
    rem = x - a
    for _ in range(64):
        if rem < 1e-15 or k1 > qmax:
            return
        y = 1.0 / rem
        a = math.floor(y)
        rem = y - a
        h0, k0, h1, k1 = h1, k1, a * h1 + h0, a * k1 + k0
        if k1 > qmax:
            return
        yield Fraction(h1, k1)


def detect_rational(x: float, n: int, qmax: int = RATIONAL_DENOM_CAP,
                    ) -> Optional[tuple[Fraction, dict]]:
    """Best rational candidate p/q, q <= qmax, accepted when |x-p/q| < 2/n."""
    best, dist = None, math.inf
    for conv in continued_fraction_convergents(x, qmax):
        d = abs(x - float(conv))
        if d < dist:
            best, dist = conv, d
    tol = 2.0 / n
    if best is not None and dist < tol:
        return best, {"distance": dist, "tolerance": tol,
                      "denominator_cap": qmax}
    return None


@dataclass(slots=True)
class RotationReport:
    """Estimator output with convergence diagnostics."""

    kind: str                    # circle | torus | solenoid | measure
    estimate: Union[float, tuple]
    iterations: int
    window_steps: list[int] = field(default_factory=list)
    window_estimates: list = field(default_factory=list)
    oscillation: float = 0.0
    error_bound: Optional[float] = None
    exact: Optional[Union[Fraction, tuple]] = None
    rational_detection: Optional[Fraction] = None
    detection_info: Optional[dict] = None
    per_level: Optional[dict] = None
    coherence_defects: Optional[dict] = None
    solenoid_element: Optional[SolenoidPoint] = None
    label: Optional[str] = None
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "estimate": (list(self.estimate)
                         if isinstance(self.estimate, tuple)
                         else self.estimate),
            "iterations": self.iterations,
            "windows": [{"n": int(w), "estimate":
                         list(e) if isinstance(e, tuple) else e}
                        for w, e in zip(self.window_steps,
                                        self.window_estimates)],
            "oscillation": self.oscillation,
            "error_bound": self.error_bound,
            "rational_detection": (format_rational(self.rational_detection)
                                   if self.rational_detection is not None
                                   else None),
        }
        if self.exact is not None and isinstance(self.exact, Fraction):
            d["exact"] = format_rational(self.exact)
        if self.detection_info:
            d["detection_info"] = self.detection_info
        if self.per_level is not None:
            d["per_level"] = {str(b): v for b, v in self.per_level.items()}
        if self.coherence_defects is not None:
            d["coherence_defects"] = {f"{a}|{b}": v for (a, b), v
                                      in self.coherence_defects.items()}
        if self.solenoid_element is not None:
            d["solenoid_element"] = self.solenoid_element.to_dict()
        if self.label is not None:
            d["label"] = self.label
        if self.stats:
            d["stats"] = self.stats
        return d


def _oscillation(window_estimates: Sequence[float], tail: int = 5) -> float:
    vals = window_estimates[-tail:]
    return max(vals) - min(vals)


def _start_value(start) -> float:
    if isinstance(start, CirclePoint):
        return start.value
    return float(start)


def rotation_number_circle(mapmodel, start, n: int) -> RotationReport:
    """Translation-number estimate (F^n(x) - x)/n with window diagnostics.

    For circle homeomorphisms |(F^n(x)-x)/n - rho| <= 1/n, so the reported
    error bound is 1/n plus the observed tail oscillation.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    windows = window_schedule(n)
    cd = mapmodel.constant_displacement
    if cd is not None:
        est = float(cd)
        report = RotationReport(
            kind="circle", estimate=est, iterations=n,
            window_steps=windows, window_estimates=[est] * len(windows),
            oscillation=0.0, error_bound=1.0 / n,
            exact=cd if isinstance(cd, Fraction) else None)
        if isinstance(cd, Fraction) and cd.denominator <= RATIONAL_DENOM_CAP:
            report.rational_detection = cd
            report.detection_info = {"distance": 0.0, "tolerance": 2.0 / n,
                                     "denominator_cap": RATIONAL_DENOM_CAP}
        else:
            det = detect_rational(est, n)
            if det:
                report.rational_detection, report.detection_info = det
        return report

    x0 = _start_value(start)
    lifts = mapmodel.lift_checkpoints(x0, windows)
    ests = [(lift - x0) / w for lift, w in zip(lifts, windows)]
    osc = _oscillation(ests)
    report = RotationReport(
        kind="circle", estimate=ests[-1], iterations=n,
        window_steps=windows, window_estimates=ests,
        oscillation=osc, error_bound=1.0 / n + osc)
    det = detect_rational(ests[-1], n)
    if det:
        report.rational_detection, report.detection_info = det
    return report


def rotation_vector_torus(mapmodel: TorusLiftMap, start, n: int,
                          ) -> RotationReport:
    """Componentwise displacement average; no a-priori 1/n bound exists, so
    only the observed oscillation is reported."""
    if n < 1:
        raise ValueError("n must be >= 1")
    windows = window_schedule(n)
    cd = mapmodel.constant_displacement
    if cd is not None:
        est = (float(cd[0]), float(cd[1]))
        return RotationReport(
            kind="torus", estimate=est, iterations=n,
            window_steps=windows, window_estimates=[est] * len(windows),
            oscillation=0.0)
    xy0 = _xy(start)
    lifts = mapmodel.lift_checkpoints(xy0, windows)
    ests = [((lx - xy0[0]) / w, (ly - xy0[1]) / w)
            for (lx, ly), w in zip(lifts, windows)]
    osc = max(_oscillation([e[0] for e in ests]),
              _oscillation([e[1] for e in ests]))
    return RotationReport(kind="torus", estimate=ests[-1], iterations=n,
                          window_steps=windows, window_estimates=ests,
                          oscillation=osc)


def _xy(start) -> tuple[float, float]:
    if isinstance(start, TorusPoint):
        return (start.x.value, start.y.value)
    return (float(start[0]), float(start[1]))


# ---------------------------------------------------------------------------
# Convex hulls (monotone chain, counterclockwise from the lexicographic
# lowest vertex)
# ---------------------------------------------------------------------------

def convex_hull(points: Sequence[tuple[float, float]]) -> list[tuple]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if not hull:  # all points collinear: keep the two extremes
        hull = [pts[0], pts[-1]]
    return hull


def hull_diameter(vertices: Sequence[tuple[float, float]]) -> float:
    if len(vertices) <= 1:
        return 0.0
    return max(math.dist(a, b) for i, a in enumerate(vertices)
               for b in vertices[i + 1:])


def hull_contains(vertices: Sequence[tuple[float, float]],
                  pt: tuple[float, float], tol: float = 0.0) -> bool:
    """Point membership in a ccw hull, inflated by tol."""
    if len(vertices) == 0:
        return False
    if len(vertices) == 1:
        return math.dist(vertices[0], pt) <= tol
    if len(vertices) == 2:
        a, b = vertices
        ab = (b[0] - a[0], b[1] - a[1])
        ap = (pt[0] - a[0], pt[1] - a[1])
        denom = ab[0] ** 2 + ab[1] ** 2
        t = max(0.0, min(1.0, (ap[0] * ab[0] + ap[1] * ab[1]) / denom))
        closest = (a[0] + t * ab[0], a[1] + t * ab[1])
        return math.dist(closest, pt) <= tol
    m = len(vertices)
    for i in range(m):
        a, b = vertices[i], vertices[(i + 1) % m]
        cross = ((b[0] - a[0]) * (pt[1] - a[1])
                 - (b[1] - a[1]) * (pt[0] - a[0]))
        edge = math.dist(a, b)
        if cross < -tol * max(edge, 1e-30):
            return False
    return True


@dataclass(slots=True)
class RotationSetReport:
    """Displacement-average hulls over a start grid at several horizons."""

    hulls: dict                 # n -> ccw vertex list
    final_n: int
    grid: int
    diameter: float
    degenerate: bool            # single point at resolution 1e-6
    approximation: str = "inner"  # finite-orbit hulls under-approximate

    @property
    def vertices(self) -> list[tuple]:
        return self.hulls[self.final_n]

    def to_dict(self) -> dict:
        return {
            "hulls": {str(n): [list(v) for v in vs]
                      for n, vs in self.hulls.items()},
            "final_n": self.final_n,
            "grid": self.grid,
            "diameter": self.diameter,
            "degenerate": self.degenerate,
            "approximation": self.approximation,
        }


def rotation_set_torus(mapmodel: TorusLiftMap, grid: int, n: int,
                       refinement: Sequence[int] = (),
                       ) -> RotationSetReport:
    """Convex hull of {(F^n(x)-x)/n} over a grid x grid start lattice.

    Hulls are reported at n and at every refinement horizon so convergence
    is visible; the hull is an inner approximation of the limit set.
    """
    if grid < 2 or n < 1:
        raise ValueError("need grid >= 2 and n >= 1")
    horizons = sorted({int(n)} | {int(v) for v in refinement if v >= 1})
    starts = [(i / grid, j / grid) for i in range(grid) for j in range(grid)]
    cd = mapmodel.constant_displacement
    if cd is not None:
        pts = {h: [(float(cd[0]), float(cd[1]))] for h in horizons}
    else:
        def one(start):
            lifts = mapmodel.lift_checkpoints(start, horizons)
            return [((lx - start[0]) / h, (ly - start[1]) / h)
                    for (lx, ly), h in zip(lifts, horizons)]

        threads = worker_count()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                rows = list(pool.map(one, starts))
        else:
            rows = [one(s) for s in starts]
        pts = {h: [row[i] for row in rows]
               for i, h in enumerate(horizons)}
    hulls = {h: convex_hull(pts[h]) for h in horizons}
    diam = hull_diameter(hulls[horizons[-1]])
    return RotationSetReport(hulls=hulls, final_n=horizons[-1], grid=grid,
                             diameter=diam,
                             degenerate=diam < DEGENERATE_DIAMETER)


# ---------------------------------------------------------------------------
# Solenoid rotation elements
# ---------------------------------------------------------------------------

def rotation_element_solenoid(mapmodel: SolenoidLeafMap, start: SolenoidPoint,
                              n: int, levels: Sequence[int] = (),
                              ) -> RotationReport:
    """Leaf displacement average r plus coherent per-level rotation numbers.

    r estimates the leaf coordinate of the rotation element; the returned
    group element is sigma(r) in canonical form.  Per-level numbers rho_b
    come from the induced circle map on R/bZ when it exists (every active
    level divides b), otherwise from the projected orbit itself; either way
    they must satisfy rho_b = rho_b' mod b for b | b', and the observed
    defects are reported.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    windows = window_schedule(n)
    cd = mapmodel.constant_displacement
    if cd is not None:
        r = float(cd)
        ests = [r] * len(windows)
        osc = 0.0
    else:
        t0 = start.leaf
        lifts = mapmodel.lift_checkpoints(start, windows)
        ests = [(lift - t0) / w for lift, w in zip(lifts, windows)]
        r = ests[-1]
        osc = _oscillation(ests)

    m_fact = math.factorial(mapmodel.depth)
    per_level = {}
    method = {}
    for b in levels:
        b = int(b)
        if b < 1 or m_fact % b != 0:
            raise DepthError(f"level {b} does not divide {mapmodel.depth}!")
        if all(b % bp == 0 for bp in mapmodel.levels):
            induced = mapmodel.induced_circle_map(b)
            w0 = start.project(b) / b
            rep = rotation_number_circle(induced, w0, n)
            per_level[b] = (b * rep.estimate) % b
            method[b] = "induced-map"
        else:
            # no autonomous circle map at this level; the projected orbit
            # still has the leaf displacement average, read it mod b
            per_level[b] = r % b
            method[b] = "projected-orbit"

    defects = {}
    bs = sorted(per_level)
    for i, b in enumerate(bs):
        for bp in bs[i + 1:]:
            if bp % b == 0:
                d = abs((per_level[bp] - per_level[b] + b / 2) % b - b / 2)
                defects[(b, bp)] = d

    element = SolenoidPoint.make(r, type(start.fiber).zero(mapmodel.depth))
    report = RotationReport(
        kind="solenoid", estimate=r, iterations=n,
        window_steps=windows, window_estimates=ests, oscillation=osc,
        error_bound=1.0 / n + osc,
        exact=cd if isinstance(cd, Fraction) else None,
        per_level=per_level, coherence_defects=defects,
        solenoid_element=element,
        stats={"level_method": {str(b): m for b, m in method.items()}})
    det = detect_rational(r, n)
    if det:
        report.rational_detection, report.detection_info = det
    return report


# ---------------------------------------------------------------------------
# Punctual rotation sets
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class PunctualReport:
    """Window-by-window displacement averages at a single start point."""

    windows: list[int]
    estimates: list              # floats (circle/solenoid) or 2-vectors
    tail_interval: tuple         # hull of the tail estimates
    width: float

    def to_dict(self) -> dict:
        return {
            "windows": [int(w) for w in self.windows],
            "estimates": [list(e) if isinstance(e, tuple) else e
                          for e in self.estimates],
            "tail_interval": list(self.tail_interval),
            "width": self.width,
        }


def punctual_rotation_set(mapmodel, start, windows: Sequence[int],
                          ) -> PunctualReport:
    """Accumulation data of (F^n(x)-x)/n along a window schedule.

    The tail interval hulls the last half of the estimates; the raw sequence
    is returned for inspection rather than claiming a definitive limit set.
    """
    ws = sorted({int(w) for w in windows})
    if not ws or ws[0] < 1:
        raise ValueError("windows must be positive")
    if isinstance(mapmodel, TorusLiftMap):
        xy0 = _xy(start)
        cd = mapmodel.constant_displacement
        if cd is not None:
            ests = [(float(cd[0]), float(cd[1]))] * len(ws)
        else:
            lifts = mapmodel.lift_checkpoints(xy0, ws)
            ests = [((lx - xy0[0]) / w, (ly - xy0[1]) / w)
                    for (lx, ly), w in zip(lifts, ws)]
        tail = ests[len(ests) // 2:]
        lo = (min(e[0] for e in tail), min(e[1] for e in tail))
        hi = (max(e[0] for e in tail), max(e[1] for e in tail))
        width = max(hi[0] - lo[0], hi[1] - lo[1])
        return PunctualReport(ws, ests, (lo, hi), width)

    if isinstance(mapmodel, SolenoidLeafMap):
        cd = mapmodel.constant_displacement
        if cd is not None:
            ests = [float(cd)] * len(ws)
        else:
            lifts = mapmodel.lift_checkpoints(start, ws)
            ests = [(lift - start.leaf) / w for lift, w in zip(lifts, ws)]
    else:
        cd = mapmodel.constant_displacement
        if cd is not None:
            ests = [float(cd)] * len(ws)
        else:
            x0 = _start_value(start)
            lifts = mapmodel.lift_checkpoints(x0, ws)
            ests = [(lift - x0) / w for lift, w in zip(lifts, ws)]
    tail = ests[len(ests) // 2:]
    return PunctualReport(ws, ests, (min(tail), max(tail)),
                          max(tail) - min(tail))


# ---------------------------------------------------------------------------
# Rotation elements with respect to a measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class HaarMeasure:
    samples: int = 10**4


@dataclass(frozen=True, slots=True)
class EmpiricalOrbit:
    start: object
    n: int


@dataclass(frozen=True, slots=True)
class AtomMeasure:
    atoms: tuple  # ((point, weight), ...)

    def __init__(self, atoms):
        object.__setattr__(self, "atoms", tuple((p, float(w))
                                                for p, w in atoms))
        total = sum(w for _, w in self.atoms)
        if abs(total - 1.0) > 1e-12:
            raise WeightError(f"atom weights sum to {total!r}, not 1")


def _atoms_invariant(mapmodel, atoms, tol=1e-9) -> bool:
    """Does f permute the atoms with matching weights?"""
    pts = [(p, w) for p, w in atoms]
    for p, w in pts:
        img = mapmodel.apply(p)
        matched = False
        for q, w2 in pts:
            if _point_dist(img, q) < tol and abs(w - w2) < 1e-9:
                matched = True
                break
        if not matched:
            return False
    return True


def _point_dist(a, b) -> float:
    if isinstance(a, CirclePoint):
        d = abs(a.value - b.value) % 1.0
        return min(d, 1.0 - d)
    if isinstance(a, TorusPoint):
        return max(_point_dist(a.x, b.x), _point_dist(a.y, b.y))
    if isinstance(a, SolenoidPoint):
        if a.fiber != b.fiber:
            return 1.0
        d = abs(a.leaf - b.leaf) % 1.0
        return min(d, 1.0 - d)
    raise TypeError(type(a).__name__)


def rotation_element_measure(mapmodel, measure,
                             rng: Optional[np.random.Generator] = None,
                             ) -> RotationReport:
    """Displacement integral for a measure given three ways.

    Haar: Monte-Carlo with standard error (a rotation element only for
    translations, otherwise labeled a formal integral since Haar need not be
    invariant).  Empirical orbit: Birkhoff average.  Atoms: exact weighted
    sum, labeled a rotation element only if f verifiably permutes the atoms.
    """
    is_torus = isinstance(mapmodel, TorusLiftMap)

    if isinstance(measure, AtomMeasure):
        invariant = _atoms_invariant(mapmodel, measure.atoms)
        if is_torus:
            acc = np.zeros(2)
            for p, w in measure.atoms:
                acc += w * np.asarray(mapmodel.displacement(p))
            est = tuple(acc)
        else:
            est = sum(w * mapmodel.displacement(p)
                      for p, w in measure.atoms)
        label = "rotation_element" if invariant else "formal_integral"
        report = RotationReport(
            kind="measure", estimate=est, iterations=len(measure.atoms),
            label=label, stats={"method": "atoms",
                                "atoms_invariant": invariant})
        if not is_torus:
            det = detect_rational(est, max(len(measure.atoms) * 100, 1000))
            if det:
                report.rational_detection, report.detection_info = det
        return report

    if isinstance(measure, HaarMeasure):
        if rng is None:
            raise ValueError("Haar integration needs an rng")
        group = _group_of(mapmodel)
        vals = []
        for _ in range(measure.samples):
            z = group.haar(rng)
            vals.append(mapmodel.displacement(z))
        arr = np.asarray(vals, dtype=np.float64)
        est = tuple(arr.mean(axis=0)) if is_torus else float(arr.mean())
        stderr = (arr.std(axis=0, ddof=1) / math.sqrt(len(arr))).tolist() \
            if is_torus else float(arr.std(ddof=1) / math.sqrt(len(arr)))
        invariant = mapmodel.constant_displacement is not None
        return RotationReport(
            kind="measure", estimate=est, iterations=measure.samples,
            label="rotation_element" if invariant else "formal_integral",
            stats={"method": "haar-mc", "stderr": stderr})

    if isinstance(measure, EmpiricalOrbit):
        if isinstance(mapmodel, SolenoidLeafMap):
            rep = rotation_element_solenoid(mapmodel, measure.start,
                                            measure.n)
        elif is_torus:
            rep = rotation_vector_torus(mapmodel, measure.start, measure.n)
        else:
            rep = rotation_number_circle(mapmodel, measure.start, measure.n)
        rep.kind = "measure"
        rep.label = "rotation_element"
        rep.stats["method"] = "empirical-birkhoff"
        return rep

    raise TypeError(f"unknown measure {type(measure).__name__}")


def _group_of(mapmodel):
    from rotlab.groups import CircleGroup, SolenoidGroup, TorusGroup
    if isinstance(mapmodel, TorusLiftMap):
        return TorusGroup()
    if isinstance(mapmodel, SolenoidLeafMap):
        return SolenoidGroup(mapmodel.depth)
    return CircleGroup()
