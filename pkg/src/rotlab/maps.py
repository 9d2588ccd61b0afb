"""Homeomorphism models given by lifts, with orbit iteration.

Circle maps are given by a degree-one lift F: R -> R (rigid rotation, sine
family, general trigonometric family, or a parsed expression); torus maps by
F(x) = x + v + P(x) with P given by Z^2-periodic trig terms or a pair of
parsed expressions; solenoid maps by a leafwise displacement built from
finitely many fiber levels.  Constructors validate deck equivariance and
(where required) strict monotonicity on a grid.

All models are immutable after construction and their operations are pure,
so instances can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from rotlab import _kernels as kernels
from rotlab.errors import (DepthError, EquivarianceError, InverseError,
                           MapSpecError, MonotonicityError)
from rotlab.groups import (DEFAULT_DEPTH, CirclePoint, ProfiniteInt,
                           SolenoidPoint, TorusPoint, parse_rational)
from rotlab.liftparse import compile_tree, parse_lift, tree_to_source

TWO_PI = 2.0 * math.pi

_GRID = 1024          # sample points for structural lift checks
_CHECK_TOL = 1e-9     # tolerance for equivariance / projection identities
_BISECT_TOL = 1e-12
_BISECT_MAX = 200


def _check_equivariance(lift: Callable[[float], float], label: str):
    for i in range(_GRID):
        x = i / _GRID
        if abs(lift(x + 1.0) - lift(x) - 1.0) > _CHECK_TOL:
            raise EquivarianceError(
                f"{label}: F(x+1) != F(x)+1 at x={x} "
                f"(defect {lift(x + 1.0) - lift(x) - 1.0:.3e})")


def _check_monotone(lift: Callable[[float], float], label: str):
    prev = lift(0.0)
    for i in range(1, _GRID + 1):
        cur = lift(i / _GRID)
        if cur <= prev:
            raise MonotonicityError(
                f"{label}: lift not strictly increasing near x={i / _GRID}")
        prev = cur


def _generic_lift_checkpoints(f, x0, cps):
    out = np.empty(len(cps), dtype=np.float64)
    x = float(x0)
    k = 0
    for i, cp in enumerate(cps):
        while k < cp:
            x = f(x)
            k += 1
        out[i] = x
    return out


def _generic_orbit_points(f, x0, n):
    out = np.empty(n, dtype=np.float64)
    x = float(x0)
    for k in range(n):
        out[k] = x - math.floor(x)
        x = f(x)
    return out


def _generic_bmv_profile(f, x0, tau, cps):
    out = np.empty(len(cps), dtype=np.float64)
    x = float(x0)
    k = 0
    best = 0.0
    for i, cp in enumerate(cps):
        while k < cp:
            x = f(x)
            k += 1
            dev = abs(x - x0 - k * tau)
            if dev > best:
                best = dev
        out[i] = best
    return out


def _bisect_inverse(f, y, bound, label="lift"):
    """Solve f(x) = y for a strictly increasing degree-one lift."""
    lo, hi = y - bound, y + bound
    flo, fhi = f(lo) - y, f(hi) - y
    if flo > 0 or fhi < 0:
        raise InverseError(f"{label}: no bracket for inverse at y={y}")
    for _ in range(_BISECT_MAX):
        mid = 0.5 * (lo + hi)
        if f(mid) - y <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < _BISECT_TOL:
            return 0.5 * (lo + hi)
    raise InverseError(f"{label}: bisection did not converge at y={y}")


def _as_steps(steps) -> np.ndarray:
    arr = np.asarray(steps, dtype=np.int64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if len(arr) and (arr[0] < 0 or np.any(np.diff(arr) < 0)):
        raise ValueError("checkpoints must be ascending and non-negative")
    return arr


# ---------------------------------------------------------------------------
# Circle maps
# ---------------------------------------------------------------------------

class CircleLiftMap:
    """Base for circle homeomorphisms given by a degree-one increasing lift.

    Subclasses set `_kernel_args` (c, amps, freqs, phases) when the lift is in
    the trigonometric family handled by the compiled kernels, otherwise leave
    it None and provide a scalar `lift`.
    """

    group = "circle"
    constant_displacement: Optional[Union[float, Fraction]] = None
    _kernel_args = None

    def lift(self, x: float) -> float:
        raise NotImplementedError

    def displacement(self, z) -> float:
        x = z.value if isinstance(z, CirclePoint) else float(z)
        return self.lift(x) - x

    def apply(self, z: CirclePoint) -> CirclePoint:
        return CirclePoint(self.lift(z.value) % 1.0)

    def lift_checkpoints(self, x0: float, steps) -> np.ndarray:
        cps = _as_steps(steps)
        ka = self._kernel_args
        if ka is not None:
            return kernels.trig_lift_checkpoints(ka[0], ka[1], ka[2], ka[3],
                                                 x0, cps)
        return _generic_lift_checkpoints(self.lift, x0, cps)

    def orbit_points(self, x0: float, n: int) -> np.ndarray:
        ka = self._kernel_args
        if ka is not None:
            return kernels.trig_orbit_points(ka[0], ka[1], ka[2], ka[3],
                                             x0, n)
        return _generic_orbit_points(self.lift, x0, n)

    def bmv_profile(self, x0: float, tau: float, steps) -> np.ndarray:
        cps = _as_steps(steps)
        ka = self._kernel_args
        if ka is not None:
            return kernels.trig_bmv_profile(ka[0], ka[1], ka[2], ka[3],
                                            x0, tau, cps)
        return _generic_bmv_profile(self.lift, x0, tau, cps)

    def step_array(self, x: np.ndarray) -> np.ndarray:
        """Vectorized canonical step, used for many-start orbit sweeps."""
        out = np.empty_like(x)
        for i, v in enumerate(x):
            out[i] = self.lift(v)
        return out % 1.0

    def inverse_lift(self, y: float) -> float:
        return _bisect_inverse(self.lift, y, self._disp_bound + 1.0,
                               type(self).__name__)

    def inverse_apply(self, z: CirclePoint) -> CirclePoint:
        return CirclePoint(self.inverse_lift(z.value) % 1.0)


class TrigCircleMap(CircleLiftMap):
    """Lift x + c + sum_i a_i sin(2 pi f_i x + phase_i) with integer f_i."""

    def __init__(self, c: float, terms: Sequence[tuple] = ()):
        self.c = float(c)
        self.terms = tuple((float(a), float(f), float(p)) for a, f, p in terms)
        amps = np.array([t[0] for t in self.terms], dtype=np.float64)
        freqs = np.array([t[1] for t in self.terms], dtype=np.float64)
        phases = np.array([t[2] for t in self.terms], dtype=np.float64)
        self._kernel_args = (self.c, amps, freqs, phases)
        self._disp_bound = abs(self.c) + float(np.sum(np.abs(amps)))
        if not self.terms:
            self.constant_displacement = self.c
        _check_equivariance(self.lift, type(self).__name__)
        if self._monotone_required():
            _check_monotone(self.lift, type(self).__name__)

    def _monotone_required(self) -> bool:
        return True

    def lift(self, x: float) -> float:
        d = self.c
        for a, f, p in self.terms:
            d += a * math.sin(TWO_PI * f * x + p)
        return x + d

    def step_array(self, x: np.ndarray) -> np.ndarray:
        d = np.full_like(x, self.c)
        for a, f, p in self.terms:
            d += a * np.sin(TWO_PI * f * x + p)
        return (x + d) % 1.0

    def to_dict(self) -> dict:
        return {"type": "trig", "c": self.c,
                "terms": [list(t) for t in self.terms]}


class RigidRotation(TrigCircleMap):
    """Translation by alpha on the circle; exact when alpha is rational."""

    def __init__(self, alpha: Union[float, Fraction, int]):
        if isinstance(alpha, (Fraction, int)):
            self.alpha = Fraction(alpha)
            c = float(self.alpha)
        else:
            self.alpha = float(alpha)
            c = self.alpha
        super().__init__(c)
        self.constant_displacement = self.alpha

    def lift_n_exact(self, x: Fraction, n: int) -> Optional[Fraction]:
        if isinstance(self.alpha, Fraction):
            return x + n * self.alpha
        return None

    def to_dict(self) -> dict:
        a = self.alpha
        return {"type": "rigid",
                "alpha": f"{a.numerator}/{a.denominator}"
                if isinstance(a, Fraction) else a}


class ArnoldFamily(TrigCircleMap):
    """The standard sine family x + c + a*sin(2 pi x).

    Requires |2 pi a| < 1 so the lift stays strictly increasing.
    """

    def __init__(self, c: float, a: float):
        if abs(TWO_PI * a) >= 1.0:
            raise MonotonicityError(
                f"ArnoldFamily needs |2*pi*a| < 1 for a homeomorphism, "
                f"got a={a}")
        self.a = float(a)
        super().__init__(c, [(a, 1.0, 0.0)] if a != 0.0 else [])
        if a == 0.0:
            self.constant_displacement = float(c)

    def to_dict(self) -> dict:
        return {"type": "arnold", "c": self.c, "a": self.a}


class ParsedLift(CircleLiftMap):
    """Circle map whose lift is a parsed expression in x."""

    def __init__(self, source: str):
        self.source = source
        self.tree = parse_lift(source)
        self._f = compile_tree(self.tree)
        self._f_vec = compile_tree_vectorized(self.tree)
        _check_equivariance(self._f, f"parsed lift {source!r}")
        _check_monotone(self._f, f"parsed lift {source!r}")
        self._disp_bound = max(abs(self._f(i / _GRID) - i / _GRID)
                               for i in range(_GRID)) + 1e-6

    def lift(self, x: float) -> float:
        return self._f(x)

    def step_array(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._f_vec(x)) % 1.0

    def to_dict(self) -> dict:
        return {"type": "parsed", "lift": self.source}


def compile_tree_vectorized(tree):
    """Numpy-backed compilation of a parse tree, for array evaluation."""
    src = tree_to_source(tree)
    return eval(f"lambda x, y=None: {src}",
                {"sin": np.sin, "cos": np.cos, "__builtins__": {}})


class DoublingMap:
    """The non-invertible endomorphism x -> 2x mod 1 (lift 2x).

    Not a homeomorphism; accepted only by the entropy estimator, never by the
    rotation machinery.
    """

    group = "circle"
    constant_displacement = None

    def lift(self, x: float) -> float:
        return 2.0 * x

    def apply(self, z: CirclePoint) -> CirclePoint:
        return CirclePoint((2.0 * z.value) % 1.0)

    def orbit_points(self, x0: float, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.float64)
        x = float(x0)
        for k in range(n):
            out[k] = x
            x = (2.0 * x) % 1.0
        return out

    def step_array(self, x: np.ndarray) -> np.ndarray:
        return (2.0 * x) % 1.0

    def to_dict(self) -> dict:
        return {"type": "doubling"}


# ---------------------------------------------------------------------------
# Torus maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class TrigTerm2:
    """One perturbation term a*sin(2 pi (kx*x + ky*y) + phase) added to one
    coordinate of the displacement; kx, ky integers keep it Z^2-periodic."""

    coord: int
    a: float
    kx: int
    ky: int
    phase: float = 0.0

    def to_dict(self) -> dict:
        return {"coord": self.coord, "a": self.a, "kx": self.kx,
                "ky": self.ky, "phase": self.phase}


class TorusLiftMap:
    """Torus map from the lift F(x) = x + v + P(x), P doubly periodic.

    P is either a list of TrigTerm2 or a pair of parsed expressions in x, y.
    Equivariance under integer shifts is grid-checked; injectivity is the
    caller's responsibility (see `jacobian_spot_check`).
    """

    group = "torus"

    def __init__(self, v: Sequence[float],
                 perturbation: Union[Sequence[TrigTerm2], Sequence[str]] = ()):
        self.v = (float(v[0]), float(v[1]))
        self._parsed = None
        if perturbation and isinstance(perturbation[0], str):
            if len(perturbation) != 2:
                raise MapSpecError("parsed torus perturbation needs exactly "
                                   "two expressions (one per coordinate)")
            trees = [parse_lift(s, variables=("x", "y")) for s in perturbation]
            self._parsed = tuple(compile_tree(t, ("x", "y")) for t in trees)
            self._parsed_vec = tuple(compile_tree_vectorized(t) for t in trees)
            self._sources = tuple(perturbation)
            self.terms = ()
        else:
            self.terms = tuple(perturbation)
            for t in self.terms:
                if t.kx != int(t.kx) or t.ky != int(t.ky):
                    raise EquivarianceError(
                        "torus trig terms need integer frequencies")
        self._kargs = self._build_kernel_args()
        self._check_equivariance()
        self.constant_displacement = (
            self.v if not self.terms and self._parsed is None else None)

    def _build_kernel_args(self):
        if self._parsed is not None:
            return None
        coords = np.array([t.coord for t in self.terms], dtype=np.int64)
        amps = np.array([t.a for t in self.terms], dtype=np.float64)
        kxs = np.array([float(t.kx) for t in self.terms], dtype=np.float64)
        kys = np.array([float(t.ky) for t in self.terms], dtype=np.float64)
        phases = np.array([t.phase for t in self.terms], dtype=np.float64)
        return (self.v[0], self.v[1], coords, amps, kxs, kys, phases)

    def perturbation_at(self, x: float, y: float) -> tuple[float, float]:
        if self._parsed is not None:
            return (self._parsed[0](x, y), self._parsed[1](x, y))
        px = py = 0.0
        for t in self.terms:
            s = t.a * math.sin(TWO_PI * (t.kx * x + t.ky * y) + t.phase)
            if t.coord == 0:
                px += s
            else:
                py += s
        return px, py

    def lift(self, xy: tuple[float, float]) -> tuple[float, float]:
        x, y = xy
        px, py = self.perturbation_at(x, y)
        return (x + self.v[0] + px, y + self.v[1] + py)

    def displacement(self, z) -> tuple[float, float]:
        if isinstance(z, TorusPoint):
            z = (z.x.value, z.y.value)
        X, Y = self.lift(z)
        return (X - z[0], Y - z[1])

    def apply(self, z: TorusPoint) -> TorusPoint:
        X, Y = self.lift((z.x.value, z.y.value))
        return TorusPoint(CirclePoint(X % 1.0), CirclePoint(Y % 1.0))

    def lift_checkpoints(self, xy0, steps) -> np.ndarray:
        cps = _as_steps(steps)
        if self._kargs is not None:
            v1, v2, coords, amps, kxs, kys, phases = self._kargs
            return kernels.torus_lift_checkpoints(
                v1, v2, coords, amps, kxs, kys, phases, xy0[0], xy0[1], cps)
        out = np.empty((len(cps), 2), dtype=np.float64)
        x, y = float(xy0[0]), float(xy0[1])
        k = 0
        for i, cp in enumerate(cps):
            while k < cp:
                x, y = self.lift((x, y))
                k += 1
            out[i] = (x, y)
        return out

    def orbit_points(self, xy0, n: int) -> np.ndarray:
        if self._kargs is not None:
            v1, v2, coords, amps, kxs, kys, phases = self._kargs
            return kernels.torus_orbit_points(
                v1, v2, coords, amps, kxs, kys, phases, xy0[0], xy0[1], n)
        out = np.empty((n, 2), dtype=np.float64)
        x, y = float(xy0[0]), float(xy0[1])
        for k in range(n):
            out[k] = (x % 1.0, y % 1.0)
            x, y = self.lift((x, y))
        return out

    def bmv_profile(self, xy0, tau, steps) -> np.ndarray:
        cps = _as_steps(steps)
        if self._kargs is not None:
            v1, v2, coords, amps, kxs, kys, phases = self._kargs
            return kernels.torus_bmv_profile(
                v1, v2, coords, amps, kxs, kys, phases,
                xy0[0], xy0[1], tau[0], tau[1], cps)
        out = np.empty(len(cps), dtype=np.float64)
        x, y = float(xy0[0]), float(xy0[1])
        k = 0
        best = 0.0
        for i, cp in enumerate(cps):
            while k < cp:
                x, y = self.lift((x, y))
                k += 1
                dev = max(abs(x - xy0[0] - k * tau[0]),
                          abs(y - xy0[1] - k * tau[1]))
                best = max(best, dev)
            out[i] = best
        return out

    def step_array(self, xy: np.ndarray) -> np.ndarray:
        x, y = xy[:, 0], xy[:, 1]
        if self._parsed is not None:
            px = self._parsed_vec[0](x, y)
            py = self._parsed_vec[1](x, y)
        else:
            px = np.zeros_like(x)
            py = np.zeros_like(y)
            for t in self.terms:
                s = t.a * np.sin(TWO_PI * (t.kx * x + t.ky * y) + t.phase)
                if t.coord == 0:
                    px = px + s
                else:
                    py = py + s
        return np.stack([(x + self.v[0] + px) % 1.0,
                         (y + self.v[1] + py) % 1.0], axis=1)

    def _check_equivariance(self):
        side = 32
        for i in range(side):
            for j in range(side):
                x, y = i / side, j / side
                fx, fy = self.lift((x, y))
                for mx, my in ((1.0, 0.0), (0.0, 1.0)):
                    gx, gy = self.lift((x + mx, y + my))
                    if (abs(gx - fx - mx) > _CHECK_TOL
                            or abs(gy - fy - my) > _CHECK_TOL):
                        raise EquivarianceError(
                            f"torus lift not Z^2-equivariant at ({x}, {y})")

    def jacobian_spot_check(self, side: int = 32, h: float = 1e-6) -> float:
        """Minimum Jacobian determinant of the lift over a grid.

        A non-positive value means the lift is not locally injective there;
        the constructor does not enforce this (documented precondition).
        """
        worst = math.inf
        for i in range(side):
            for j in range(side):
                x, y = i / side, j / side
                fx0, fy0 = self.lift((x, y))
                fxx, fyx = self.lift((x + h, y))
                fxy, fyy = self.lift((x, y + h))
                a = (fxx - fx0) / h
                c = (fyx - fy0) / h
                b = (fxy - fx0) / h
                d = (fyy - fy0) / h
                worst = min(worst, a * d - b * c)
        return worst

    def to_dict(self) -> dict:
        d = {"type": "torus", "v": list(self.v)}
        if self._parsed is not None:
            d["perturbation"] = list(self._sources)
        else:
            d["perturbation"] = [t.to_dict() for t in self.terms]
        return d


# ---------------------------------------------------------------------------
# Solenoid leaf maps
# ---------------------------------------------------------------------------

class SolenoidLeafMap:
    """Leafwise map id + phi on the solenoid, fixing the fiber.

    phi(t, x) = c + sum_{b in levels} a_b * sin(2 pi (t + (x mod b)) / b),
    a function of the level projections only, hence invariant under the deck
    action; the map descends from the covering space R x fiber to the
    solenoid.  Every level b must divide depth!.
    """

    group = "solenoid"

    def __init__(self, depth: int = DEFAULT_DEPTH, c: float = 0.0,
                 levels: Optional[dict[int, float]] = None):
        self.depth = depth
        self.c = float(c)
        self.levels = {int(b): float(a) for b, a in (levels or {}).items()}
        m = math.factorial(depth)
        for b in self.levels:
            if b < 1 or m % b != 0:
                raise DepthError(f"level {b} does not divide {depth}!")
        slope = sum(abs(a) * TWO_PI / b for b, a in self.levels.items())
        if slope >= 1.0:
            raise MonotonicityError(
                f"solenoid displacement slope bound {slope:.3f} >= 1; "
                "the leafwise lift would not be injective")
        self._disp_bound = abs(self.c) + sum(abs(a)
                                             for a in self.levels.values())
        self.constant_displacement = self.c if not self.levels else None
        self._bs = sorted(self.levels)
        self._check_deck_equivariance()

    def _check_deck_equivariance(self):
        rng = np.random.default_rng(1234)
        m = math.factorial(self.depth)
        for _ in range(64):
            t = float(rng.uniform(-2, 2))
            r = int(rng.integers(0, m))
            fiber = ProfiniteInt(self.depth, r)
            a = self.phi(t, fiber)
            b = self.phi(t + 1.0, fiber.shift(-1))
            if abs(a - b) > _CHECK_TOL:
                raise EquivarianceError(
                    f"solenoid displacement not deck-equivariant "
                    f"(defect {a - b:.3e})")

    def phi(self, t: float, fiber: ProfiniteInt) -> float:
        d = self.c
        for b in self._bs:
            d += self.levels[b] * math.sin(TWO_PI * (t + fiber.project(b)) / b)
        return d

    def displacement(self, p: SolenoidPoint) -> float:
        return self.phi(p.leaf, p.fiber)

    def apply(self, p: SolenoidPoint) -> SolenoidPoint:
        return SolenoidPoint.make(p.leaf + self.phi(p.leaf, p.fiber), p.fiber)

    def _trig_args(self, fiber: ProfiniteInt):
        amps = np.array([self.levels[b] for b in self._bs], dtype=np.float64)
        freqs = np.array([1.0 / b for b in self._bs], dtype=np.float64)
        phases = np.array([TWO_PI * fiber.project(b) / b for b in self._bs],
                          dtype=np.float64)
        return amps, freqs, phases

    def lift_checkpoints(self, p: SolenoidPoint, steps) -> np.ndarray:
        """Leaf coordinates of F^k on the covering space (fiber is fixed)."""
        cps = _as_steps(steps)
        amps, freqs, phases = self._trig_args(p.fiber)
        return kernels.trig_lift_checkpoints(self.c, amps, freqs, phases,
                                             p.leaf, cps)

    def bmv_profile(self, p: SolenoidPoint, tau: float, steps) -> np.ndarray:
        cps = _as_steps(steps)
        amps, freqs, phases = self._trig_args(p.fiber)
        return kernels.trig_bmv_profile(self.c, amps, freqs, phases,
                                        p.leaf, tau, cps)

    def orbit(self, p: SolenoidPoint, n: int) -> list[SolenoidPoint]:
        """Canonical orbit points (modest n; estimators use checkpoints)."""
        lifts = self.lift_checkpoints(p, np.arange(n, dtype=np.int64))
        return [SolenoidPoint.make(float(t), p.fiber) for t in lifts]

    def inverse_leaf(self, t: float, fiber: ProfiniteInt) -> float:
        return _bisect_inverse(lambda u: u + self.phi(u, fiber), t,
                               self._disp_bound + 1.0, "solenoid leaf")

    def inverse_apply(self, p: SolenoidPoint) -> SolenoidPoint:
        return SolenoidPoint.make(self.inverse_leaf(p.leaf, p.fiber), p.fiber)

    def induced_circle_map(self, b: int) -> TrigCircleMap:
        """The autonomous circle map induced on R/bZ, in w = u/b coordinates.

        Exists when every active level divides b (then the level-b projection
        of an orbit is itself an orbit of this map). Rotation numbers on the
        standard circle scale by b to be read on R/bZ.
        """
        m = math.factorial(self.depth)
        if b < 1 or m % b != 0:
            raise DepthError(f"level {b} does not divide {self.depth}!")
        for bp in self._bs:
            if b % bp != 0:
                raise DepthError(
                    f"projection level {b} is not refined by active level "
                    f"{bp}; the induced map is not autonomous")
        terms = [(self.levels[bp] / b, float(b // bp), 0.0)
                 for bp in self._bs]
        return TrigCircleMap(self.c / b, terms)

    def to_dict(self) -> dict:
        return {"type": "solenoid", "depth": self.depth, "c": self.c,
                "levels": {str(b): a for b, a in self.levels.items()}}


# ---------------------------------------------------------------------------
# Generic translations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Translation:
    """Translation R_alpha on any of the supported groups."""

    group: object  # a group descriptor from rotlab.groups
    alpha: object  # an element of that group

    def apply(self, z):
        return z + self.alpha

    def orbit(self, z, n: int) -> list:
        out = []
        cur = z
        for _ in range(n):
            out.append(cur)
            cur = cur + self.alpha
        return out


# ---------------------------------------------------------------------------
# Orbit traces
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class OrbitTrace:
    """Orbit in canonical coordinates plus covering-space displacement data."""

    points: list
    step_displacements: np.ndarray   # (n,) real or (n, 2) for the torus
    cumulative: Union[float, tuple]  # F^n(lift) - lift

    def rows(self):
        """(step, *coords, *cumulative displacement) rows for CSV dumps."""
        cum = np.cumsum(np.atleast_2d(self.step_displacements.T).T, axis=0) \
            if len(self.step_displacements) else np.zeros((0, 1))
        for k, p in enumerate(self.points):
            coords = _point_coords(p)
            if k == 0:
                disp = (0.0,) * (cum.shape[1] if cum.ndim > 1 else 1)
            else:
                row = cum[k - 1]
                disp = tuple(np.atleast_1d(row))
            yield (k, *coords, *disp)


def _point_coords(p) -> tuple:
    if isinstance(p, CirclePoint):
        return (p.value,)
    if isinstance(p, TorusPoint):
        return (p.x.value, p.y.value)
    if isinstance(p, SolenoidPoint):
        return (p.leaf, p.fiber.residue)
    return (p,)


def iterate(mapmodel, start, n: int) -> OrbitTrace:
    """Orbit of `start` under n applications, with lift displacements."""
    if n < 0:
        raise ValueError("n must be >= 0")
    points = [start]
    steps = []
    cur = start
    for _ in range(n):
        d = mapmodel.displacement(cur)
        nxt = mapmodel.apply(cur)
        points.append(nxt)
        steps.append(d)
        cur = nxt
    if isinstance(mapmodel, TorusLiftMap):
        arr = np.array(steps, dtype=np.float64) if steps \
            else np.zeros((0, 2))
        if n == 0:
            cum = (0.0, 0.0)
        else:
            lifts = mapmodel.lift_checkpoints(_start_lift(start), [n])[0]
            s0 = _start_lift(start)
            cum = (lifts[0] - s0[0], lifts[1] - s0[1])
    else:
        arr = np.array(steps, dtype=np.float64)
        if n == 0:
            cum = 0.0
        elif isinstance(mapmodel, SolenoidLeafMap):
            cum = float(mapmodel.lift_checkpoints(start, [n])[0] - start.leaf)
        else:
            x0 = _start_lift(start)
            cum = float(mapmodel.lift_checkpoints(x0, [n])[0] - x0)
    return OrbitTrace(points, arr, cum)


def _start_lift(p):
    if isinstance(p, CirclePoint):
        return p.value
    if isinstance(p, TorusPoint):
        return (p.x.value, p.y.value)
    if isinstance(p, (tuple, list)):
        return tuple(float(v) for v in p)
    return float(p)


def displacement(mapmodel, point):
    """Lift displacement F(z) - z at a point (representative independent)."""
    return mapmodel.displacement(point)


# ---------------------------------------------------------------------------
# JSON map specifications
# ---------------------------------------------------------------------------

def map_from_dict(spec: dict):
    """Build a map model from its JSON specification."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise MapSpecError("map spec must be an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "rigid":
            alpha = spec["alpha"]
            if isinstance(alpha, str):
                alpha = parse_rational(alpha)
            return RigidRotation(alpha)
        if kind == "arnold":
            return ArnoldFamily(float(spec["c"]), float(spec["a"]))
        if kind == "trig":
            return TrigCircleMap(float(spec["c"]),
                                 [tuple(t) for t in spec.get("terms", [])])
        if kind == "parsed":
            return ParsedLift(spec["lift"])
        if kind == "solenoid":
            levels = {int(b): float(a)
                      for b, a in spec.get("levels", {}).items()}
            return SolenoidLeafMap(int(spec.get("depth", DEFAULT_DEPTH)),
                                   float(spec.get("c", 0.0)), levels)
        if kind == "torus":
            pert = spec.get("perturbation", [])
            if pert and isinstance(pert[0], dict):
                pert = [TrigTerm2(int(t["coord"]), float(t["a"]),
                                  int(t["kx"]), int(t["ky"]),
                                  float(t.get("phase", 0.0))) for t in pert]
            return TorusLiftMap(spec["v"], pert)
        if kind == "doubling":
            return DoublingMap()
    except KeyError as exc:
        raise MapSpecError(f"map spec for {kind!r} missing field {exc}") from exc
    raise MapSpecError(f"unknown map type {kind!r}")
