"""Suspension of a homeomorphism: flow, characters, and explicit 1-cocycles.

The suspension of a base map f is represented in product coordinates
(base point z, fiber time s) with s in [0, 1); flowing for time t applies
f exactly m = floor(t + s) times and leaves fiber time t + s - m.  This uses
the convention that makes the flow continuous and time-1 return to the base.

Each character of the suspension is a pair (base character, integer n) acting
as chi(z, s) = chi_base(z) * exp(2*pi*i*n*s).  The associated real 1-cocycle
has the closed form

    C(t, (z, s)) = q * (F^m(lift z) - lift z) + n * t,

where q is the frequency of the base character applied to the covering-space
displacement (integer for the circle, a pair for the torus, a rational
applied to the leaf displacement for the solenoid).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from rotlab.errors import InverseError
from rotlab.groups import (CircleChar, CirclePoint, SolenoidChar,
                           SolenoidPoint, TorusChar, TorusPoint, UnitComplex,
                           angle_distance)
from rotlab.maps import CircleLiftMap, SolenoidLeafMap, TorusLiftMap


@dataclass(frozen=True, slots=True)
class SuspensionPoint:
    """Point (base, fiber time) of the suspension, fiber time in [0, 1)."""

    base: object
    s: float
    s_exact: Optional[Fraction] = None

    def __post_init__(self):
        if not 0.0 <= self.s < 1.0:
            raise ValueError(f"fiber time {self.s} outside [0, 1)")

    @classmethod
    def make(cls, base, s: Union[float, Fraction, int]) -> "SuspensionPoint":
        if isinstance(s, (Fraction, int)):
            q = Fraction(s)
            if not 0 <= q < 1:
                raise ValueError(f"fiber time {s} outside [0, 1)")
            return cls(base, float(q), q)
        return cls(base, float(s))

    def to_dict(self) -> dict:
        base = self.base
        return {"base": base.to_dict(), "s": self.s}


@dataclass(frozen=True, slots=True)
class SuspensionChar:
    """Character (base character, integer frequency in the flow direction)."""

    base: object
    n: int

    def is_trivial(self) -> bool:
        return self.n == 0 and self.base.is_trivial()


def _base_lift(base):
    if isinstance(base, CirclePoint):
        return base.value
    if isinstance(base, TorusPoint):
        return (base.x.value, base.y.value)
    if isinstance(base, SolenoidPoint):
        return base.leaf
    raise TypeError(f"unsupported base point {type(base).__name__}")


def _advance_base(mapmodel, base, m: int):
    """Apply f^m to a base point; returns (new point, lift displacement).

    Negative m walks the inverse by monotone bisection (circle and solenoid
    only; the torus has no 1-D lift to bisect).
    """
    if m == 0:
        if isinstance(mapmodel, TorusLiftMap):
            return base, (0.0, 0.0)
        return base, 0.0
    if isinstance(mapmodel, SolenoidLeafMap):
        if m > 0:
            t = float(mapmodel.lift_checkpoints(base, [m])[0])
            return SolenoidPoint.make(t, base.fiber), t - base.leaf
        t = base.leaf
        for _ in range(-m):
            t = mapmodel.inverse_leaf(t, base.fiber)
        return SolenoidPoint.make(t, base.fiber), t - base.leaf
    if isinstance(mapmodel, TorusLiftMap):
        if m < 0:
            raise InverseError("backward flow is not supported for torus "
                               "maps (no monotone 1-D lift to bisect)")
        xy0 = _base_lift(base)
        X, Y = mapmodel.lift_checkpoints(xy0, [m])[0]
        return (TorusPoint(CirclePoint(X % 1.0), CirclePoint(Y % 1.0)),
                (X - xy0[0], Y - xy0[1]))
    if isinstance(mapmodel, CircleLiftMap):
        x0 = _base_lift(base)
        if m > 0:
            x = float(mapmodel.lift_checkpoints(x0, [m])[0])
        else:
            x = x0
            for _ in range(-m):
                x = mapmodel.inverse_lift(x)
        return CirclePoint(x % 1.0), x - x0
    raise TypeError(f"unsupported map model {type(mapmodel).__name__}")


def _split_time(t: float, s: float) -> tuple[int, float]:
    m = math.floor(t + s)
    s2 = t + s - m
    if s2 >= 1.0:  # guard the floating boundary
        m += 1
        s2 = t + s - m
    if s2 < 0.0:
        m -= 1
        s2 = t + s - m
    return m, s2


def flow(t: float, p: SuspensionPoint, mapmodel) -> SuspensionPoint:
    """Suspension flow for time t (any sign)."""
    m, s2 = _split_time(t, p.s)
    base, _ = _advance_base(mapmodel, p.base, m)
    return SuspensionPoint(base, s2)


def cocycle(chi: SuspensionChar, t: float, p: SuspensionPoint,
            mapmodel) -> float:
    """The real 1-cocycle associated to chi along the suspension flow."""
    m, _ = _split_time(t, p.s)
    _, disp = _advance_base(mapmodel, p.base, m)
    base = chi.base
    if isinstance(base, CircleChar):
        winding = base.k * disp
    elif isinstance(base, TorusChar):
        winding = base.k1 * disp[0] + base.k2 * disp[1]
    elif isinstance(base, SolenoidChar):
        winding = float(base.q) * disp
    else:
        raise TypeError(f"unsupported base character {type(base).__name__}")
    return winding + chi.n * t


def char_eval_suspension(chi: SuspensionChar, p: SuspensionPoint) -> UnitComplex:
    """Evaluate the suspension character chi_base(z) * exp(2*pi*i*n*s)."""
    u = chi.base.eval(p.base)
    if chi.n == 0:
        return u
    if p.s_exact is not None:
        return u * UnitComplex.make(chi.n * p.s_exact)
    return u * UnitComplex.make(chi.n * p.s)


def product_measure_sample(base_sampler, rng: np.random.Generator,
                           ) -> SuspensionPoint:
    """Sample base x fiber-time product measure: independent base draw and
    uniform fiber time."""
    return SuspensionPoint(base_sampler(rng), float(rng.random()))


def suspension_distance(p: SuspensionPoint, q: SuspensionPoint) -> float:
    """Diagnostic metric: base distance plus fiber-time circle distance.

    Solenoid fibers must agree exactly (they are discrete); a mismatch is
    reported as distance 1.
    """
    ds = angle_distance(p.s, q.s)
    a, b = p.base, q.base
    if isinstance(a, CirclePoint):
        return ds + angle_distance(a.value, b.value)
    if isinstance(a, TorusPoint):
        return ds + max(angle_distance(a.x.value, b.x.value),
                        angle_distance(a.y.value, b.y.value))
    if isinstance(a, SolenoidPoint):
        if a.fiber != b.fiber:
            return 1.0
        return ds + angle_distance(a.leaf, b.leaf)
    raise TypeError(f"unsupported base point {type(a).__name__}")


def property_suite(mapmodel, chars, rng: np.random.Generator,
                   base_sampler, trials: int = 100,
                   t_range: tuple[float, float] = (0.0, 3.0)) -> dict:
    """Max residuals of the three defining identities over random inputs.

    Checks, for `trials` random (t, u, p, chi):
      - flow property      phi_{t+u}(p) = phi_u(phi_t(p))
      - cocycle identity   C(t+u, p) = C(u, phi_t(p)) + C(t, p)
      - defining relation  chi(phi_t(p)) = exp(2*pi*i*C(t, p)) * chi(p)
    """
    chars = list(chars)
    worst_flow = 0.0
    worst_cocycle = 0.0
    worst_relation = 0.0
    lo, hi = t_range
    for _ in range(trials):
        p = product_measure_sample(base_sampler, rng)
        t = float(rng.uniform(lo, hi))
        u = float(rng.uniform(lo, hi))
        chi = chars[int(rng.integers(0, len(chars)))]

        pt = flow(t, p, mapmodel)
        worst_flow = max(worst_flow, suspension_distance(
            flow(t + u, p, mapmodel), flow(u, pt, mapmodel)))

        lhs = cocycle(chi, t + u, p, mapmodel)
        rhs = cocycle(chi, u, pt, mapmodel) + cocycle(chi, t, p, mapmodel)
        worst_cocycle = max(worst_cocycle, abs(lhs - rhs))

        want = (char_eval_suspension(chi, p).angle
                + cocycle(chi, t, p, mapmodel)) % 1.0
        got = char_eval_suspension(chi, pt).angle
        worst_relation = max(worst_relation, angle_distance(got, want))
    return {"flow_property": worst_flow,
            "cocycle_identity": worst_cocycle,
            "defining_relation": worst_relation,
            "trials": trials}
