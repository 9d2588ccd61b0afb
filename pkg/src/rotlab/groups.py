"""Exact arithmetic for the compact abelian groups in scope.

Covers the circle R/Z, the 2-torus, truncations of the profinite integers,
and the universal solenoid, together with their characters, duality
evaluation and Haar sampling.

A profinite integer is stored as a single residue mod K! (depth K); every
level n <= K is recoverable by reduction, and coherence across levels is
automatic in this representation.  A solenoid point is a canonical
representative (t, x) with leaf coordinate t in [0, 1) and profinite fiber x,
under the mapping-torus identification (t + 1, x) ~ (t, x + 1): one full turn
along the leaf advances the fiber by 1.

Angles live on [0, 1): a value `a` stands for exp(2*pi*i*a).  Whenever all
inputs are rational the angle is carried exactly as a Fraction alongside the
float, so character identities can be checked with no rounding at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from rotlab.errors import CoherenceError, DepthError

DEFAULT_DEPTH = 8  # 8! = 40320; covers character denominators through 8

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def _factorial(k: int) -> int:
    return math.factorial(k)


def fraction_mod1(q: Fraction) -> Fraction:
    """Reduce a rational to its representative in [0, 1)."""
    return q - (q.numerator // q.denominator)


def parse_rational(text: str) -> Fraction:
    """Parse "a/b" or "a" into a Fraction."""
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Profinite integers
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ProfiniteInt:
    """Truncation of a profinite integer: a residue mod depth!.

    depth K fixes the modulus K!; the stored residue determines the residue
    mod n for every n dividing K!.
    """

    depth: int
    residue: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        m = _factorial(self.depth)
        if not 0 <= self.residue < m:
            raise ValueError(f"residue {self.residue} out of range [0, {m})")

    @property
    def modulus(self) -> int:
        return _factorial(self.depth)

    @classmethod
    def from_int(cls, n: int, depth: int = DEFAULT_DEPTH) -> "ProfiniteInt":
        """Image of an ordinary integer (the dense copy of Z)."""
        return cls(depth, n % _factorial(depth))

    @classmethod
    def zero(cls, depth: int = DEFAULT_DEPTH) -> "ProfiniteInt":
        return cls(depth, 0)

    @classmethod
    def one(cls, depth: int = DEFAULT_DEPTH) -> "ProfiniteInt":
        return cls.from_int(1, depth)

    @classmethod
    def from_residues(cls, residues: dict[int, int],
                      depth: int = DEFAULT_DEPTH) -> "ProfiniteInt":
        """Import a coherent residue chain {modulus: residue}.

        Every modulus must divide depth!, the residues must agree on common
        divisors, and together they must determine the element mod depth!
        (i.e. lcm of the moduli == depth!).  Raises CoherenceError otherwise.
        """
        if not residues:
            raise CoherenceError("no residues given")
        m_full = _factorial(depth)
        for n in residues:
            if n < 1 or m_full % n != 0:
                raise DepthError(f"modulus {n} does not divide {depth}! = {m_full}")
        # pairwise coherence on gcds
        items = sorted(residues.items())
        for i, (n1, r1) in enumerate(items):
            for n2, r2 in items[i + 1:]:
                g = math.gcd(n1, n2)
                if r1 % g != r2 % g:
                    raise CoherenceError(
                        f"residues {r1} mod {n1} and {r2} mod {n2} "
                        f"disagree mod {g}")
        # CRT merge
        mod, rem = 1, 0
        for n, r in items:
            g = math.gcd(mod, n)
            l = mod // g * n
            # solve x = rem mod `mod`, x = r mod n; coherence checked above
            step = mod // g
            k = ((r - rem) // g * pow(step, -1, n // g)) % (n // g)
            rem = rem + mod * k
            mod = l
        if mod != m_full:
            raise CoherenceError(
                f"residues determine the element only mod {mod}, "
                f"but depth {depth} needs mod {m_full}")
        return cls(depth, rem % m_full)

    def truncate(self, depth: int) -> "ProfiniteInt":
        if depth > self.depth:
            raise DepthError(f"cannot deepen from {self.depth} to {depth}")
        return ProfiniteInt(depth, self.residue % _factorial(depth))

    def project(self, n: int) -> int:
        """Canonical projection to Z/nZ; n must divide depth!."""
        if n < 1 or self.modulus % n != 0:
            raise DepthError(f"level {n} does not divide {self.depth}!")
        return self.residue % n

    def __add__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        a, b = _common_depth(self, other)
        return ProfiniteInt(a.depth, (a.residue + b.residue) % a.modulus)

    def __neg__(self) -> "ProfiniteInt":
        return ProfiniteInt(self.depth, (-self.residue) % self.modulus)

    def __sub__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return self + (-other)

    def shift(self, n: int) -> "ProfiniteInt":
        """Add the image of the integer n."""
        return ProfiniteInt(self.depth, (self.residue + n) % self.modulus)

    def to_dict(self) -> dict:
        return {"depth": self.depth, "residue": self.residue}

    @classmethod
    def from_dict(cls, d: dict) -> "ProfiniteInt":
        return cls(int(d["depth"]), int(d["residue"]))


def _common_depth(a: ProfiniteInt, b: ProfiniteInt):
    """Auto-truncate both operands to the smaller depth."""
    if a.depth == b.depth:
        return a, b
    k = min(a.depth, b.depth)
    return a.truncate(k), b.truncate(k)


def profinite_add(x: ProfiniteInt, y: ProfiniteInt) -> ProfiniteInt:
    return x + y


# ---------------------------------------------------------------------------
# Circle and torus points
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class CirclePoint:
    """Point of R/Z, coordinate in [0, 1); exact rational kept when known."""

    value: float
    exact: Optional[Fraction] = None

    @classmethod
    def make(cls, v: Union[float, Rational]) -> "CirclePoint":
        if isinstance(v, (Fraction, int)):
            q = fraction_mod1(Fraction(v))
            return cls(float(q), q)
        return cls(v % 1.0, None)

    def __add__(self, other: "CirclePoint") -> "CirclePoint":
        if self.exact is not None and other.exact is not None:
            return CirclePoint.make(self.exact + other.exact)
        return CirclePoint((self.value + other.value) % 1.0)

    def __neg__(self) -> "CirclePoint":
        if self.exact is not None:
            return CirclePoint.make(-self.exact)
        return CirclePoint((-self.value) % 1.0)

    def __sub__(self, other: "CirclePoint") -> "CirclePoint":
        return self + (-other)

    def to_dict(self) -> dict:
        d = {"value": self.value}
        if self.exact is not None:
            d["exact"] = format_rational(self.exact)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CirclePoint":
        if "exact" in d:
            return cls.make(parse_rational(d["exact"]))
        return cls.make(float(d["value"]))


@dataclass(frozen=True, slots=True)
class TorusPoint:
    x: CirclePoint
    y: CirclePoint

    @classmethod
    def make(cls, x, y) -> "TorusPoint":
        return cls(CirclePoint.make(x), CirclePoint.make(y))

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.x + other.x, self.y + other.y)

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(-self.x, -self.y)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return self + (-other)

    def to_dict(self) -> dict:
        return {"coords": [self.x.to_dict(), self.y.to_dict()]}

    @classmethod
    def from_dict(cls, d: dict) -> "TorusPoint":
        cx, cy = d["coords"]
        return cls(CirclePoint.from_dict(cx), CirclePoint.from_dict(cy))


# ---------------------------------------------------------------------------
# Solenoid points
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SolenoidPoint:
    """Canonical representative (leaf, fiber) with leaf in [0, 1).

    Uses the mapping-torus convention for the deck action: (t, x) and
    (t + n, x - n*1) represent the same point, so canonicalization moves the
    integer part of the leaf into the fiber with a plus sign; flowing one
    full turn along the leaf advances the fiber by 1 (the adding machine).
    The level projections t + (x mod b) on R/bZ are invariant under this
    action, and they are what characters evaluate through.
    """

    leaf: float
    fiber: ProfiniteInt
    leaf_exact: Optional[Fraction] = None

    @classmethod
    def make(cls, leaf: Union[float, Rational], fiber: ProfiniteInt,
             ) -> "SolenoidPoint":
        """Canonicalize an arbitrary representative (leaf, fiber)."""
        if isinstance(leaf, (Fraction, int)):
            q = Fraction(leaf)
            n = q.numerator // q.denominator
            frac = q - n
            return cls(float(frac), fiber.shift(n), frac)
        n = math.floor(leaf)
        return cls(leaf - n, fiber.shift(n), None)

    @classmethod
    def from_param(cls, t: Union[float, Rational],
                   depth: int = DEFAULT_DEPTH) -> "SolenoidPoint":
        """Point sigma(t) on the one-parameter subgroup through the identity."""
        return cls.make(t, ProfiniteInt.zero(depth))

    @property
    def depth(self) -> int:
        return self.fiber.depth

    def __add__(self, other: "SolenoidPoint") -> "SolenoidPoint":
        if self.leaf_exact is not None and other.leaf_exact is not None:
            return SolenoidPoint.make(self.leaf_exact + other.leaf_exact,
                                      self.fiber + other.fiber)
        return SolenoidPoint.make(self.leaf + other.leaf,
                                  self.fiber + other.fiber)

    def __neg__(self) -> "SolenoidPoint":
        if self.leaf_exact is not None:
            return SolenoidPoint.make(-self.leaf_exact, -self.fiber)
        return SolenoidPoint.make(-self.leaf, -self.fiber)

    def __sub__(self, other: "SolenoidPoint") -> "SolenoidPoint":
        return self + (-other)

    def project(self, n: int) -> float:
        """Projection to R/nZ: t + (x mod n), reduced to [0, n)."""
        r = self.fiber.project(n)
        if self.leaf_exact is not None:
            q = (self.leaf_exact + r) % n
            return float(q)
        return (self.leaf + r) % n

    def to_dict(self) -> dict:
        d = {"leaf": self.leaf, "fiber": self.fiber.to_dict()}
        if self.leaf_exact is not None:
            d["leaf_exact"] = format_rational(self.leaf_exact)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SolenoidPoint":
        fiber = ProfiniteInt.from_dict(d["fiber"])
        if "leaf_exact" in d:
            return cls.make(parse_rational(d["leaf_exact"]), fiber)
        return cls.make(float(d["leaf"]), fiber)


def solenoid_add(p: SolenoidPoint, q: SolenoidPoint) -> SolenoidPoint:
    return p + q


def project_level(x: Union[ProfiniteInt, SolenoidPoint], n: int):
    """Canonical projection to Z/nZ (profinite) or R/nZ (solenoid)."""
    return x.project(n)


# ---------------------------------------------------------------------------
# Angles and characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class UnitComplex:
    """Value exp(2*pi*i*angle) with angle in [0, 1); exact when rational."""

    angle: float
    exact: Optional[Fraction] = None

    @classmethod
    def make(cls, angle: Union[float, Rational]) -> "UnitComplex":
        if isinstance(angle, (Fraction, int)):
            q = fraction_mod1(Fraction(angle))
            return cls(float(q), q)
        return cls(angle % 1.0, None)

    @property
    def cvalue(self) -> complex:
        return complex(math.cos(2 * math.pi * self.angle),
                       math.sin(2 * math.pi * self.angle))

    def __mul__(self, other: "UnitComplex") -> "UnitComplex":
        if self.exact is not None and other.exact is not None:
            return UnitComplex.make(self.exact + other.exact)
        return UnitComplex.make(self.angle + other.angle)

    def conjugate(self) -> "UnitComplex":
        if self.exact is not None:
            return UnitComplex.make(-self.exact)
        return UnitComplex.make(-self.angle)

    def is_one(self) -> bool:
        """Exactly the identity; requires an exact angle."""
        return self.exact is not None and self.exact == 0


def angle_distance(a: float, b: float) -> float:
    """Distance on R/Z between two angle coordinates."""
    d = (a - b) % 1.0
    return min(d, 1.0 - d)


ONE = UnitComplex.make(0)


@dataclass(frozen=True, slots=True)
class CircleChar:
    """Character z -> exp(2*pi*i*k*z) of R/Z."""

    k: int

    def eval(self, g: CirclePoint) -> UnitComplex:
        if self.k == 0:
            return ONE
        if g.exact is not None:
            return UnitComplex.make(self.k * g.exact)
        return UnitComplex.make(self.k * g.value)

    def is_trivial(self) -> bool:
        return self.k == 0

    def __mul__(self, other: "CircleChar") -> "CircleChar":
        return CircleChar(self.k + other.k)

    def to_dict(self) -> dict:
        return {"group": "circle", "k": self.k}


@dataclass(frozen=True, slots=True)
class TorusChar:
    k1: int
    k2: int

    def eval(self, g: TorusPoint) -> UnitComplex:
        u = CircleChar(self.k1).eval(g.x)
        v = CircleChar(self.k2).eval(g.y)
        return u * v

    def is_trivial(self) -> bool:
        return self.k1 == 0 and self.k2 == 0

    def __mul__(self, other: "TorusChar") -> "TorusChar":
        return TorusChar(self.k1 + other.k1, self.k2 + other.k2)

    def to_dict(self) -> dict:
        return {"group": "torus", "k": [self.k1, self.k2]}


@dataclass(frozen=True, slots=True)
class ProfiniteChar:
    """Character of the profinite integers: an element a/b of Q/Z."""

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", fraction_mod1(Fraction(self.q)))

    def eval(self, g: ProfiniteInt) -> UnitComplex:
        b = self.q.denominator
        r = g.project(b)  # DepthError if b does not divide depth!
        return UnitComplex.make(self.q * r)

    def is_trivial(self) -> bool:
        return self.q == 0

    def __mul__(self, other: "ProfiniteChar") -> "ProfiniteChar":
        return ProfiniteChar(self.q + other.q)

    def to_dict(self) -> dict:
        return {"group": "profinite", "q": format_rational(self.q)}


@dataclass(frozen=True, slots=True)
class SolenoidChar:
    """Character of the solenoid: a rational frequency q = a/b.

    Evaluation factors through the level-b projection:
    chi(t, x) = exp(2*pi*i * q * (t + (x mod b))), which is invariant under
    the deck relation, so the value does not depend on the chosen
    representative.
    """

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))

    def eval(self, g: SolenoidPoint) -> UnitComplex:
        if self.q == 0:
            return ONE
        b = self.q.denominator
        r = g.project(b)  # float in [0, b), or exact path below
        if g.leaf_exact is not None:
            rb = g.fiber.project(b)
            return UnitComplex.make(self.q * (g.leaf_exact + rb))
        return UnitComplex.make(float(self.q) * r)

    def is_trivial(self) -> bool:
        return self.q == 0

    def __mul__(self, other: "SolenoidChar") -> "SolenoidChar":
        return SolenoidChar(self.q + other.q)

    def to_dict(self) -> dict:
        return {"group": "solenoid", "q": format_rational(self.q)}


Character = Union[CircleChar, TorusChar, ProfiniteChar, SolenoidChar]


def char_eval(chi: Character, g) -> UnitComplex:
    """Evaluate the duality pairing <chi, g>."""
    return chi.eval(g)


def char_from_dict(d: dict) -> Character:
    kind = d["group"]
    if kind == "circle":
        return CircleChar(int(d["k"]))
    if kind == "torus":
        k1, k2 = d["k"]
        return TorusChar(int(k1), int(k2))
    if kind == "profinite":
        return ProfiniteChar(parse_rational(d["q"]))
    if kind == "solenoid":
        return SolenoidChar(parse_rational(d["q"]))
    raise ValueError(f"unknown character group {kind!r}")


# ---------------------------------------------------------------------------
# Group descriptors and Haar sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class CircleGroup:
    name = "circle"

    def identity(self):
        return CirclePoint.make(Fraction(0))

    def haar(self, rng: np.random.Generator) -> CirclePoint:
        return CirclePoint(float(rng.random()))

    def characters(self, cap: int):
        """Nontrivial characters by increasing frequency magnitude."""
        for k in range(1, cap + 1):
            yield CircleChar(k)
            yield CircleChar(-k)

    def element_from(self, v) -> CirclePoint:
        return CirclePoint.make(v)

    def to_dict(self) -> dict:
        return {"group": "circle"}


@dataclass(frozen=True, slots=True)
class TorusGroup:
    name = "torus"

    def identity(self):
        return TorusPoint.make(Fraction(0), Fraction(0))

    def haar(self, rng: np.random.Generator) -> TorusPoint:
        return TorusPoint(CirclePoint(float(rng.random())),
                          CirclePoint(float(rng.random())))

    def characters(self, cap: int):
        for h in range(0, cap + 1):
            for k1 in range(-h, h + 1):
                for k2 in range(-h, h + 1):
                    if max(abs(k1), abs(k2)) == h and (k1, k2) != (0, 0):
                        yield TorusChar(k1, k2)

    def element_from(self, v) -> TorusPoint:
        return TorusPoint.make(v[0], v[1])

    def to_dict(self) -> dict:
        return {"group": "torus"}


@dataclass(frozen=True, slots=True)
class ProfiniteGroup:
    depth: int = DEFAULT_DEPTH
    name = "profinite"

    def identity(self):
        return ProfiniteInt.zero(self.depth)

    def haar(self, rng: np.random.Generator) -> ProfiniteInt:
        return ProfiniteInt(self.depth,
                            int(rng.integers(0, _factorial(self.depth))))

    def characters(self, cap: int):
        """Nontrivial a/b in Q/Z with b | depth!, by increasing denominator."""
        m = _factorial(self.depth)
        for b in range(2, cap + 1):
            if m % b != 0:
                continue
            for a in range(1, b):
                if math.gcd(a, b) == 1:
                    yield ProfiniteChar(Fraction(a, b))

    def element_from(self, v) -> ProfiniteInt:
        if isinstance(v, ProfiniteInt):
            return v
        return ProfiniteInt.from_int(int(v), self.depth)

    def to_dict(self) -> dict:
        return {"group": "profinite", "depth": self.depth}


@dataclass(frozen=True, slots=True)
class SolenoidGroup:
    depth: int = DEFAULT_DEPTH
    name = "solenoid"

    def identity(self):
        return SolenoidPoint.make(Fraction(0), ProfiniteInt.zero(self.depth))

    def haar(self, rng: np.random.Generator) -> SolenoidPoint:
        leaf = float(rng.random())
        fiber = ProfiniteInt(self.depth,
                             int(rng.integers(0, _factorial(self.depth))))
        return SolenoidPoint(leaf, fiber)

    def characters(self, cap: int):
        """Nontrivial a/b with b | depth!, ordered by denominator then |a|."""
        m = _factorial(self.depth)
        for b in range(1, cap + 1):
            if m % b != 0:
                continue
            for a in range(1, cap + 1):
                if math.gcd(a, b) == 1:
                    yield SolenoidChar(Fraction(a, b))
                    yield SolenoidChar(Fraction(-a, b))

    def element_from(self, v) -> SolenoidPoint:
        if isinstance(v, SolenoidPoint):
            return v
        return SolenoidPoint.from_param(v, self.depth)

    def to_dict(self) -> dict:
        return {"group": "solenoid", "depth": self.depth}


GroupDescriptor = Union[CircleGroup, TorusGroup, ProfiniteGroup, SolenoidGroup]


def group_from_dict(d: dict) -> GroupDescriptor:
    kind = d["group"]
    if kind == "circle":
        return CircleGroup()
    if kind == "torus":
        return TorusGroup()
    if kind == "profinite":
        return ProfiniteGroup(int(d.get("depth", DEFAULT_DEPTH)))
    if kind == "solenoid":
        return SolenoidGroup(int(d.get("depth", DEFAULT_DEPTH)))
    raise ValueError(f"unknown group {kind!r}")


def haar_sample(group: GroupDescriptor, rng: np.random.Generator):
    """One Haar-distributed sample. Deterministic given the generator state."""
    return group.haar(rng)
