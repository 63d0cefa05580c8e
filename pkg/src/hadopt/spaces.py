"""Hadamard spaces: the geodesic-space contract and four analytic models.

Every space exposes the same small surface used by the oracles and solvers:
``distance``, ``geodesic_point``, ``ray_point``, ``project_ball`` and the
Busemann helpers.  Points are immutable and tied to one kind of space;
handing a point of the wrong kind to a space raises ``SpaceMismatchError``.

Rays are described by :class:`TowardPoint` (the geodesic from the origin
through a target, continued past it) or by :class:`Direction` (a boundary
point at infinity, only for spaces that can name one).  Busemann functions
are normalised so that ``b(basepoint) == 0``; the basepoint is the origin for
the Euclidean and hyperbolic models and the apex for the spider and cone.
"""

from __future__ import annotations

import cmath
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from .errors import DomainError, SpaceMismatchError, UnsupportedSpaceError

__all__ = [
    "ExtensionPolicy", "ZERO", "Zero", "TowardPoint", "Direction",
    "HadamardSpace", "Euclidean", "EuclideanPoint", "Hyperbolic",
    "HyperbolicPoint", "Spider", "SpiderPoint", "Cone", "ConePoint",
]

# slack accepted on ``0 <= t <= d`` before raising
RANGE_SLACK = 1e-12
# hyperbolic points this close to the unit circle are rejected
BOUNDARY_GUARD = 1e-12


class ExtensionPolicy(Enum):
    """What to do when a ray is asked for a point past what can be extended."""
    ERROR = "error"
    CLAMP = "clamp"


class Zero:
    """The zero class ``[0]`` of the boundary cone (no movement)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (Zero, ())


ZERO = Zero()


@dataclass(frozen=True)
class TowardPoint:
    """Ray issuing from an origin and passing through ``target``."""
    target: Any


@dataclass(frozen=True)
class Direction:
    """Boundary direction: a unit vector (Euclidean, hyperbolic) or a leg index (spider)."""
    value: Any


def _check_t(t, d):
    if t < -RANGE_SLACK or t > d + RANGE_SLACK * max(1.0, d):
        raise DomainError(f"t={t!r} outside [0, {d!r}]")
    return min(max(t, 0.0), d)


class HadamardSpace(ABC):
    """Abstract CAT(0) space with the geodesic extension property."""

    kind = "abstract"
    point_type: type = object
    supports_directions = False

    def check(self, *points):
        for p in points:
            if not isinstance(p, self.point_type):
                raise SpaceMismatchError(
                    f"{type(p).__name__} is not a point of {type(self).__name__}")

    @property
    @abstractmethod
    def basepoint(self):
        """Reference point against which closed-form Busemann values are stated."""

    @abstractmethod
    def distance(self, x, y) -> float:
        ...

    @abstractmethod
    def geodesic_point(self, x, y, t):
        """Point at distance ``t`` from ``x`` on the geodesic ``[x, y]``."""

    @abstractmethod
    def ray_point(self, origin, ray, t, policy=ExtensionPolicy.ERROR):
        """Point at time ``t`` on the unit-speed ray ``ray`` issuing from ``origin``."""

    def project_ball(self, center, radius, y):
        """Metric projection of ``y`` onto the closed ball ``B_radius(center)``."""
        if radius < 0:
            raise DomainError("radius must be nonnegative")
        d = self.distance(center, y)
        if d <= radius:
            return y
        return self.geodesic_point(center, y, radius)

    def busemann(self, xi: Direction, z) -> float:
        """Closed-form Busemann function of ``xi`` normalised at the basepoint."""
        raise UnsupportedSpaceError(f"{type(self).__name__} has no boundary directions")

    def busemann_limit(self, origin, ray, z, horizon, policy=ExtensionPolicy.ERROR) -> float:
        """Finite-horizon Busemann value ``d(z, r(h)) - h``.

        Nonincreasing in ``horizon`` and an upper bound on the true value
        ``b_r(z)``.
        """
        if horizon <= 0:
            raise DomainError("horizon must be positive")
        return self.distance(z, self.ray_point(origin, ray, horizon, policy)) - horizon

    def quadratic_busemann(self, origin, ray, z, horizon, policy=ExtensionPolicy.ERROR) -> float:
        """``(d(r(h), z)**2 - h**2) / (2h)``, which converges to the same limit."""
        if horizon <= 0:
            raise DomainError("horizon must be positive")
        d = self.distance(z, self.ray_point(origin, ray, horizon, policy))
        return (d - horizon) * (d + horizon) / (2.0 * horizon)

    def _toward(self, origin, ray):
        if not isinstance(ray, TowardPoint):
            return None
        self.check(ray.target)
        if ray.target == origin:
            raise DomainError("TowardPoint target coincides with the ray origin")
        return ray.target

    def _reject_direction(self, ray):
        if isinstance(ray, Direction):
            raise UnsupportedSpaceError(f"{type(self).__name__} has no boundary directions")
        if ray is ZERO:
            raise DomainError("the zero ray has no points")
        raise SpaceMismatchError(f"unknown ray descriptor {ray!r}")


# --------------------------------------------------------------------------
# Euclidean space


@dataclass(frozen=True)
class EuclideanPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    @property
    def array(self):
        return np.array(self.coords)

    def __len__(self):
        return len(self.coords)


class Euclidean(HadamardSpace):
    """Flat space R^n."""

    kind = "euclidean"
    point_type = EuclideanPoint
    supports_directions = True

    def __init__(self, dim=2):
        self.dim = int(dim)

    def __repr__(self):
        return f"Euclidean(dim={self.dim})"

    def point(self, *coords):
        if len(coords) == 1 and np.ndim(coords[0]) == 1:
            coords = tuple(coords[0])
        if len(coords) != self.dim:
            raise DomainError(f"expected {self.dim} coordinates, got {len(coords)}")
        return EuclideanPoint(coords)

    def check(self, *points):
        super().check(*points)
        for p in points:
            if len(p.coords) != self.dim:
                raise SpaceMismatchError(f"point of dimension {len(p.coords)} in R^{self.dim}")

    @property
    def basepoint(self):
        return EuclideanPoint((0.0,) * self.dim)

    def distance(self, x, y):
        self.check(x, y)
        return math.dist(x.coords, y.coords)

    def geodesic_point(self, x, y, t):
        d = self.distance(x, y)
        t = _check_t(t, d)
        if t == 0.0:
            return x
        if t == d:
            return y
        return EuclideanPoint(x.array + (t / d) * (y.array - x.array))

    def ray_point(self, origin, ray, t, policy=ExtensionPolicy.ERROR):
        self.check(origin)
        if t < 0:
            raise DomainError("ray time must be nonnegative")
        target = self._toward(origin, ray)
        if target is not None:
            d = self.distance(origin, target)
            if t == d:
                return target
            return EuclideanPoint(origin.array + (t / d) * (target.array - origin.array))
        if isinstance(ray, Direction):
            return EuclideanPoint(origin.array + t * self._unit(ray))
        self._reject_direction(ray)

    def _unit(self, xi):
        v = np.asarray(xi.value, dtype=float)
        if v.shape != (self.dim,):
            raise SpaceMismatchError("direction has the wrong dimension")
        n = np.linalg.norm(v)
        if n == 0:
            raise DomainError("direction must be nonzero")
        return v / n

    def busemann(self, xi, z):
        self.check(z)
        return float(-np.dot(z.array, self._unit(xi)))


# --------------------------------------------------------------------------
# Poincare disk


def _log_sinh(r):
    if r <= 0:
        return -math.inf
    if r > 20:
        return r - math.log(2.0) + math.log1p(-math.exp(-2.0 * r))
    return math.log(math.sinh(r))


def _log_cosh(r):
    r = abs(r)
    return r + math.log1p(math.exp(-2.0 * r)) - math.log(2.0)


def _log_add(a, b):
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    m = max(a, b)
    return m + math.log1p(math.exp(-abs(a - b)))


@dataclass(frozen=True)
class HyperbolicPoint:
    """Point of the Poincare disk stored by hyperbolic polar coordinates.

    ``radius`` is the hyperbolic distance to the disk centre and ``angle`` the
    Euclidean argument.  Polar storage keeps points far from the centre exact;
    the disk coordinates ``tanh(radius/2) * (cos, sin)`` round to the unit
    circle once ``radius`` exceeds roughly 37.
    """
    radius: float
    angle: float = 0.0

    def __post_init__(self):
        r = float(self.radius)
        if not r >= 0 or math.isinf(r):
            raise DomainError("hyperbolic radius must be finite and nonnegative")
        a = 0.0 if r == 0.0 else math.remainder(float(self.angle), 2.0 * math.pi)
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "angle", a)

    @classmethod
    def from_coords(cls, x, y):
        n = math.hypot(x, y)
        if n >= 1.0 - BOUNDARY_GUARD:
            raise DomainError("point lies on or too close to the boundary circle")
        return cls(2.0 * math.atanh(n), math.atan2(y, x))

    @property
    def complex(self):
        return math.tanh(self.radius / 2.0) * cmath.exp(1j * self.angle)

    @property
    def coords(self):
        z = self.complex
        return (z.real, z.imag)


class Hyperbolic(HadamardSpace):
    """The hyperbolic plane H^2 in the Poincare disk model."""

    kind = "hyperbolic"
    point_type = HyperbolicPoint
    supports_directions = True

    def __repr__(self):
        return "Hyperbolic()"

    def point(self, x, y):
        return HyperbolicPoint.from_coords(x, y)

    @property
    def basepoint(self):
        return HyperbolicPoint(0.0)

    def distance(self, x, y):
        self.check(x, y)
        # sinh^2(d/2) = sinh^2((r1-r2)/2) + sinh r1 sinh r2 sin^2(dtheta/2)
        t1 = 2.0 * _log_sinh(abs(x.radius - y.radius) / 2.0)
        s = abs(math.sin((x.angle - y.angle) / 2.0))
        t2 = -math.inf
        if s > 0:
            t2 = _log_sinh(x.radius) + _log_sinh(y.radius) + 2.0 * math.log(s)
        log_s2 = _log_add(t1, t2)
        if log_s2 == -math.inf:
            return 0.0
        log_s = log_s2 / 2.0
        if log_s < 30:
            return 2.0 * math.asinh(math.exp(log_s))
        return 2.0 * (log_s + math.log1p(math.sqrt(1.0 + math.exp(-2.0 * log_s))))

    # Tangent directions at x are stored as a signed "turn": the angle from the
    # inward radial direction -exp(i*angle(x)).  Near the centre they come from
    # the Mobius frame moving x to 0; far out, where 1 - |x|^2 underflows,
    # from hyperbolic triangle trigonometry on (0, x, target).
    FAR = 10.0

    @staticmethod
    def _turn_of(x, u):
        return cmath.phase(u * -cmath.exp(-1j * x.angle))

    @staticmethod
    def _triangle_angle(a, b, c):
        """Angle between sides ``a`` and ``b`` of a hyperbolic triangle with third side ``c``."""
        s = 0.5 * (a + b + c)
        if s - c <= 0.0:
            return math.pi
        if s - a <= 0.0 or s - b <= 0.0:
            return 0.0
        log_tan2 = _log_sinh(s - a) + _log_sinh(s - b) - _log_sinh(s) - _log_sinh(s - c)
        return 2.0 * math.atan(math.exp(0.5 * log_tan2))

    @classmethod
    def _angle(cls, a, b, c, log_sin):
        """Angle between sides ``a`` and ``b`` opposite ``c``, given log(sin angle).

        Small sines come from the law of sines (exact for thin triangles) with
        the obtuse case read off the sign of cosh(a)cosh(b) - cosh(c).
        """
        if log_sin < math.log(0.7):
            g = math.asin(math.exp(log_sin))
            obtuse = _log_cosh(a) + _log_cosh(b) < _log_cosh(c)
            return math.pi - g if obtuse else g
        return cls._triangle_angle(a, b, c)

    def _turn_toward(self, x, y):
        if x.radius <= self.FAR:
            xc = x.complex
            a = (y.complex - xc) / (1.0 - xc.conjugate() * y.complex)
            return self._turn_of(x, a)
        d = self.distance(x, y)
        sin_o = abs(math.sin(y.angle - x.angle))
        log_sin = -math.inf if sin_o == 0.0 or y.radius == 0.0 else \
            _log_sinh(y.radius) + math.log(sin_o) - _log_sinh(d)
        beta = self._angle(x.radius, d, y.radius, min(log_sin, 0.0))
        return -math.copysign(beta, math.sin(y.angle - x.angle))

    def _turn_to_ideal(self, x, u):
        if x.radius <= self.FAR:
            xc = x.complex
            return self._turn_of(x, (u - xc) / (1.0 - xc.conjugate() * u))
        # a point 10^3 beyond x on the way to the ideal point fixes the angle to machine precision
        return self._turn_toward(x, HyperbolicPoint(x.radius + 1e3, cmath.phase(u)))

    @staticmethod
    def _far_step(x, turn, t):
        """Point at distance ``t`` from a far point ``x`` via the triangle (0, x, result)."""
        beta = abs(turn)
        # sinh^2(r/2) = sinh^2((rx - t)/2) + sinh(rx) sinh(t) sin^2(beta/2)
        t1 = 2.0 * _log_sinh(abs(x.radius - t) / 2.0)
        sb = math.sin(beta / 2.0)
        t2 = -math.inf if sb == 0.0 else _log_sinh(x.radius) + _log_sinh(t) + 2.0 * math.log(sb)
        log_s2 = _log_add(t1, t2)
        if log_s2 == -math.inf:
            return HyperbolicPoint(0.0)
        log_s = log_s2 / 2.0
        if log_s < 30:
            r = 2.0 * math.asinh(math.exp(log_s))
        else:
            r = 2.0 * (log_s + math.log1p(math.sqrt(1.0 + math.exp(-2.0 * log_s))))
        sin_b = abs(math.sin(turn))
        log_sin = -math.inf if sin_b == 0.0 else _log_sinh(t) + math.log(sin_b) - _log_sinh(r)
        delta = Hyperbolic._angle(x.radius, r, t, min(log_sin, 0.0))
        return HyperbolicPoint(r, x.angle - math.copysign(delta, turn))

    def _step(self, x, turn, t):
        """Point at distance ``t`` from ``x`` in tangent direction ``turn``."""
        if t == 0.0:
            return x
        if x.radius > self.FAR:
            return self._far_step(x, turn, t)
        xc = x.complex
        u = -cmath.exp(1j * (x.angle + turn))
        w = math.tanh(t / 2.0) * u
        den = 1.0 + xc.conjugate() * w
        z = (w + xc) / den
        az = abs(z)
        if az == 0.0:
            return HyperbolicPoint(0.0)
        # 1 - |z|^2 tracked in log form so that long steps keep their length
        log_1mz2 = -2.0 * _log_cosh(x.radius / 2.0) - 2.0 * _log_cosh(t / 2.0) - 2.0 * math.log(abs(den))
        if log_1mz2 > -2.0:
            r = 2.0 * math.atanh(az)
        else:
            r = 2.0 * math.log1p(min(az, 1.0)) - log_1mz2
        return HyperbolicPoint(r, cmath.phase(z))

    def geodesic_point(self, x, y, t):
        d = self.distance(x, y)
        t = _check_t(t, d)
        if t == 0.0:
            return x
        if t == d:
            return y
        return self._step(x, self._turn_toward(x, y), t)

    def _unit(self, xi):
        v = np.asarray(xi.value, dtype=float)
        if v.shape != (2,):
            raise SpaceMismatchError("hyperbolic directions are 2-vectors")
        n = math.hypot(*v)
        if n == 0:
            raise DomainError("direction must be nonzero")
        return complex(v[0] / n, v[1] / n)

    def ray_point(self, origin, ray, t, policy=ExtensionPolicy.ERROR):
        self.check(origin)
        if t < 0:
            raise DomainError("ray time must be nonnegative")
        target = self._toward(origin, ray)
        if target is not None:
            turn = self._turn_toward(origin, target)
        elif isinstance(ray, Direction):
            turn = self._turn_to_ideal(origin, self._unit(ray))
        else:
            self._reject_direction(ray)
        return self._step(origin, turn, t)

    def busemann(self, xi, z):
        """``-log((1 - |z|^2) / |z - xi|^2)`` evaluated stably in polar form."""
        self.check(z)
        u = self._unit(xi)
        tau = math.tanh(z.radius / 2.0)
        one_minus_tau = 2.0 / (math.exp(z.radius) + 1.0)
        alpha = z.angle - cmath.phase(u)
        dist2 = one_minus_tau ** 2 + 4.0 * tau * math.sin(alpha / 2.0) ** 2
        return 2.0 * _log_cosh(z.radius / 2.0) + math.log(dist2)


# --------------------------------------------------------------------------
# k-spider


@dataclass(frozen=True)
class SpiderPoint:
    """Point ``offset`` along leg ``leg``; the glue point is ``SpiderPoint(0, 0.0)``."""
    leg: int
    offset: float

    def __post_init__(self):
        off = float(self.offset)
        if not off >= 0 or math.isinf(off):
            raise DomainError("spider offset must be finite and nonnegative")
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "leg", 0 if off == 0.0 else int(self.leg))


class Spider(HadamardSpace):
    """``legs`` copies of the half-line glued at 0 (the tripod when legs=3)."""

    kind = "spider"
    point_type = SpiderPoint
    supports_directions = True

    def __init__(self, legs=3):
        if legs < 1:
            raise DomainError("a spider needs at least one leg")
        self.legs = int(legs)

    def __repr__(self):
        return f"Spider(legs={self.legs})"

    def point(self, leg, offset):
        p = SpiderPoint(leg, offset)
        self.check(p)
        return p

    def check(self, *points):
        super().check(*points)
        for p in points:
            if not 0 <= p.leg < self.legs:
                raise SpaceMismatchError(f"leg {p.leg} does not exist in {self!r}")

    @property
    def basepoint(self):
        return SpiderPoint(0, 0.0)

    def distance(self, x, y):
        self.check(x, y)
        if x.leg == y.leg:
            return abs(x.offset - y.offset)
        return x.offset + y.offset

    def geodesic_point(self, x, y, t):
        d = self.distance(x, y)
        t = _check_t(t, d)
        if t == 0.0:
            return x
        if t == d:
            return y
        if x.leg == y.leg or x.offset == 0.0 or y.offset == 0.0:
            if y.offset > x.offset:
                return SpiderPoint(y.leg, x.offset + t)
            return SpiderPoint(x.leg, x.offset - t)
        if t <= x.offset:
            return SpiderPoint(x.leg, x.offset - t)
        return SpiderPoint(y.leg, t - x.offset)

    def _exit_leg(self, entry):
        # tie-break: lowest index different from the leg we came in on
        for leg in range(self.legs):
            if leg != entry:
                return leg
        raise UnsupportedSpaceError("a one-legged spider has no ray through the apex")

    def ray_point(self, origin, ray, t, policy=ExtensionPolicy.ERROR):
        self.check(origin)
        if t < 0:
            raise DomainError("ray time must be nonnegative")
        target = self._toward(origin, ray)
        if target is not None:
            if origin.offset == 0.0:
                return SpiderPoint(target.leg, t)
            if target.leg == origin.leg and target.offset > origin.offset:
                return SpiderPoint(origin.leg, origin.offset + t)
            exit_leg = target.leg if target.offset > 0 and target.leg != origin.leg \
                else None
        elif isinstance(ray, Direction):
            leg = int(ray.value)
            if not 0 <= leg < self.legs:
                raise SpaceMismatchError(f"leg {leg} does not exist in {self!r}")
            if origin.offset == 0.0 or origin.leg == leg:
                return SpiderPoint(leg, origin.offset + t)
            exit_leg = leg
        else:
            self._reject_direction(ray)
        if t <= origin.offset:
            return SpiderPoint(origin.leg, origin.offset - t)
        if exit_leg is None:
            exit_leg = self._exit_leg(origin.leg)
        return SpiderPoint(exit_leg, t - origin.offset)

    def busemann(self, xi, z):
        self.check(z)
        leg = int(xi.value)
        if not 0 <= leg < self.legs:
            raise SpaceMismatchError(f"leg {leg} does not exist in {self!r}")
        return -z.offset if z.leg == leg else z.offset


# --------------------------------------------------------------------------
# cone over a cycle of quadrants

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class ConePoint:
    """Point ``(u, v)`` in quadrant ``sector``.

    ``u`` runs along the sector's first boundary ray and ``v`` along its
    second, which is the first ray of the next sector.  Use
    :meth:`Cone.point` to get the canonical representative of points lying on
    a boundary ray.
    """
    sector: int
    u: float
    v: float

    def __post_init__(self):
        u, v = float(self.u), float(self.v)
        if not (u >= 0 and v >= 0) or math.isinf(u) or math.isinf(v):
            raise DomainError("cone coordinates must be finite and nonnegative")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "sector", 0 if u == 0.0 and v == 0.0 else int(self.sector))

    @property
    def radius(self):
        return math.hypot(self.u, self.v)


class Cone(HadamardSpace):
    """Euclidean cone of total angle ``sectors * pi/2`` built from a cycle of quadrants.

    With ``sectors=5`` this is the five-quadrant complex sitting inside BHV
    tree space; it is CAT(0) because the cone angle exceeds ``2*pi``.
    """

    kind = "cone"
    point_type = ConePoint

    def __init__(self, sectors=5):
        if sectors < 4:
            raise DomainError("the cone is CAT(0) only with at least four sectors")
        self.sectors = int(sectors)
        self.total_angle = self.sectors * HALF_PI

    def __repr__(self):
        return f"Cone(sectors={self.sectors})"

    def point(self, sector, u, v):
        p = ConePoint(sector, u, v)
        self.check(p)
        return self._canon(p)

    def check(self, *points):
        super().check(*points)
        for p in points:
            if not 0 <= p.sector < self.sectors:
                raise SpaceMismatchError(f"sector {p.sector} does not exist in {self!r}")

    def _canon(self, p):
        if p.u == 0.0 and p.v > 0.0:
            return ConePoint((p.sector + 1) % self.sectors, p.v, 0.0)
        return p

    @property
    def basepoint(self):
        return ConePoint(0, 0.0, 0.0)

    def polar(self, p):
        """``(radius, angle)`` with angle in ``[0, total_angle)``."""
        return p.radius, p.sector * HALF_PI + math.atan2(p.v, p.u)

    def from_polar(self, r, phi):
        if r <= 0.0:
            return ConePoint(0, 0.0, 0.0)
        phi = phi % self.total_angle
        j = min(int(phi // HALF_PI), self.sectors - 1)
        a = min(max(phi - j * HALF_PI, 0.0), HALF_PI)
        return self._canon(ConePoint(j, max(r * math.cos(a), 0.0), max(r * math.sin(a), 0.0)))

    def _offset(self, phi1, phi2):
        """Signed shortest angular offset from phi1 to phi2."""
        delta = (phi2 - phi1) % self.total_angle
        if delta > self.total_angle / 2.0:
            delta -= self.total_angle
        return delta

    def distance(self, x, y):
        self.check(x, y)
        if (x.sector, x.u, x.v) > (y.sector, y.u, y.v):
            x, y = y, x  # fixed argument order keeps the value exactly symmetric
        r1, p1 = self.polar(x)
        r2, p2 = self.polar(y)
        delta = abs(self._offset(p1, p2))
        if r1 == 0.0 or r2 == 0.0:
            return r1 + r2
        if delta >= math.pi:
            return r1 + r2
        return math.sqrt((r1 - r2) ** 2 + 4.0 * r1 * r2 * math.sin(delta / 2.0) ** 2)

    def _radial(self, x, y):
        """True when ``y`` lies on the segment from ``x`` to the apex (or is the apex)."""
        if y.radius == 0.0:
            return True
        return (x.sector == y.sector and y.radius < x.radius
                and abs(x.u * y.v - x.v * y.u) <= 1e-15 * x.radius * y.radius)

    def _straight(self, r1, phi1, r2, delta, t):
        """Point at time ``t`` along the developed line from (r1, phi1) toward (r2, phi1+delta)."""
        qx, qy = r2 * math.cos(delta) - r1, r2 * math.sin(delta)
        n = math.hypot(qx, qy)
        px, py = r1 + t * qx / n, t * qy / n
        return self.from_polar(math.hypot(px, py), phi1 + math.atan2(py, px))

    def geodesic_point(self, x, y, t):
        d = self.distance(x, y)
        t = _check_t(t, d)
        if t == 0.0:
            return x
        if t == d:
            return y
        r1, p1 = self.polar(x)
        r2, p2 = self.polar(y)
        delta = self._offset(p1, p2)
        if r1 == 0.0 or r2 == 0.0 or abs(delta) >= math.pi:
            if t <= r1:
                return self.from_polar(r1 - t, p1)
            return self.from_polar(t - r1, p2)
        return self._straight(r1, p1, r2, delta, t)

    def _exit_angle(self, phi_in):
        """Outgoing angle after crossing the apex along the ray with angle ``phi_in``.

        Candidates make angle exactly pi with the incoming ray; the smallest
        sector index wins, then the smaller angle.
        """
        cands = [(phi_in + math.pi) % self.total_angle, (phi_in - math.pi) % self.total_angle]
        return min(cands, key=lambda a: (min(int(a // HALF_PI), self.sectors - 1), a))

    def ray_point(self, origin, ray, t, policy=ExtensionPolicy.ERROR):
        self.check(origin)
        if t < 0:
            raise DomainError("ray time must be nonnegative")
        target = self._toward(origin, ray)
        if target is None:
            self._reject_direction(ray)
        r1, p1 = self.polar(origin)
        r2, p2 = self.polar(target)
        if r1 == 0.0:
            return self.from_polar(t, p2)
        if self._radial(origin, target):
            if t <= r1:
                return self.from_polar(r1 - t, p1)
            return self.from_polar(t - r1, self._exit_angle(p1))
        delta = self._offset(p1, p2)
        if abs(delta) >= math.pi:
            if t <= r1:
                return self.from_polar(r1 - t, p1)
            return self.from_polar(t - r1, p2)
        if t == self.distance(origin, target):
            return target
        return self._straight(r1, p1, r2, delta, t)

    def from_quadrant_r3(self, x, y, z):
        """Map a point of the five quadrants of R^3 to cone coordinates.

        The quadrants, in cyclic order, are ``R+ x R+ x 0``, ``R- x R+ x 0``,
        ``R- x 0 x R+``, ``0 x R- x R+`` and ``R+ x R- x 0``.
        """
        if self.sectors != 5:
            raise UnsupportedSpaceError("the R^3 embedding exists only for five sectors")
        tol = 1e-15
        if abs(z) <= tol and x >= -tol and y >= -tol:
            return self.point(0, max(x, 0.0), max(y, 0.0))
        if abs(z) <= tol and x <= tol and y >= -tol:
            return self.point(1, max(y, 0.0), max(-x, 0.0))
        if abs(y) <= tol and x <= tol and z >= -tol:
            return self.point(2, max(-x, 0.0), max(z, 0.0))
        if abs(x) <= tol and y <= tol and z >= -tol:
            return self.point(3, max(z, 0.0), max(-y, 0.0))
        if abs(z) <= tol and x >= -tol and y <= tol:
            return self.point(4, max(-y, 0.0), max(x, 0.0))
        raise DomainError(f"({x}, {y}, {z}) is not in the five-quadrant complex")
