"""Busemann subgradient oracles for sums of distance-type functions.

A Busemann subgradient at ``x`` is a ray issuing from ``x`` together with a
speed ``s >= 0``.  The solvers move along that ray for time ``s * t_k``.  For
``f = phi(d(., a))`` with ``phi`` convex and nondecreasing the ray heads
toward ``a`` and the speed is ``phi'(d(x, a))``; at ``x == a`` the zero
subgradient certifies a minimiser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import DomainError, SpaceMismatchError, UnsupportedSpaceError
from .spaces import ZERO, Direction, HadamardSpace, TowardPoint

# points closer than this count as coinciding with an anchor
COINCIDE_TOL = 1e-12


@dataclass(frozen=True)
class BusemannSubgradient:
    ray: Any
    speed: float

    def __post_init__(self):
        if self.speed < 0:
            raise DomainError("speed must be nonnegative")
        if (self.speed == 0) != (self.ray is ZERO):
            raise DomainError("speed is zero exactly when the ray is ZERO")

    @property
    def is_zero(self):
        return self.ray is ZERO


ZERO_SUBGRADIENT = BusemannSubgradient(ZERO, 0.0)


# --------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class DistPower:
    """``weight * d(x, anchor) ** exponent`` with exponent >= 1."""
    anchor: Any
    weight: float = 1.0
    exponent: float = 1.0

    def __post_init__(self):
        if self.weight < 0 or self.exponent < 1:
            raise DomainError("DistPower needs weight >= 0 and exponent >= 1")


@dataclass(frozen=True)
class Huber:
    """Smoothed absolute distance to ``anchor``.

    ``weight * d**2 / (2*threshold)`` when ``d <= threshold`` and
    ``weight * (d - threshold/2)`` beyond, so the slope never exceeds
    ``weight``.
    """
    anchor: Any
    weight: float = 1.0
    threshold: float = 1.0

    def __post_init__(self):
        if self.weight < 0 or not self.threshold > 0:
            raise DomainError("Huber needs weight >= 0 and threshold > 0")


@dataclass(frozen=True)
class DistBall:
    """Distance to the closed ball ``B_radius(anchor)``: ``max(0, d(x, anchor) - radius)``."""
    anchor: Any
    radius: float = 0.0

    def __post_init__(self):
        if self.radius < 0:
            raise DomainError("DistBall radius must be nonnegative")


@dataclass(frozen=True)
class DistHoroball:
    """Distance to the horoball ``{b_direction <= 0}``: ``max(0, b_direction(x))``."""
    direction: Direction


@dataclass(frozen=True)
class MaxOfDistances:
    """``max_i d(x, anchors[i])``."""
    anchors: tuple

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if not self.anchors:
            raise DomainError("MaxOfDistances needs at least one anchor")


Component = DistPower | Huber | DistBall | DistHoroball | MaxOfDistances


def subgrad_distance(space: HadamardSpace, a, x) -> BusemannSubgradient:
    """Busemann subgradient of ``d(., a)`` at ``x``."""
    space.check(a, x)
    if x == a or space.distance(x, a) <= COINCIDE_TOL:
        return ZERO_SUBGRADIENT
    return BusemannSubgradient(TowardPoint(a), 1.0)


def eval_component(space: HadamardSpace, c: Component, x) -> float:
    if isinstance(c, DistPower):
        return c.weight * space.distance(x, c.anchor) ** c.exponent
    if isinstance(c, Huber):
        d = space.distance(x, c.anchor)
        if d <= c.threshold:
            return c.weight * d * d / (2.0 * c.threshold)
        return c.weight * (d - c.threshold / 2.0)
    if isinstance(c, DistBall):
        return max(0.0, space.distance(x, c.anchor) - c.radius)
    if isinstance(c, DistHoroball):
        return max(0.0, space.busemann(c.direction, x))
    if isinstance(c, MaxOfDistances):
        return max(space.distance(x, a) for a in c.anchors)
    raise SpaceMismatchError(f"unknown component {c!r}")


def subgrad_component(space: HadamardSpace, c: Component, x) -> BusemannSubgradient:
    """One Busemann subgradient of component ``c`` at ``x`` (deterministic choice)."""
    if isinstance(c, DistPower):
        d = space.distance(x, c.anchor)
        if d <= COINCIDE_TOL or c.weight == 0.0:
            return ZERO_SUBGRADIENT
        return BusemannSubgradient(TowardPoint(c.anchor), c.exponent * c.weight * d ** (c.exponent - 1.0))
    if isinstance(c, Huber):
        d = space.distance(x, c.anchor)
        if d <= COINCIDE_TOL or c.weight == 0.0:
            return ZERO_SUBGRADIENT
        return BusemannSubgradient(TowardPoint(c.anchor), c.weight * min(d, c.threshold) / c.threshold)
    if isinstance(c, DistBall):
        if space.distance(x, c.anchor) > c.radius:
            return BusemannSubgradient(TowardPoint(c.anchor), 1.0)
        return ZERO_SUBGRADIENT
    if isinstance(c, DistHoroball):
        if not space.supports_directions:
            raise UnsupportedSpaceError(f"{space!r} has no boundary directions")
        if space.busemann(c.direction, x) > 0.0:
            return BusemannSubgradient(c.direction, 1.0)
        return ZERO_SUBGRADIENT
    if isinstance(c, MaxOfDistances):
        dists = [space.distance(x, a) for a in c.anchors]
        best = max(range(len(dists)), key=lambda i: (dists[i], -i))
        return subgrad_distance(space, c.anchors[best], x)
    raise SpaceMismatchError(f"unknown component {c!r}")


def component_lipschitz(c: Component, radius_max=None) -> float:
    """Bound on every subgradient speed of ``c``.

    Powers above one have no global bound; ``radius_max`` must then bound
    ``d(x, anchor)`` over the feasible set.
    """
    if isinstance(c, DistPower):
        if c.exponent == 1.0:
            return c.weight
        if radius_max is None:
            raise DomainError("exponent > 1 needs a bound on the distance to the anchor")
        return c.exponent * c.weight * radius_max ** (c.exponent - 1.0)
    if isinstance(c, Huber):
        return c.weight
    if isinstance(c, (DistBall, DistHoroball, MaxOfDistances)):
        return 1.0
    raise SpaceMismatchError(f"unknown component {c!r}")


@dataclass
class Objective:
    """Ordered sum of components over one space.

    ``lipschitz`` holds one speed bound per component; leave it empty to
    derive it (which fails for powers above one unless ``radius_max`` is
    given).
    """
    space: HadamardSpace
    components: Sequence[Component]
    lipschitz: Sequence[float] = field(default_factory=tuple)
    radius_max: float | None = None

    def __post_init__(self):
        self.components = tuple(self.components)
        if not self.components:
            raise DomainError("an objective needs at least one component")
        if not self.lipschitz:
            self.lipschitz = tuple(component_lipschitz(c, self.radius_max) for c in self.components)
        self.lipschitz = tuple(float(l) for l in self.lipschitz)
        if len(self.lipschitz) != len(self.components) or not all(math.isfinite(l) for l in self.lipschitz):
            raise DomainError("need one finite Lipschitz bound per component")

    @property
    def m(self):
        return len(self.components)

    @property
    def L(self):
        return max(self.lipschitz)

    def __call__(self, x):
        return eval_objective(self, x)

    def subgradient(self, i, x):
        return subgrad_component(self.space, self.components[i], x)


def eval_objective(obj: Objective, x) -> float:
    return math.fsum(eval_component(obj.space, c, x) for c in obj.components)
