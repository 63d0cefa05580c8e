"""BHV tree space wired into the common space contract."""

from __future__ import annotations

from ..errors import DomainError, ExtensionError, UnsupportedSpaceError
from ..spaces import RANGE_SLACK, Direction, ExtensionPolicy, HadamardSpace, ZERO, TowardPoint
from .gtp import bhv_distance, bhv_point
from .tree import PhyloTree


def tree_ray_point(origin, target, t, policy=ExtensionPolicy.ERROR, pendants=False):
    """Follow the geodesic from ``origin`` through ``target`` for time ``t``.

    Extensions past ``target`` are not unique in tree space, so under
    ``ExtensionPolicy.ERROR`` asking for ``t > d(origin, target)`` raises
    :class:`ExtensionError`; ``ExtensionPolicy.CLAMP`` returns ``target``.
    """
    if t < 0:
        raise DomainError("ray time must be nonnegative")
    d = bhv_distance(origin, target, pendants)
    if t <= d:
        return bhv_point(origin, target, t, pendants)
    # rounding in s * t_k can land a hair past the end
    if policy is ExtensionPolicy.CLAMP or t - d <= RANGE_SLACK * max(1.0, d):
        return target
    raise ExtensionError(t - d)


class TreeSpace(HadamardSpace):
    """BHV space of unrooted trees on a fixed leaf set.

    Points are :class:`PhyloTree` instances.  Pendant edges join the metric as
    extra Euclidean coordinates only when ``pendants=True``.
    """

    kind = "tree"
    point_type = PhyloTree

    def __init__(self, leaves=None, pendants=False):
        self.leaves = None if leaves is None else tuple(sorted(leaves))
        self.pendants = bool(pendants)

    def __repr__(self):
        return f"TreeSpace(leaves={self.leaves!r}, pendants={self.pendants})"

    def check(self, *points):
        super().check(*points)
        if self.leaves is not None:
            for p in points:
                if p.leaves != self.leaves:
                    raise DomainError("tree is on a different leaf set than the space")

    @property
    def basepoint(self):
        if self.leaves is None:
            raise UnsupportedSpaceError("the star tree needs a fixed leaf set")
        return PhyloTree.star(self.leaves)

    def distance(self, x, y):
        self.check(x, y)
        return bhv_distance(x, y, self.pendants)

    def geodesic_point(self, x, y, t):
        self.check(x, y)
        return bhv_point(x, y, t, self.pendants)

    def ray_point(self, origin, ray, t, policy=ExtensionPolicy.ERROR):
        self.check(origin)
        if isinstance(ray, TowardPoint):
            target = self._toward(origin, ray)
            return tree_ray_point(origin, target, t, policy, self.pendants)
        if isinstance(ray, Direction) or ray is ZERO:
            self._reject_direction(ray)
        raise DomainError(f"unknown ray descriptor {ray!r}")
