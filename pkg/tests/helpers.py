"""Random instances and independent checks shared by the test modules."""

import itertools
import math

import numpy as np

from hadopt.spaces import Cone, Euclidean, Hyperbolic, HyperbolicPoint, Spider
from hadopt.treespace import PhyloTree, Split, TreeSpace
from hadopt.treespace.tree import masks_compatible

LEAVES5 = ("a", "b", "c", "d", "root")
LEAVES6 = ("a", "b", "c", "d", "e", "root")


def interior_masks(n):
    full = (1 << n) - 1
    return [m for m in range(2, full) if not m & 1 and 2 <= bin(m).count("1") <= n - 2]


def maximal_topologies(n):
    masks = interior_masks(n)
    return [c for c in itertools.combinations(masks, n - 3)
            if all(masks_compatible(a, b) for a, b in itertools.combinations(c, 2))]


_TOPOS = {}


def random_tree(rng, leaves=LEAVES5, scale=2.0, p_zero=0.2):
    """Random tree: a random maximal topology with some edges contracted."""
    n = len(leaves)
    if n not in _TOPOS:
        _TOPOS[n] = maximal_topologies(n)
    topo = _TOPOS[n][rng.integers(len(_TOPOS[n]))]
    splits = []
    for m in topo:
        length = 0.0 if rng.random() < p_zero else float(rng.uniform(0.0, scale))
        splits.append(Split(m, length))
    return PhyloTree(tuple(leaves), tuple(splits))


def random_same_orthant_pair(rng, leaves=LEAVES5, scale=2.0):
    t = random_tree(rng, leaves, scale, p_zero=0.0)
    other = tuple(Split(s.mask, float(rng.uniform(0.01, scale))) for s in t.splits)
    return t, PhyloTree(t.leaves, other)


SPACE_NAMES = ("euclidean", "hyperbolic", "spider", "cone", "tree")


def make_space(name):
    return {
        "euclidean": lambda: Euclidean(3),
        "hyperbolic": Hyperbolic,
        "spider": lambda: Spider(3),
        "cone": lambda: Cone(5),
        "tree": lambda: TreeSpace(LEAVES5),
    }[name]()


def random_point(space, rng, scale=2.0):
    if isinstance(space, Euclidean):
        return space.point(*rng.uniform(-scale, scale, space.dim))
    if isinstance(space, Hyperbolic):
        return HyperbolicPoint(float(rng.uniform(0.0, 2.0 * scale)), float(rng.uniform(-math.pi, math.pi)))
    if isinstance(space, Spider):
        if rng.random() < 0.05:
            return space.basepoint
        return space.point(int(rng.integers(space.legs)), float(rng.uniform(0.0, scale)))
    if isinstance(space, Cone):
        r = rng.random()
        if r < 0.05:
            return space.basepoint
        sector = int(rng.integers(space.sectors))
        u, v = rng.uniform(0.0, scale, 2)
        if r < 0.15:
            v = 0.0  # on a boundary ray
        return space.point(sector, float(u), float(v))
    if isinstance(space, TreeSpace):
        return random_tree(rng, space.leaves, scale)
    raise TypeError(space)


# --------------------------------------------------------------------------
# exhaustive geodesic oracle


def _norm(items):
    return math.sqrt(sum(l * l for _, l in items))


def _ordered_partitions(items):
    """Every ordered partition of ``items`` into nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _ordered_partitions(rest):
        # put ``first`` into an existing block or into a new block at any position
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        for i in range(len(part) + 1):
            yield part[:i] + [[first]] + part[i:]


def brute_force_distance(t1, t2):
    """Geodesic length by minimising over every admissible leg decomposition.

    Only identical splits are factored out; every other split of either tree
    is assigned to a leg, and legs may have an empty side.  A decomposition is
    admissible when each later A-block is compatible with each earlier
    B-block and the ratios |A_i|/|B_i| are nondecreasing (0/x = 0, x/0 = inf).
    """
    e1, e2 = t1.edge_lengths, t2.edge_lengths
    common = [(e1.get(m, 0.0) - e2.get(m, 0.0)) ** 2 for m in set(e1) & set(e2)]
    items = [("A", m, l) for m, l in sorted(e1.items()) if m not in e2]
    items += [("B", m, l) for m, l in sorted(e2.items()) if m not in e1]
    best = math.inf
    for part in _ordered_partitions(items):
        legs = []
        for block in part:
            A = [(m, l) for side, m, l in block if side == "A"]
            B = [(m, l) for side, m, l in block if side == "B"]
            legs.append((A, B))
        ok = True
        for i, (Ai, _) in enumerate(legs):
            for _, Bj in legs[:i]:
                if not all(masks_compatible(ma, mb) for ma, _ in Ai for mb, _ in Bj):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        ratios = []
        for A, B in legs:
            a, b = _norm(A), _norm(B)
            ratios.append(math.inf if b == 0 else a / b)
        if any(r2 < r1 for r1, r2 in zip(ratios, ratios[1:])):
            continue
        total = sum((_norm(A) + _norm(B)) ** 2 for A, B in legs) + sum(common)
        best = min(best, total)
    return math.sqrt(best)
