"""High-accuracy reference optima for median and p-mean problems.

These routines are independent of the subgradient solvers and serve as the
``f_opt`` against which gaps are measured.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import UnsupportedSpaceError
from .spaces import Euclidean, EuclideanPoint
from .treespace import PhyloTree, Split, TreeSpace, bhv_distance
from .treespace.tree import masks_compatible

SQRT3 = math.sqrt(3.0)


def example7_1_fopt():
    """Closed-form optimum of the EXAMPLE7_1 median."""
    inner = 43 + 11 * SQRT3 + math.sqrt(37 * (49 + 22 * SQRT3))
    return math.sqrt(inner / 2) / 3


def example7_1_minimiser():
    """Planar coordinates of the EXAMPLE7_1 median ({a,b} edge, {c,d} edge)."""
    return ((2657 - 1038 * SQRT3) / 1898, (3006 - 1369 * SQRT3) / 5694)


def spine_fopt(coords, weights=None):
    """Median over quadrants glued along a common ray, restricted to that ray.

    ``coords`` lists ``(off_spine, spine)`` pairs, one per anchor in its own
    quadrant.  A point at height ``y`` on the ray is at distance
    ``sqrt((y - spine)**2 + off_spine**2)`` from each anchor.  Returns
    ``(y_opt, f_opt)``.
    """
    coords = [(float(a), float(b)) for a, b in coords]
    w = [1.0 / len(coords)] * len(coords) if weights is None else [float(v) for v in weights]

    def f(y):
        return math.fsum(wi * math.hypot(y - s, o) for (o, s), wi in zip(coords, w))

    hi = max(s for _, s in coords) + max(o for o, _ in coords) + 1.0
    res = minimize_scalar(f, bounds=(0.0, hi), method="bounded", options={"xatol": 1e-12})
    return float(res.x), float(f(res.x))


def weiszfeld(points, weights=None, tol=1e-14, max_iter=100000):
    """Weighted geometric median in R^n.  Returns ``(x, f(x))``.

    Anchors are tested first with the exact optimality condition
    ``|sum_{j != i} w_j (a_i - a_j)/|a_i - a_j|| <= w_i``, which the plain
    fixed-point iteration cannot reach.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    m = len(P)
    w = np.full(m, 1.0 / m) if weights is None else np.asarray(weights, dtype=float)

    def f(x):
        return math.fsum(w * np.linalg.norm(P - x, axis=1))

    for i in range(m):
        diff = P[i] - P
        norms = np.linalg.norm(diff, axis=1)
        mask = norms > 0
        pull = (w[mask, None] * diff[mask] / norms[mask, None]).sum(axis=0)
        if np.linalg.norm(pull) <= w[~mask].sum() + 1e-15:
            return P[i].copy(), f(P[i])

    x = (w[:, None] * P).sum(axis=0) / w.sum()
    for _ in range(max_iter):
        d = np.linalg.norm(P - x, axis=1)
        if np.any(d == 0):
            break
        c = w / d
        x_new = (c[:, None] * P).sum(axis=0) / c.sum()
        if np.linalg.norm(x_new - x) <= tol * max(1.0, np.linalg.norm(x)):
            x = x_new
            break
        x = x_new
    return x, f(x)


def _maximal_topologies(n):
    """Every maximal set of pairwise compatible interior splits on ``n`` leaves."""
    full = (1 << n) - 1
    masks = [m for m in range(2, full) if not m & 1 and 2 <= bin(m).count("1") <= n - 2]
    out = []
    for combo in itertools.combinations(masks, n - 3):
        if all(masks_compatible(a, b) for a, b in itertools.combinations(combo, 2)):
            out.append(combo)
    return out


def tree_median_fopt(anchors, weights=None, p=1.0, starts=4, seed=0):
    """Reference optimum of ``sum w_i d(x, a_i)**p`` over tree space (up to six leaves).

    Minimises over every closed maximal orthant, where the objective is an
    ordinary convex function of the edge lengths, and keeps the best value.
    Returns ``(tree, f_opt)``.
    """
    anchors = tuple(anchors)
    leaves = anchors[0].leaves
    n = len(leaves)
    if n > 6:
        raise UnsupportedSpaceError("orthant enumeration is limited to six leaves")
    m = len(anchors)
    w = [1.0 / m] * m if weights is None else [float(v) for v in weights]
    scale = max(max((s.length for a in anchors for s in a.splits), default=1.0), 1.0)
    rng = np.random.default_rng(seed)

    def objective(masks, lengths):
        t = PhyloTree(leaves, tuple(Split(mk, max(0.0, l)) for mk, l in zip(masks, lengths)))
        return math.fsum(wi * bhv_distance(t, a) ** p for a, wi in zip(anchors, w)), t

    best_val, best_tree = math.inf, None
    for masks in _maximal_topologies(n):
        bounds = [(0.0, 4 * scale)] * len(masks)
        inits = [np.zeros(len(masks))]
        for a in anchors:
            inits.append(np.array([a.edge_lengths.get(mk, 0.0) for mk in masks]))
        inits.extend(rng.uniform(0, scale, len(masks)) for _ in range(starts))
        for x0 in inits:
            res = minimize(lambda v: objective(masks, v)[0], x0, method="Nelder-Mead", bounds=bounds,
                           options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 20000, "maxfev": 40000})
            val, t = objective(masks, res.x)
            if val < best_val:
                best_val, best_tree = val, t
    return best_tree, best_val


def reference_fopt(space, anchors, weights=None, p=1.0):
    """Reference optimum for a median (``p = 1``) or p-mean on a supported space."""
    anchors = tuple(anchors)
    if len(anchors) == 1:
        return 0.0
    if isinstance(space, Euclidean):
        pts = [a.coords if isinstance(a, EuclideanPoint) else a for a in anchors]
        if p == 1.0:
            return weiszfeld(pts, weights)[1]
        P = np.asarray(pts, dtype=float)
        w = np.full(len(P), 1.0 / len(P)) if weights is None else np.asarray(weights, dtype=float)
        fun = lambda x: float(np.sum(w * np.linalg.norm(P - x, axis=1) ** p))
        res = minimize(fun, (w[:, None] * P).sum(axis=0) / w.sum(), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 50000})
        return float(res.fun)
    if isinstance(space, TreeSpace):
        return tree_median_fopt(anchors, weights, p)[1]
    raise UnsupportedSpaceError(f"no reference solver for {space!r}")
