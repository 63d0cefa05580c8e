"""Geodesics in BHV tree space by successive refinement of the support.

A geodesic between trees T and T' is described by the splits the two trees
share (``common``) and an ordered list of legs ``(A_i, B_i)``.  Along the
geodesic the splits in ``A_i`` shrink to zero while those in ``B_i`` grow from
zero, leg ``i`` switching over at normalised time ``|A_i| / (|A_i| + |B_i|)``.
Starting from the single cone-path leg, each leg is split whenever the
minimum-weight vertex cover of its incompatibility graph (weights
``(len/|A|)^2`` and ``(len/|B|)^2``) has total weight below one.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

from ..errors import DomainError
from .tree import PhyloTree, Split, masks_compatible

# the cover-weight < 1 test must beat this margin to split a leg
COVER_GUARD = 1e-12


@dataclass(frozen=True)
class Leg:
    A: tuple  # (mask, length) pairs from the first tree
    B: tuple  # (mask, length) pairs from the second tree

    @cached_property
    def a_norm(self):
        return math.sqrt(sum(l * l for _, l in self.A))

    @cached_property
    def b_norm(self):
        return math.sqrt(sum(l * l for _, l in self.B))

    @property
    def ratio(self):
        return self.a_norm / self.b_norm


@dataclass(frozen=True)
class GeodesicSupport:
    common: tuple  # (mask, length in T, length in T') triples
    legs: tuple

    @cached_property
    def squared_length(self):
        total = sum((leg.a_norm + leg.b_norm) ** 2 for leg in self.legs)
        return total + sum((l1 - l2) ** 2 for _, l1, l2 in self.common)


def min_weight_vertex_cover(left, right, edges):
    """Minimum-weight vertex cover of a bipartite graph via max flow.

    ``left`` and ``right`` are lists of nonnegative weights; ``edges`` lists
    ``(i, j)`` pairs.  Returns ``(weight, left_cover, right_cover)`` with the
    covers as sorted index lists.  Augmenting paths are found breadth-first
    (Edmonds-Karp) on the network source -> left (w) -> right (inf) -> sink (w).
    """
    nl, nr = len(left), len(right)
    src, snk = nl + nr, nl + nr + 1
    size = nl + nr + 2
    cap = [dict() for _ in range(size)]

    def add(u, v, c):
        cap[u][v] = cap[u].get(v, 0.0) + c
        cap[v].setdefault(u, 0.0)

    for i, w in enumerate(left):
        add(src, i, w)
    for j, w in enumerate(right):
        add(nl + j, snk, w)
    for i, j in edges:
        add(i, nl + j, math.inf)

    eps = 1e-15
    while True:
        prev = [-1] * size
        prev[src] = src
        queue = deque([src])
        while queue and prev[snk] < 0:
            u = queue.popleft()
            for v in sorted(cap[u]):
                if prev[v] < 0 and cap[u][v] > eps:
                    prev[v] = u
                    queue.append(v)
        if prev[snk] < 0:
            break
        bottleneck = math.inf
        v = snk
        while v != src:
            u = prev[v]
            bottleneck = min(bottleneck, cap[u][v])
            v = u
        v = snk
        while v != src:
            u = prev[v]
            cap[u][v] -= bottleneck
            cap[v][u] += bottleneck
            v = u

    # source side of the min cut: vertices still reachable in the residual graph
    reach = {src}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v, c in cap[u].items():
            if v not in reach and c > eps:
                reach.add(v)
                queue.append(v)
    left_cover = [i for i in range(nl) if i not in reach]
    right_cover = [j for j in range(nr) if nl + j in reach]
    weight = sum(left[i] for i in left_cover) + sum(right[j] for j in right_cover)
    return weight, left_cover, right_cover


def _refine(leg):
    """Split ``leg`` in two when a cheap vertex cover exists, else return None."""
    if len(leg.A) < 2 or len(leg.B) < 2:
        return None
    a2 = sum(l * l for _, l in leg.A)
    b2 = sum(l * l for _, l in leg.B)
    left = [l * l / a2 for _, l in leg.A]
    right = [l * l / b2 for _, l in leg.B]
    edges = [(i, j) for i, (ma, _) in enumerate(leg.A)
             for j, (mb, _) in enumerate(leg.B) if not masks_compatible(ma, mb)]
    if len(edges) == len(leg.A) * len(leg.B):
        # complete bipartite: every cover contains a whole side, weight 1
        return None
    weight, lc, rc = min_weight_vertex_cover(left, right, edges)
    if weight >= 1.0 - COVER_GUARD:
        return None
    lc, rc = set(lc), set(rc)
    c1 = tuple(e for i, e in enumerate(leg.A) if i in lc)
    c2 = tuple(e for i, e in enumerate(leg.A) if i not in lc)
    d1 = tuple(e for j, e in enumerate(leg.B) if j not in rc)
    d2 = tuple(e for j, e in enumerate(leg.B) if j in rc)
    if not (c1 and c2 and d1 and d2):
        return None
    return Leg(c1, d1), Leg(c2, d2)


def _check_pair(t1, t2):
    if not isinstance(t1, PhyloTree) or not isinstance(t2, PhyloTree):
        raise DomainError("tree-space operations need PhyloTree arguments")
    if t1.leaves != t2.leaves:
        raise DomainError("trees are on different leaf sets")


@lru_cache(maxsize=65536)
def gtp_geodesic(t1: PhyloTree, t2: PhyloTree) -> GeodesicSupport:
    """Geodesic support between two trees on the same leaf set."""
    _check_pair(t1, t2)
    e1, e2 = t1.edge_lengths, t2.edge_lengths
    common = []
    A, B = [], []
    for m in sorted(e1):
        if m in e2:
            common.append((m, e1[m], e2[m]))
        elif all(masks_compatible(m, f) for f in e2):
            common.append((m, e1[m], 0.0))
        else:
            A.append((m, e1[m]))
    for m in sorted(e2):
        if m in e1:
            continue
        if all(masks_compatible(m, f) for f in e1):
            common.append((m, 0.0, e2[m]))
        else:
            B.append((m, e2[m]))
    common.sort()
    legs = [Leg(tuple(A), tuple(B))] if A else []
    i = 0
    while i < len(legs):
        parts = _refine(legs[i])
        if parts is None:
            i += 1
        else:
            legs[i:i + 1] = parts
    return GeodesicSupport(tuple(common), tuple(legs))


def _pendant_sq(t1, t2):
    if t1.pendants is None and t2.pendants is None:
        return 0.0
    p1 = t1.pendants or (0.0,) * t1.n_leaves
    p2 = t2.pendants or (0.0,) * t2.n_leaves
    return sum((a - b) ** 2 for a, b in zip(p1, p2))


def _order_key(t):
    return (t.splits, t.pendants or ())


def bhv_distance(t1: PhyloTree, t2: PhyloTree, pendants=False) -> float:
    """Length of the BHV geodesic; ``pendants`` adds leaf edges as Euclidean coordinates."""
    if _order_key(t2) < _order_key(t1):
        t1, t2 = t2, t1  # fixed argument order keeps the value exactly symmetric
    sq = gtp_geodesic(t1, t2).squared_length
    if pendants:
        sq += _pendant_sq(t1, t2)
    return math.sqrt(sq)


def bhv_point(t1: PhyloTree, t2: PhyloTree, t: float, pendants=False) -> PhyloTree:
    """Tree at distance ``t`` from ``t1`` along the geodesic to ``t2``."""
    d = bhv_distance(t1, t2, pendants)
    if t < -1e-12 or t > d + 1e-12 * max(1.0, d):
        raise DomainError(f"t={t!r} outside [0, {d!r}]")
    if t <= 0.0:
        return t1
    if t >= d:
        return t2
    lam = t / d
    support = gtp_geodesic(t1, t2)
    splits = []
    for m, l1, l2 in support.common:
        splits.append(Split(m, (1.0 - lam) * l1 + lam * l2))
    for leg in support.legs:
        a, b = leg.a_norm, leg.b_norm
        progress = lam * (a + b)
        if progress < a:
            scale = (a - progress) / a
            splits.extend(Split(m, l * scale) for m, l in leg.A)
        elif progress > a:
            scale = (progress - a) / b
            splits.extend(Split(m, l * scale) for m, l in leg.B)
    pend = None
    if t1.pendants is not None or t2.pendants is not None:
        p1 = t1.pendants or (0.0,) * t1.n_leaves
        p2 = t2.pendants or (0.0,) * t2.n_leaves
        pend = tuple((1.0 - lam) * a + lam * b for a, b in zip(p1, p2))
    return PhyloTree(t1.leaves, tuple(splits), pend)
