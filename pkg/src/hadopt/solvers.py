"""Stochastic, incremental and cyclic-proximal methods driven by Busemann subgradients.

Each solver returns a :class:`RunTrace` holding, for every iteration ``k``,
the value ``f(x^k)``, the running best ``min_{1<=i<=k} f(x^i)`` (``x^0`` is
not counted), the gap to a known optimum and the complexity bound when one
applies.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import DomainError, ExtensionError
from .oracles import DistPower, Objective, eval_objective
from .spaces import ExtensionPolicy, HadamardSpace

LOG3 = math.log(3.0)


# --------------------------------------------------------------------------
# step schedules


@dataclass(frozen=True)
class Theory:
    """``t_k = D / (L m sqrt(k+1))``, the step of the complexity theorems."""
    D: float
    L: float
    m: int

    def __post_init__(self):
        if not (self.D > 0 and self.L > 0 and self.m >= 1):
            raise DomainError("Theory schedule needs D > 0, L > 0, m >= 1")

    def __call__(self, k):
        return self.D / (self.L * self.m * math.sqrt(k + 1))


@dataclass(frozen=True)
class Harmonic:
    """``t_k = c / (k+1)``."""
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError("Harmonic schedule needs c > 0")

    def __call__(self, k):
        return self.c / (k + 1)


class Explicit:
    """Steps from a sequence or from a callable ``k -> t_k``."""

    def __init__(self, steps):
        self._fn = steps if callable(steps) else None
        self._seq = None if callable(steps) else tuple(float(t) for t in steps)

    def __call__(self, k):
        if self._fn is not None:
            t = float(self._fn(k))
        else:
            if k >= len(self._seq):
                raise DomainError(f"explicit schedule has only {len(self._seq)} steps")
            t = self._seq[k]
        if not t > 0:
            raise DomainError(f"step t_{k} = {t} is not positive")
        return t


# --------------------------------------------------------------------------
# feasible sets


class Whole:
    """The whole space (no projection)."""

    def project(self, space, y):
        return y

    def contains(self, space, y, tol=1e-9):
        return True

    def __repr__(self):
        return "WHOLE"


WHOLE = Whole()


@dataclass(frozen=True)
class Ball:
    center: Any
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise DomainError("ball radius must be nonnegative")

    @property
    def diameter(self):
        return 2.0 * self.radius

    def project(self, space, y):
        return space.project_ball(self.center, self.radius, y)

    def contains(self, space, y, tol=1e-9):
        return space.distance(self.center, y) <= self.radius + tol


# --------------------------------------------------------------------------
# randomness


class IndexSampler:
    """Uniform indices from the PCG64 bit stream.

    Raw 64-bit outputs are mapped to ``{0, ..., m-1}`` by rejection sampling
    (draws at or above the largest multiple of ``m`` are discarded), so the
    sequence depends only on the seed and ``m``.
    """

    def __init__(self, seed=0):
        self.seed = int(seed)
        self._bits = np.random.PCG64(self.seed)

    def index(self, m):
        limit = (1 << 64) // m * m
        while True:
            r = int(self._bits.random_raw())
            if r < limit:
                return r % m


# --------------------------------------------------------------------------
# traces


@dataclass
class RunTrace:
    """Per-iteration log of a run.

    ``rows`` holds ``(k, f, f_best, gap, bound)`` tuples; undefined entries
    are NaN (``f_best`` and ``gap`` at ``k = 0``, ``bound`` for ``k < 2``).
    """
    rows: list = field(default_factory=list)
    final: Any = None
    best: Any = None
    iterates: list | None = None

    HEADER = ("k", "f", "f_best", "gap", "bound")

    @property
    def k(self):
        return np.array([r[0] for r in self.rows])

    @property
    def f(self):
        return np.array([r[1] for r in self.rows])

    @property
    def f_best(self):
        return np.array([r[2] for r in self.rows])

    @property
    def gap(self):
        return np.array([r[3] for r in self.rows])

    @property
    def bound(self):
        return np.array([r[4] for r in self.rows])

    def to_csv(self, fh=None, stride=1):
        """Write the trace as CSV (12 significant digits, LF newlines).

        Rows ``k`` with ``k % stride == 0`` are written, plus the last row.
        Returns the text when ``fh`` is None.
        """
        if stride < 1:
            raise DomainError("stride must be >= 1")
        own = fh is None
        if own:
            fh = io.StringIO()
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.HEADER)
        last = len(self.rows) - 1
        for idx, row in enumerate(self.rows):
            if row[0] % stride == 0 or idx == last:
                w.writerow([row[0]] + [_fmt(v) for v in row[1:]])
        if own:
            return fh.getvalue()


def _fmt(v):
    return "nan" if math.isnan(v) else f"{v:.12g}"


class _Recorder:
    def __init__(self, f, f_opt, bound, keep_iterates):
        self.f = f
        self.f_opt = f_opt
        self.bound = bound
        self.trace = RunTrace(iterates=[] if keep_iterates else None)
        self.best_val = math.inf

    def record(self, k, x):
        val = self.f(x)
        nan = math.nan
        if k == 0:
            self.trace.rows.append((0, val, nan, nan, nan))
        else:
            if val < self.best_val:
                self.best_val = val
                self.trace.best = x
            gap = self.best_val - self.f_opt if self.f_opt is not None else nan
            b = self.bound(k) if (self.bound is not None and k >= 2) else nan
            self.trace.rows.append((k, val, self.best_val, gap, b))
        if self.trace.iterates is not None:
            self.trace.iterates.append(x)
        self.trace.final = x


# --------------------------------------------------------------------------
# bounds


def complexity_bound(kind, m, k, L=None, D=None, f0=None):
    """Worst-case bound on ``f_best^k - f_opt`` for ``k >= 2``.

    ``kind`` is ``"stochastic"`` or ``"incremental"`` (both
    ``2(1+log 3) m L D / sqrt(k+2)``, in expectation for the former) or
    ``"median"`` (``4(1+log 3) m f(x^0) / sqrt(k+2)``).
    """
    if k < 2:
        raise DomainError("the bound holds for k >= 2")
    if kind in ("stochastic", "incremental"):
        if L is None or D is None:
            raise DomainError("need L and D")
        return 2.0 * (1.0 + LOG3) * m * L * D / math.sqrt(k + 2)
    if kind == "median":
        if f0 is None:
            raise DomainError("need f(x0)")
        return 4.0 * (1.0 + LOG3) * m * f0 / math.sqrt(k + 2)
    raise DomainError(f"unknown bound kind {kind!r}")


def _auto_bound(obj, schedule, kind):
    if isinstance(schedule, Theory):
        return lambda k: complexity_bound(kind, obj.m, k, L=schedule.L, D=schedule.D)
    return None


# --------------------------------------------------------------------------
# generic methods


def _step(obj, feasible, x, i, t, policy):
    g = obj.subgradient(i, x)
    if g.is_zero:
        return x
    y = obj.space.ray_point(x, g.ray, g.speed * t, policy)
    return feasible.project(obj.space, y)


def _check_start(obj, feasible, x0, K):
    obj.space.check(x0)
    if K < 1:
        raise DomainError("need at least one iteration")
    if not feasible.contains(obj.space, x0):
        raise DomainError("x0 lies outside the feasible set")


def stochastic_subgradient(obj: Objective, feasible, x0, schedule, rng, K, *,
                           f_opt=None, policy=ExtensionPolicy.ERROR, bound="auto",
                           keep_iterates=False) -> RunTrace:
    """Stochastic Busemann subgradient method.

    At step ``k`` draw ``i`` uniformly, take a subgradient ``[xi, s]`` of
    component ``i`` at ``x^k`` and set ``x^{k+1} = P_C(r_{x^k, xi}(s t_k))``.

    Parameters
    ----------
    rng : IndexSampler or int
        Index source; an int is used as the seed.
    bound : callable, None or "auto"
        ``k -> bound`` recorded in the trace.  "auto" uses the complexity
        theorem when ``schedule`` is a :class:`Theory` schedule.
    """
    _check_start(obj, feasible, x0, K)
    if not isinstance(rng, IndexSampler):
        rng = IndexSampler(rng)
    if bound == "auto":
        bound = _auto_bound(obj, schedule, "stochastic")
    rec = _Recorder(obj, f_opt, bound, keep_iterates)
    x = x0
    rec.record(0, x)
    for k in range(K):
        i = rng.index(obj.m)
        try:
            x = _step(obj, feasible, x, i, schedule(k), policy)
        except ExtensionError as exc:
            raise ExtensionError(exc.overshoot, iteration=k) from exc
        rec.record(k + 1, x)
    return rec.trace


def incremental_subgradient(obj: Objective, feasible, x0, schedule, K, *,
                            f_opt=None, policy=ExtensionPolicy.ERROR, bound="auto",
                            keep_iterates=False) -> RunTrace:
    """Incremental Busemann subgradient method: one sweep over all components per step."""
    _check_start(obj, feasible, x0, K)
    if bound == "auto":
        bound = _auto_bound(obj, schedule, "incremental")
    rec = _Recorder(obj, f_opt, bound, keep_iterates)
    x = x0
    rec.record(0, x)
    for k in range(K):
        t = schedule(k)
        for i in range(obj.m):
            try:
                x = _step(obj, feasible, x, i, t, policy)
            except ExtensionError as exc:
                raise ExtensionError(exc.overshoot, iteration=k) from exc
        rec.record(k + 1, x)
    return rec.trace


# --------------------------------------------------------------------------
# median problem


def _weights(weights, m):
    if weights is None:
        return [1.0 / m] * m
    w = [float(v) for v in weights]
    if len(w) != m:
        raise DomainError("need one weight per anchor")
    if any(v < 0 for v in w) or sum(w) <= 0:
        raise DomainError("weights must be nonnegative and not all zero")
    total = math.fsum(w)
    if abs(total - 1.0) > 1e-12:
        warnings.warn(f"weights sum to {total}; normalising", stacklevel=3)
        w = [v / total for v in w]
    return w


def median_setup(space: HadamardSpace, anchors: Sequence, weights=None, x0=None):
    """Objective ``sum w_i d(., a_i)`` and the ball ``B_{f(x0)/w*}(a*)`` containing every median.

    ``a*`` is the anchor of largest weight (lowest index on ties) and every
    component speed is bounded by ``L = w*``.
    """
    anchors = tuple(anchors)
    if not anchors:
        raise DomainError("need at least one anchor")
    space.check(*anchors)
    w = _weights(weights, len(anchors))
    w_star = max(w)
    a_star = anchors[w.index(w_star)]
    obj = Objective(space, [DistPower(a, wi, 1.0) for a, wi in zip(anchors, w)],
                    lipschitz=[w_star] * len(anchors))
    if x0 is None:
        x0 = a_star
    f0 = eval_objective(obj, x0)
    return obj, Ball(a_star, f0 / w_star)


def pmean_setup(space: HadamardSpace, anchors: Sequence, weights=None, x0=None, p=2.0):
    """Objective ``sum w_i d(., a_i)**p`` with a feasible ball holding every minimiser.

    From ``w* d(x*, a*)**p <= f(x0)`` the ball has radius ``(f(x0)/w*)**(1/p)``;
    speeds are bounded on it by ``p w_i (d(a*, a_i) + radius)**(p-1)``.
    """
    anchors = tuple(anchors)
    if not anchors:
        raise DomainError("need at least one anchor")
    if p < 1:
        raise DomainError("p must be >= 1")
    space.check(*anchors)
    w = _weights(weights, len(anchors))
    w_star = max(w)
    a_star = anchors[w.index(w_star)]
    comps = [DistPower(a, wi, p) for a, wi in zip(anchors, w)]
    if x0 is None:
        x0 = a_star
    f0 = math.fsum(wi * space.distance(x0, a) ** p for a, wi in zip(anchors, w))
    radius = (f0 / w_star) ** (1.0 / p)
    lips = [p * wi * (space.distance(a_star, a) + radius) ** (p - 1.0) for a, wi in zip(anchors, w)]
    return Objective(space, comps, lipschitz=lips), Ball(a_star, radius)


def _median_parts(space, anchors, weights, x0, schedule):
    obj, ball = median_setup(space, anchors, weights, x0)
    f0 = eval_objective(obj, x0)
    w_star = obj.L
    if schedule is None:
        # algorithm-box step 2 w_i f(x0) / (w* m sqrt(k+1)): speed w_i times D / (m sqrt(k+1))
        schedule = Theory(D=2.0 * f0 / w_star, L=1.0, m=obj.m) if f0 > 0 else Harmonic(1.0)
    bound = None
    if f0 > 0:
        bound = lambda k: complexity_bound("median", obj.m, k, f0=f0)
    return obj, ball, schedule, bound


def stochastic_median(space, anchors, weights=None, x0=None, K=1000, seed=0, *,
                      schedule=None, f_opt=None, policy=ExtensionPolicy.ERROR,
                      keep_iterates=False) -> RunTrace:
    """Stochastic-subgradient median algorithm.

    ``x^{k+1} = P_B(r_{x^k, a_i}(2 w_i f(x^0) / (w* m sqrt(k+1))))`` with ``i``
    uniform and ``B = B_{f(x^0)/w*}(a*)``.  Passing ``schedule`` replaces
    ``t_k`` while keeping speed ``w_i`` and the projection.  The trace's
    bound column carries ``4(1+log 3) m f(x^0) / sqrt(k+2)``.
    """
    if x0 is None:
        raise DomainError("x0 is required")
    obj, ball, schedule, bound = _median_parts(space, anchors, weights, x0, schedule)
    return stochastic_subgradient(obj, ball, x0, schedule, IndexSampler(seed), K, f_opt=f_opt,
                                  policy=policy, bound=bound, keep_iterates=keep_iterates)


def incremental_median(space, anchors, weights=None, x0=None, K=1000, *,
                       schedule=None, f_opt=None, policy=ExtensionPolicy.ERROR,
                       keep_iterates=False) -> RunTrace:
    """Incremental median algorithm: the deterministic sweep version of :func:`stochastic_median`."""
    if x0 is None:
        raise DomainError("x0 is required")
    obj, ball, schedule, bound = _median_parts(space, anchors, weights, x0, schedule)
    return incremental_subgradient(obj, ball, x0, schedule, K, f_opt=f_opt, policy=policy,
                                   bound=bound, keep_iterates=keep_iterates)


def cyclic_proximal_median(space, anchors, weights=None, x0=None, schedule=None, K=1000, *,
                           f_opt=None, keep_iterates=False) -> RunTrace:
    """Cyclic proximal point algorithm for the median.

    Each inner step moves from ``x`` toward ``a_i`` by
    ``min(d(x, a_i), w_i t_k)``, so it never passes the anchor and never
    needs a ray extension.
    """
    if x0 is None:
        raise DomainError("x0 is required")
    if schedule is None:
        schedule = Harmonic(1.0)
    obj, _ = median_setup(space, anchors, weights, x0)
    if K < 1:
        raise DomainError("need at least one iteration")
    rec = _Recorder(obj, f_opt, None, keep_iterates)
    x = x0
    rec.record(0, x)
    for k in range(K):
        t = schedule(k)
        for c in obj.components:
            d = space.distance(x, c.anchor)
            if d > 0.0:
                x = space.geodesic_point(x, c.anchor, min(d, c.weight * t))
        rec.record(k + 1, x)
    return rec.trace
