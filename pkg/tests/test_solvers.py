import io
import math

import numpy as np
import pytest

from hadopt.errors import DomainError, ExtensionError
from hadopt.oracles import DistPower, Objective, eval_objective
from hadopt.presets import EXAMPLE7_1, EXAMPLE7_2, EXAMPLE7_2_COORDS, off_spine_length
from hadopt.reference import example7_1_fopt, spine_fopt, weiszfeld
from hadopt.solvers import (WHOLE, Ball, Explicit, Harmonic, IndexSampler, Theory, complexity_bound,
                            cyclic_proximal_median, incremental_median, incremental_subgradient,
                            median_setup, pmean_setup, stochastic_median, stochastic_subgradient)
from hadopt.spaces import Euclidean, ExtensionPolicy

from helpers import make_space, random_point

R1 = Euclidean(1)


def _line_objective():
    return Objective(R1, [DistPower(R1.point(0.0))])


# --------------------------------------------------------------------------
# schedules and bounds


def test_schedules():
    assert Theory(2.0, 0.5, 4)(3) == pytest.approx(2.0 / (0.5 * 4 * 2))
    assert Harmonic(3.0)(0) == 3.0 and Harmonic()(4) == 0.2
    assert Explicit([0.5, 0.25])(1) == 0.25
    assert Explicit(lambda k: 1 / (k + 2))(0) == 0.5
    with pytest.raises(DomainError):
        Explicit([0.5])(1)
    with pytest.raises(DomainError):
        Explicit([0.0])(0)
    for bad in (lambda: Theory(0, 1, 1), lambda: Theory(1, 1, 0), lambda: Harmonic(0.0)):
        with pytest.raises(DomainError):
            bad()


def test_complexity_bound_values():
    assert complexity_bound("stochastic", 1, 2, L=1, D=1) == pytest.approx(1 + math.log(3))
    assert complexity_bound("incremental", 1, 2, L=1, D=1) == pytest.approx(2.0986, abs=1e-4)
    assert complexity_bound("median", 3, 2, f0=2.5925) == pytest.approx(32.6, abs=0.05)
    vals = [complexity_bound("median", 3, k, f0=1.0) for k in range(2, 100)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        complexity_bound("median", 3, 1, f0=1.0)
    with pytest.raises(DomainError):
        complexity_bound("stochastic", 3, 5)
    with pytest.raises(DomainError):
        complexity_bound("other", 3, 5)


def test_quadrant_preset_start_value():
    obj, ball = median_setup(EXAMPLE7_1.space, EXAMPLE7_1.anchors)
    f0 = eval_objective(obj, EXAMPLE7_1.x0)
    assert f0 == pytest.approx((math.sqrt(5) + math.sqrt(6.25) + math.sqrt(37) / 2) / 3, abs=1e-12)
    assert f0 == pytest.approx(2.5925, abs=1e-4)


# --------------------------------------------------------------------------
# sampler


def test_sampler_deterministic_and_uniform():
    a, b = IndexSampler(9), IndexSampler(9)
    seq = [a.index(5) for _ in range(50000)]
    assert seq == [b.index(5) for _ in range(50000)]
    counts = np.bincount(seq, minlength=5)
    # chi-square with 4 degrees of freedom; 18.47 is the 0.1% critical value
    assert ((counts - 10000) ** 2 / 10000).sum() < 18.47
    assert seq[:20] != [IndexSampler(10).index(5) for _ in range(20)]


def test_sampler_single_component():
    s = IndexSampler(0)
    assert {s.index(1) for _ in range(100)} == {0}


# --------------------------------------------------------------------------
# line examples


def test_overshooting_sequence():
    t = Explicit(lambda k: 1 / (k + 2) + 1 / (k + 1))
    tr = incremental_subgradient(_line_objective(), WHOLE, R1.point(1.0), t, 200, keep_iterates=True)
    for k, x in enumerate(tr.iterates):
        assert x.coords[0] == pytest.approx((-1) ** k / (k + 1), abs=1e-12)


def test_proximal_sequence_is_monotone():
    t = Explicit(lambda k: 1 / (k + 2) + 1 / (k + 1))
    tr = cyclic_proximal_median(R1, [R1.point(0.0)], None, R1.point(1.0), t, 50, keep_iterates=True)
    xs = [x.coords[0] for x in tr.iterates]
    assert all(0.0 <= b <= a <= 1.0 for a, b in zip(xs, xs[1:]))
    assert xs[-1] == 0.0  # anchor reached and kept


def test_absolute_value_converges():
    tr = incremental_subgradient(_line_objective(), WHOLE, R1.point(5.0), Harmonic(1.0), 2000, f_opt=0.0)
    assert tr.rows[-1][3] < 1e-2


def test_zero_speed_keeps_iterate():
    tr = stochastic_subgradient(_line_objective(), WHOLE, R1.point(0.0), Harmonic(1.0), 0, 10,
                                keep_iterates=True)
    assert all(x == R1.point(0.0) for x in tr.iterates)


def test_single_component_stochastic_equals_incremental():
    obj = Objective(R1, [DistPower(R1.point(2.0), 1.0, 2.0)], lipschitz=[10.0])
    a = stochastic_subgradient(obj, WHOLE, R1.point(-1.0), Harmonic(0.3), 5, 50)
    b = incremental_subgradient(obj, WHOLE, R1.point(-1.0), Harmonic(0.3), 50)
    assert a.rows == b.rows


def test_start_checks():
    with pytest.raises(DomainError):
        incremental_subgradient(_line_objective(), WHOLE, R1.point(1.0), Harmonic(), 0)
    with pytest.raises(DomainError):
        incremental_subgradient(_line_objective(), Ball(R1.point(0.0), 0.5), R1.point(1.0), Harmonic(), 5)


# --------------------------------------------------------------------------
# traces


def test_trace_columns_and_csv():
    E = Euclidean(2)
    pts = [E.point(0, 0), E.point(1, 0), E.point(0, 1)]
    tr = incremental_median(E, pts, None, E.point(2, 2), 25, f_opt=0.5)
    assert len(tr.rows) == 26
    assert math.isnan(tr.rows[0][2]) and math.isnan(tr.rows[1][4])
    assert tr.rows[1][2] == tr.rows[1][1]
    text = tr.to_csv(stride=10)
    lines = text.split("\n")
    assert lines[0] == "k,f,f_best,gap,bound"
    assert [l.split(",")[0] for l in lines[1:-1]] == ["0", "10", "20", "25"]
    assert lines[-1] == ""
    assert lines[1].endswith(",nan,nan,nan")
    row = lines[3].split(",")
    assert float(row[1]) == pytest.approx(tr.rows[20][1], rel=1e-11)
    assert float(row[3]) == pytest.approx(tr.rows[20][2] - 0.5, rel=1e-11)
    buf = io.StringIO()
    assert tr.to_csv(buf) is None
    assert buf.getvalue().count("\n") == 27
    with pytest.raises(DomainError):
        tr.to_csv(stride=0)


def test_no_fopt_gives_nan_gap():
    tr = incremental_subgradient(_line_objective(), WHOLE, R1.point(1.0), Harmonic(), 5)
    assert all(math.isnan(r[3]) for r in tr.rows)
    assert all(math.isnan(r[4]) for r in tr.rows)


# --------------------------------------------------------------------------
# median setup


def test_median_setup_ball():
    E = Euclidean(2)
    pts = [E.point(0, 0), E.point(4, 0), E.point(0, 3)]
    obj, ball = median_setup(E, pts, [0.2, 0.5, 0.3], E.point(1, 1))
    assert ball.center == pts[1] and obj.L == 0.5
    assert ball.radius == pytest.approx(eval_objective(obj, E.point(1, 1)) / 0.5)
    assert ball.diameter == 2 * ball.radius
    # ties go to the lowest index; the default start is a*
    obj, ball = median_setup(E, pts, [0.4, 0.4, 0.2])
    assert ball.center == pts[0]


def test_median_setup_single_anchor():
    E = Euclidean(2)
    obj, ball = median_setup(E, [E.point(3, 4)], None, E.point(0, 0))
    assert ball.radius == pytest.approx(5.0)
    assert ball.contains(E, E.point(3, 4))
    tr = incremental_median(E, [E.point(3, 4)], None, E.point(0, 0), 50, f_opt=0.0)
    assert all(r[3] <= r[4] for r in tr.rows[2:])


def test_median_setup_errors_and_normalisation():
    E = Euclidean(2)
    with pytest.raises(DomainError):
        median_setup(E, [])
    with pytest.raises(DomainError):
        median_setup(E, [E.point(0, 0)], [-1.0])
    with pytest.raises(DomainError):
        median_setup(E, [E.point(0, 0)], [0.5, 0.5])
    with pytest.warns(UserWarning, match="normalising"):
        obj, _ = median_setup(E, [E.point(0, 0), E.point(1, 0)], [1.0, 3.0])
    assert [c.weight for c in obj.components] == [0.25, 0.75]


def test_minimisers_inside_median_ball():
    rng = np.random.default_rng(0)
    E = Euclidean(2)
    for _ in range(50):
        P = rng.uniform(-1, 1, (4, 2))
        w = rng.dirichlet(np.ones(4))
        x_opt, _ = weiszfeld(P, w)
        _, ball = median_setup(E, [E.point(*p) for p in P], w, E.point(*rng.uniform(-2, 2, 2)))
        assert ball.contains(E, E.point(*x_opt))


def test_pmean_setup():
    E = Euclidean(1)
    pts = [E.point(0.0), E.point(2.0)]
    obj, ball = pmean_setup(E, pts, None, E.point(4.0), 2.0)
    assert ball.radius == pytest.approx(math.sqrt((16 + 4) / 2 / 0.5))
    x = E.point(1.0)
    assert eval_objective(obj, x) == pytest.approx(1.0)
    tr = incremental_subgradient(obj, ball, E.point(4.0), Harmonic(0.5), 3000, f_opt=1.0)
    assert tr.rows[-1][3] < 1e-3
    with pytest.raises(DomainError):
        pmean_setup(E, pts, None, None, 0.5)


# --------------------------------------------------------------------------
# bound conformance


def _random_instance(rng):
    m = int(rng.integers(2, 6))
    dim = int(rng.integers(1, 4))
    E = Euclidean(dim)
    P = []
    while len(P) < m:
        v = rng.uniform(-1, 1, dim)
        if np.linalg.norm(v) <= 1:
            P.append(v)
    w = rng.dirichlet(np.ones(m))
    return E, P, w


def test_incremental_bound_random_euclidean():
    rng = np.random.default_rng(11)
    for _ in range(20):
        E, P, w = _random_instance(rng)
        _, f_opt = weiszfeld(P, w)
        x0 = E.point(*rng.uniform(-3, 3, E.dim))
        tr = incremental_median(E, [E.point(*p) for p in P], w, x0, 3000, f_opt=f_opt,
                                keep_iterates=True)
        _, ball = median_setup(E, [E.point(*p) for p in P], w, x0)
        gaps, bounds = tr.gap[2:], tr.bound[2:]
        assert np.all(gaps <= bounds)
        assert np.all(gaps >= -1e-9)
        assert np.all(np.diff(tr.f_best[1:]) <= 0)
        assert all(ball.contains(E, x) for x in tr.iterates)


def test_descent_inequality_along_trajectory():
    rng = np.random.default_rng(12)
    for _ in range(10):
        E, P, w = _random_instance(rng)
        anchors = [E.point(*p) for p in P]
        x_opt, f_opt = weiszfeld(P, w)
        y = E.point(*x_opt)
        x0 = E.point(*rng.uniform(-3, 3, E.dim))
        obj, ball = median_setup(E, anchors, w, x0)
        sched = Theory(2.0 * eval_objective(obj, x0) / obj.L, 1.0, obj.m)
        x = x0
        for k in range(300):
            t = sched(k)
            for i in range(obj.m):
                g = obj.subgradient(i, x)
                fi_x = obj.components[i].weight * E.distance(x, anchors[i])
                fi_y = obj.components[i].weight * E.distance(y, anchors[i])
                x_new = x if g.is_zero else ball.project(E, E.ray_point(x, g.ray, g.speed * t))
                lhs = E.distance(x_new, y) ** 2
                rhs = E.distance(x, y) ** 2 - 2 * t * (fi_x - fi_y) + (g.speed * t) ** 2
                assert lhs <= rhs + 1e-9
                x = x_new


@pytest.mark.parametrize("name", ["euclidean", "hyperbolic", "spider", "cone"])
def test_iterates_stay_in_ball(name):
    space = make_space(name)
    rng = np.random.default_rng(13)
    for seed in range(5):
        anchors = [random_point(space, rng) for _ in range(4)]
        x0 = random_point(space, rng)
        tr = stochastic_median(space, anchors, None, x0, 300, seed, keep_iterates=True)
        _, ball = median_setup(space, anchors, None, x0)
        assert all(ball.contains(space, x) for x in tr.iterates)
        fb = tr.f_best[1:]
        assert np.all(np.diff(fb) <= 0)
        assert fb[0] == tr.f[1] and np.all(fb == np.minimum.accumulate(tr.f[1:]))


def test_determinism():
    space = make_space("cone")
    rng = np.random.default_rng(14)
    anchors = [random_point(space, rng) for _ in range(5)]
    x0 = random_point(space, rng)
    a = stochastic_median(space, anchors, None, x0, 500, 3)
    b = stochastic_median(space, anchors, None, x0, 500, 3)
    assert a.to_csv() == b.to_csv()
    c = stochastic_median(space, anchors, None, x0, 500, 4)
    assert a.to_csv() != c.to_csv()


# --------------------------------------------------------------------------
# the tree examples


@pytest.fixture(scope="module")
def fopt71():
    return example7_1_fopt()


def test_quadrant_preset_stochastic_error_policy_reports_iteration():
    P = EXAMPLE7_1
    with pytest.raises(ExtensionError) as info:
        stochastic_median(P.space, P.anchors, None, P.x0, 100, 42)
    assert info.value.iteration == 2
    assert "iteration 2" in str(info.value)


def test_quadrant_preset_stochastic_seed42_under_bound(fopt71):
    P = EXAMPLE7_1
    tr = stochastic_median(P.space, P.anchors, None, P.x0, 10000, 42, f_opt=fopt71,
                           policy=ExtensionPolicy.CLAMP)
    assert np.all(tr.gap[2:] <= tr.bound[2:])


def test_quadrant_preset_incremental_under_bound(fopt71):
    P = EXAMPLE7_1
    tr = incremental_median(P.space, P.anchors, None, P.x0, 10000, f_opt=fopt71)
    assert np.all(tr.gap[2:] <= tr.bound[2:])
    assert np.all(tr.gap[1:] >= -1e-12)


def test_quadrant_preset_proximal_matches_incremental():
    P = EXAMPLE7_1
    a = incremental_median(P.space, P.anchors, None, P.x0, 500, schedule=Harmonic(1.0), keep_iterates=True)
    b = cyclic_proximal_median(P.space, P.anchors, None, P.x0, Harmonic(1.0), 500, keep_iterates=True)
    assert max(P.space.distance(x, y) for x, y in zip(a.iterates, b.iterates)) <= 1e-9


def test_spine_preset_sticks_to_spine():
    P = EXAMPLE7_2
    _, f_opt = spine_fopt(EXAMPLE7_2_COORDS)
    assert f_opt == pytest.approx(1.0168, abs=1e-4)
    tr = incremental_median(P.space, P.anchors, None, P.x0, 10000, schedule=Harmonic(1.0), f_opt=f_opt)
    assert tr.rows[-1][3] <= 1e-2
    assert off_spine_length(tr.best) < 1e-3
