from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse.csgraph import connected_components

from curvechoreo.curves import (
    Ellipse,
    Lemniscate,
    ProfileEight,
    SampledCurve,
    Symmetry,
    circle,
    critical_a0,
    lemniscate_profile,
    polynomial_profile,
)
from curvechoreo.errors import CrossingCountUnexpected, DomainViolation
from curvechoreo.geometry import star_map
from curvechoreo.pairs import (
    PairKind,
    count_crossings_oracle,
    g_function,
    solve_eight_pair,
    solve_eight_point,
    solve_general_pair,
    solve_pair,
    solve_symmetric_pair,
    x0_of_a,
)

PROF = lemniscate_profile()
A0 = critical_a0(PROF)
Y_HALF = 0.34062501931660666  # f(1/2) from the closed-form profile


def _on_lemniscate(p):
    x2, y2 = p[0] ** 2, p[1] ** 2
    return abs((x2 + y2) ** 2 - (x2 - y2))


# ---------------------------------------------------------------------------
# g(x, a) and x0(a)


@pytest.mark.parametrize("a", [0.2, 0.5, A0, 0.95, 1.0])
def test_g_examples(a):
    f = PROF
    assert g_function(f, 0.0, a) == pytest.approx(0.0, abs=1e-15)
    assert g_function(f, -a, a) == pytest.approx(2 * float(f(a)), abs=1e-14)
    assert g_function(f, -a / 2, a) == pytest.approx(float(f(a)), abs=1e-14)


def test_g_domain():
    with pytest.raises(DomainViolation):
        g_function(PROF, 0.1, 0.5)
    with pytest.raises(DomainViolation):
        g_function(PROF, -0.3, 1.2)
    with pytest.raises(DomainViolation):
        g_function(PROF, -0.6, 0.5)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(0.0, 1.0))
def test_g_point_symmetric_about_midpoint(a, s):
    x = s * a / 2
    mid = g_function(PROF, -a / 2, a)
    lhs = g_function(PROF, -x - a / 2, a) - mid
    rhs = -(g_function(PROF, x - a / 2, a) - mid)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_x0_at_one():
    assert x0_of_a(PROF, 1.0) == pytest.approx(-0.5, abs=1e-10)


def test_x0_none_up_to_a0():
    for a in np.linspace(0.01, A0, 60):
        assert x0_of_a(PROF, a, A0) is None
        # independent scan: g keeps one sign on (-a/2, 0) below a0
        x = np.linspace(-a / 2, 0.0, 2001)[:-1]
        if a < A0 - 1e-3:
            assert np.all(g_function(PROF, x, a) > 0)


def test_x0_half_a0():
    assert x0_of_a(PROF, A0 / 2) is None


def test_x0_decreasing_above_a0():
    grid = np.linspace(A0, 1.0, 101)[1:]
    x0 = np.array([x0_of_a(PROF, a, A0) for a in grid])
    assert np.all((x0 > -grid / 2 - 1e-12) & (x0 < 0))
    for a, x in zip(grid, x0):
        assert abs(g_function(PROF, x, a)) < 1e-12
    h = 1e-7
    slopes = [(x0_of_a(PROF, min(a + h, 1.0), A0) - x0_of_a(PROF, a - h, A0)) / (min(a + h, 1.0) - a + h)
              for a in grid]
    assert np.all(np.array(slopes) < 0)


# ---------------------------------------------------------------------------
# eight-shaped curves


def test_eight_pair_at_one():
    sol = solve_eight_pair(PROF, 1.0, A0)
    (triv,) = sol.trivial
    np.testing.assert_allclose(triv.q1, [0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(triv.q2, [-1.0, 0.0], atol=1e-15)
    assert triv.collinear
    (pair,) = sol.non_trivial
    pts = sorted([tuple(pair.q1), tuple(pair.q2)], key=lambda p: p[1])
    np.testing.assert_allclose(pts, [[-0.5, -Y_HALF], [-0.5, Y_HALF]], atol=1e-12)


def test_eight_pair_at_half_below_a0():
    # {(1/2, f), (1/2, -f), (-1, 0)} sums to zero on the curve, so a = 1/2 < a0
    # also has a non-trivial pair
    sol = solve_eight_pair(PROF, 0.5, A0)
    (pair,) = sol.non_trivial
    np.testing.assert_allclose(pair.q1, [0.5, -Y_HALF], atol=1e-12)
    np.testing.assert_allclose(pair.q2, [-1.0, 0.0], atol=1e-12)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.8, 0.95, 1.0])
def test_eight_crossing_oracle_counts_four(a):
    L = Lemniscate()
    q3 = np.array([a, float(PROF(a))])
    u = np.arange(10000) / 10000
    assert count_crossings_oracle(L.position(u), L.position(u) - q3, 2e-3) == 4
    assert len(solve_eight_pair(PROF, a, A0).pairs) == 2


def test_eight_degenerate_window():
    sol = solve_eight_pair(PROF, A0 + 1e-7, A0)
    assert sol.degenerate
    assert len(sol.pairs) == 1 and sol.pairs[0].kind is PairKind.TRIVIAL


def test_eight_pair_domain():
    with pytest.raises(DomainViolation):
        solve_eight_pair(PROF, 1.2, A0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 1.0, exclude_max=True))
def test_eight_point_pairs_satisfy_constraints(u):
    L = Lemniscate()
    q3 = L.position(u)
    if np.linalg.norm(q3) < 1e-9:
        return
    sol = solve_eight_point(L, q3, a0=A0)
    assert sol.trivial
    for p in sol.pairs:
        assert np.max(np.abs(p.q1 + p.q2 + q3)) < 1e-10
        assert _on_lemniscate(p.q1) < 1e-10 and _on_lemniscate(p.q2) < 1e-10
        np.testing.assert_allclose(p.q2, star_map(p.q1, q3), atol=1e-15)
        is_trivial = (np.allclose(p.q1, 0, atol=1e-8) and np.allclose(p.q2, -q3, atol=1e-8)) or \
            (np.allclose(p.q2, 0, atol=1e-8) and np.allclose(p.q1, -q3, atol=1e-8))
        assert is_trivial == (p.kind is PairKind.TRIVIAL)


def test_eight_point_origin_limit():
    L = Lemniscate()
    sol = solve_eight_point(L, [0.0, 0.0], direction=[1.0, 1.0], a0=A0)
    assert sol.degenerate
    (pair,) = sol.non_trivial
    np.testing.assert_allclose(np.abs(pair.q1), [A0, float(PROF(A0))], atol=1e-14)
    np.testing.assert_allclose(pair.q1 + pair.q2, 0.0, atol=1e-15)


def test_general_profile_eight_pairs():
    prof = polynomial_profile([0, 1], sqrt_tip=True, tip="1-x^2")
    curve = ProfileEight(prof)
    for u in np.linspace(0.01, 0.99, 23):
        q3 = curve.position(u)
        for p in solve_pair(curve, q3).pairs:
            assert np.max(np.abs(p.q1 + p.q2 + q3)) < 1e-10
            for q in (p.q1, p.q2):
                assert abs(abs(q[1]) - float(prof(min(abs(q[0]), 1.0)))) < 1e-10


# ---------------------------------------------------------------------------
# point-symmetric convex curves


def test_unit_circle_equilateral():
    sol = solve_symmetric_pair(circle(), [1.0, 0.0])
    (pair,) = sol.pairs
    pts = sorted([tuple(pair.q1), tuple(pair.q2)], key=lambda p: p[1])
    np.testing.assert_allclose(pts, [[-0.5, -math.sqrt(3) / 2], [-0.5, math.sqrt(3) / 2]], atol=1e-12)


def test_ellipse_thirds():
    e = Ellipse(2.0, 1.0)
    for u in np.arange(64) / 64:
        sol = solve_symmetric_pair(e, e.position(u))
        (pair,) = sol.pairs
        np.testing.assert_allclose(pair.q1, e.position(u + 1 / 3), atol=1e-10)
        np.testing.assert_allclose(pair.q2, e.position(u + 2 / 3), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 1.0, exclude_max=True), st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_symmetric_pair_on_curve_and_translate(u, a, b):
    e = Ellipse(a, b)
    q3 = e.position(u)
    (pair,) = solve_symmetric_pair(e, q3).pairs
    for q in (pair.q1, pair.q2):
        assert abs(e.implicit(q)) < 1e-10
        assert abs(e.implicit(q + q3)) < 1e-10
    assert np.max(np.abs(pair.q1 + pair.q2 + q3)) < 1e-10
    np.testing.assert_allclose(pair.q2, star_map(pair.q1, q3), atol=1e-15)


def test_convex_uniqueness_matches_oracle():
    e = Ellipse(2.0, 1.0)
    u = np.arange(10000) / 10000
    pts = e.position(u)
    for v in np.arange(64) / 64:
        q3 = e.position(v)
        assert len(solve_symmetric_pair(e, q3).pairs) == 1
        assert count_crossings_oracle(pts, pts - q3, 3e-3) == 2


def test_non_symmetric_curve_rejected():
    th = np.arange(64) / 64 * 2 * np.pi
    egg = np.c_[np.cos(th) + 0.2 * np.cos(2 * th), np.sin(th)]
    with pytest.raises(DomainViolation):
        solve_symmetric_pair(SampledCurve(egg), egg[0])


def test_non_convex_curve_crossing_count():
    th = np.arange(400) / 400 * 2 * np.pi
    r = 1 + 0.25 * np.cos(4 * th)
    flower = SampledCurve(np.c_[r * np.cos(th), r * np.sin(th)], Symmetry.POINT)
    with pytest.raises(CrossingCountUnexpected):
        solve_symmetric_pair(flower, flower.position(0.1))


def test_off_curve_q3_flagged():
    sol = solve_symmetric_pair(circle(), [0.5, 0.0])
    assert sol.off_curve
    for p in sol.pairs:
        assert np.max(np.abs(p.q1 + p.q2 + np.array([0.5, 0.0]))) < 1e-10
    far = solve_symmetric_pair(circle(), [3.0, 0.0])
    assert far.off_curve and far.pairs == []


# ---------------------------------------------------------------------------
# general masses


def _double_scan(r1, r2, q3, masses, n=1500):
    """Approximate q1 of every solution on two circles by scanning both angles."""
    m1, m2, m3 = masses
    th = 2 * np.pi * np.arange(n) / n
    p1 = r1 * np.c_[np.cos(th), np.sin(th)]
    p2 = r2 * np.c_[np.cos(th), np.sin(th)]
    res = np.linalg.norm(m1 * p1[:, None, :] + m2 * p2[None, :, :] + m3 * np.asarray(q3), axis=-1)
    step = 2 * np.pi / n * (abs(m1) * r1 + abs(m2) * r2)
    best = res.min(axis=1)
    hits = np.flatnonzero(best < step)
    if hits.size == 0:
        return []
    # group consecutive angles (periodic) into clusters
    adj = np.zeros((hits.size, hits.size), dtype=bool)
    for k in range(hits.size):
        gap = np.abs(hits - hits[k])
        adj[k] = np.minimum(gap, n - gap) <= 2
    ncl, labels = connected_components(adj, directed=False)
    return [p1[hits[labels == c][np.argmin(best[hits[labels == c]])]] for c in range(ncl)]


@pytest.mark.parametrize("q3", [[1.0, 0.0], [0.0, 1.5], [0.7, -1.1], [0.3, 0.2], [5.0, 0.0]])
def test_general_pair_circles_against_double_scan(q3):
    c = circle()
    sol = solve_general_pair(c, c, q3, (2, 1, 1))
    approx = _double_scan(1.0, 1.0, q3, (2, 1, 1))
    assert len(sol.pairs) == len(approx)
    for p in sol.pairs:
        assert np.max(np.abs(2 * p.q1 + p.q2 + np.asarray(q3))) < 1e-10
        assert abs(np.linalg.norm(p.q1) - 1) < 1e-10 and abs(np.linalg.norm(p.q2) - 1) < 1e-10
        assert min(np.linalg.norm(p.q1 - a) for a in approx) < 0.02


def test_general_pair_circle_closed_form():
    # 2 q1 + q2 + q3 = 0 with |q2| = 1: q1 on the unit circle and on |q1 + q3/2| = 1/2
    q3 = np.array([0.0, 1.5])
    sol = solve_general_pair(circle(), circle(), q3, (2, 1, 1))
    c = -q3 / 2
    d = np.linalg.norm(c)
    along = (1 + d * d - 0.25) / (2 * d)
    h = math.sqrt(1 - along * along)
    e = c / d
    expected = [along * e + s * h * np.array([-e[1], e[0]]) for s in (1, -1)]
    got = sorted((tuple(p.q1) for p in sol.pairs), key=lambda p: p[0])
    np.testing.assert_allclose(got, sorted(map(tuple, expected), key=lambda p: p[0]), atol=1e-12)


def test_general_equal_masses_bit_for_bit():
    for curve in (circle(), Ellipse(2.0, 1.0)):
        for u in np.arange(16) / 16:
            q3 = curve.position(u)
            a = solve_general_pair(curve, curve, q3, (1, 1, 1))
            b = solve_symmetric_pair(curve, q3)
            assert len(a.pairs) == len(b.pairs) == 1
            assert np.array_equal(a.pairs[0].q1, b.pairs[0].q1)
            assert np.array_equal(a.pairs[0].q2, b.pairs[0].q2)


def test_general_pair_two_curves_and_flags():
    # q1 = (x, y) on the unit circle, -q1 - q3 on x^2/4 + y^2 = 1: (x + 1)^2 = 4 x^2
    sol = solve_general_pair(circle(), Ellipse(2.0, 1.0), [1.0, 0.0], (1, 1, 1))
    xs = sorted(p.q1[0] for p in sol.pairs)
    np.testing.assert_allclose(xs, [-1 / 3, -1 / 3, 1.0], atol=1e-9)
    for p in sol.pairs:
        assert abs(np.linalg.norm(p.q1) - 1) < 1e-10
        assert abs((p.q2[0] / 2) ** 2 + p.q2[1] ** 2 - 1) < 1e-10
    disjoint = solve_general_pair(circle(), circle(0.1), [5.0, 0.0], (1, 1, 1))
    assert disjoint.pairs == []
    neg = solve_general_pair(circle(), circle(), [0.5, 0.0], (1, -1, 1))
    assert neg.negative_masses
    for p in neg.pairs:
        assert np.max(np.abs(p.q1 - p.q2 + np.array([0.5, 0.0]))) < 1e-10
    with pytest.raises(DomainViolation):
        solve_general_pair(circle(), circle(), [1.0, 0.0], (1, 0, 1))


# ---------------------------------------------------------------------------
# crossing oracle


def test_crossing_oracle_examples():
    c = circle()
    u = np.arange(10000) / 10000
    pts = c.position(u)
    assert count_crossings_oracle(pts, pts - np.array([1.0, 0.0]), 2e-3) == 2
    assert count_crossings_oracle(pts, pts, 2e-3) == -1
    assert count_crossings_oracle(pts, pts + np.array([5.0, 0.0]), 2e-3) == 0


def test_convex_translates_cross_at_most_twice(rng):
    e = Ellipse(2.0, 1.0)
    pts = e.position(np.arange(10000) / 10000)
    for p in rng.uniform(-3, 3, size=(32, 2)):
        if np.linalg.norm(p) < 1e-3:
            continue
        assert count_crossings_oracle(pts, pts - p, 2e-3) <= 2
