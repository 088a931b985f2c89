from __future__ import annotations

from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvechoreo.errors import ParallelLines
from curvechoreo.geometry import (
    Line,
    are_parallel,
    concurrency_defect,
    cross,
    intersect,
    star_map,
    three_lines_concurrent,
    unit,
    vec2,
)

coord = st.floats(-50, 50, allow_nan=False)
point = st.tuples(coord, coord).map(np.array)
angle = st.floats(0, 2 * np.pi)


def test_vec2_rejects_bad_input():
    with pytest.raises(ValueError):
        vec2([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        vec2(np.nan, 0.0)
    assert vec2(1, 2).tolist() == [1.0, 2.0]


def test_cross_examples():
    assert cross([1, 0], [0, 1]) == 1.0
    assert cross([0, 1], [1, 0]) == -1.0
    assert cross([2, 3], [4, 6]) == 0.0
    np.testing.assert_array_equal(cross(np.eye(2), [[0, 1], [1, 0]]), [1.0, -1.0])


@given(point, point, point, st.floats(-5, 5))
def test_cross_bilinear_antisymmetric(u, v, w, s):
    assert cross(u, v) == pytest.approx(-cross(v, u), abs=1e-9)
    assert cross(u + s * w, v) == pytest.approx(cross(u, v) + s * cross(w, v), rel=1e-9, abs=1e-6)


@given(point, point)
def test_star_map_involution(q, q3):
    np.testing.assert_allclose(star_map(star_map(q, q3), q3), q, atol=1e-10)
    # q + q* + q3 = 0
    np.testing.assert_allclose(q + star_map(q, q3) + q3, 0.0, atol=1e-10)


def test_intersect_example():
    p = intersect(Line([0, 0], [1, 1]), Line([2, 0], [0, 1]))
    np.testing.assert_allclose(p, [2.0, 2.0])


def test_parallel_lines_raise():
    with pytest.raises(ParallelLines):
        intersect(Line([0, 0], [1, 2]), Line([5, 1], [-2, -4]))
    assert are_parallel([1, 0], [1, 1e-14])
    assert not are_parallel([1, 0], [1, 1e-6])


@given(point, angle, angle, angle, st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10))
def test_concurrent_lines_detected(c, a1, a2, a3, r1, r2, r3):
    dirs = [np.array([np.cos(a), np.sin(a)]) for a in (a1, a2, a3)]
    # skip nearly parallel configurations, where intersections are ill-conditioned
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if abs(cross(dirs[i], dirs[j])) < 0.05:
            return
    lines = [Line(c + r * d, d) for r, d in zip((r1, r2, r3), dirs)]
    assert concurrency_defect(*lines) < 1e-9
    assert three_lines_concurrent(*lines, tol=1e-8)


@given(point, angle, angle, angle, st.floats(0.5, 3))
def test_defect_symmetric_and_detects_offset(c, a1, a2, a3, shift):
    dirs = [np.array([np.cos(a), np.sin(a)]) for a in (a1, a2, a3)]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if abs(cross(dirs[i], dirs[j])) < 0.2:
            return
    normal = np.array([-dirs[2][1], dirs[2][0]])
    lines = [Line(c, dirs[0]), Line(c, dirs[1]), Line(c + shift * normal, dirs[2])]
    values = [concurrency_defect(*(lines[k] for k in perm)) for perm in permutations(range(3))]
    assert max(values) - min(values) < 1e-12 * max(1.0, max(values))
    assert values[0] >= shift - 1e-9
    assert not three_lines_concurrent(*lines, tol=1e-3)


def test_defect_parallel_raises():
    with pytest.raises(ParallelLines):
        concurrency_defect(Line([0, 0], [1, 0]), Line([0, 1], [1, 0]), Line([0, 0], [0, 1]))


def test_line_distance():
    line = Line([0, 1], [3, 0])
    assert line.distance([5, 4]) == pytest.approx(3.0)
    np.testing.assert_allclose(unit([[3, 4]]), [[0.6, 0.8]])
