from __future__ import annotations

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ellipe, gamma

from curvechoreo.curves import (
    Ellipse,
    EightProfile,
    Lemniscate,
    ProfileEight,
    SampledCurve,
    Symmetry,
    check_conditions,
    circle,
    critical_a0,
    curve_from_dict,
    curve_to_dict,
    is_point_symmetric,
    lemniscate_profile,
    load_curve,
    polynomial_profile,
    save_curve,
)
from curvechoreo.errors import ConditionViolated, EvaluationOutsideDomain, NonDifferentiable

unit_u = st.floats(0.0, 1.0, exclude_max=True)


def _lemniscate_symbolic():
    x = sp.symbols("x", positive=True)
    f = sp.sqrt((-1 + sp.sqrt(1 + 8 * x**2)) / 2 - x**2)
    return [sp.lambdify(x, sp.diff(f, x, k), "numpy") for k in range(4)]


# ---------------------------------------------------------------------------
# positions and derivatives


def test_ellipse_examples():
    e = Ellipse(2.0, 1.0)
    np.testing.assert_allclose(e.position(0.0), [2.0, 0.0])
    np.testing.assert_allclose(e.position(0.25), [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(circle().derivative(0.0, 1), [0.0, 2 * np.pi], atol=1e-14)
    np.testing.assert_allclose(e.derivative(0.0, 2), [-8 * np.pi**2, 0.0], atol=1e-12)


def test_lemniscate_profile_matches_symbolic():
    x = np.linspace(0.01, 0.99, 197)
    prof = lemniscate_profile()
    for k, fn in enumerate(_lemniscate_symbolic()):
        np.testing.assert_allclose(prof(x, k), fn(x), rtol=1e-9, atol=1e-12, err_msg=f"order {k}")


def test_lemniscate_profile_on_implicit_curve():
    x = np.linspace(0.0, 1.0, 501)
    y = lemniscate_profile()(x)
    np.testing.assert_allclose((x * x + y * y) ** 2, x * x - y * y, atol=1e-14)
    # (1/2, 0.340625...) from the closed form
    assert float(lemniscate_profile()(0.5)) == pytest.approx(0.34062501931660666, abs=1e-15)


def test_lemniscate_tip_slope_diverges_like_inverse_sqrt():
    # near (1, 0): 3 y^2 ~ 2 eps, so f'(1 - eps) sqrt(eps) -> -1/sqrt(6)
    prof = lemniscate_profile()
    for eps in (1e-4, 1e-6, 1e-8):
        assert float(prof(1.0 - eps, 1)) * math.sqrt(eps) == pytest.approx(-1 / math.sqrt(6), rel=2e-3)


def test_profile_outside_domain():
    prof = lemniscate_profile()
    with pytest.raises(EvaluationOutsideDomain):
        prof(1.01)
    with pytest.raises(EvaluationOutsideDomain):
        prof(np.array([0.5, -0.2]))


@pytest.mark.parametrize("curve", [Ellipse(2.0, 1.0), Lemniscate(), ProfileEight(lemniscate_profile()),
                                   ProfileEight(polynomial_profile([0, 1], sqrt_tip=True, tip="1-x^2"))],
                         ids=["ellipse", "lemniscate", "profile-eight", "odd-profile"])
def test_derivative_matches_central_difference(curve):
    u = np.linspace(0.013, 0.987, 61)
    h = 1e-6
    fd1 = (curve.position(u + h) - curve.position(u - h)) / (2 * h)
    fd2 = (curve.derivative(u + h) - curve.derivative(u - h)) / (2 * h)
    scale1 = np.max(np.abs(curve.derivative(u)))
    scale2 = np.max(np.abs(curve.derivative(u, 2)))
    assert np.max(np.abs(curve.derivative(u) - fd1)) < 1e-6 * scale1
    assert np.max(np.abs(curve.derivative(u, 2) - fd2)) < 1e-6 * scale2


def test_profile_eight_agrees_with_lemniscate_geometry():
    pe = ProfileEight(lemniscate_profile())
    u = np.linspace(0, 1, 400, endpoint=False)
    p = pe.position(u)
    x2, y2 = p[:, 0] ** 2, p[:, 1] ** 2
    assert np.max(np.abs((x2 + y2) ** 2 - (x2 - y2))) < 1e-12
    assert pe.length == pytest.approx(Lemniscate().length, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(unit_u)
def test_lemniscate_membership(u):
    p = Lemniscate().position(u)
    x2, y2 = p[0] ** 2, p[1] ** 2
    assert abs((x2 + y2) ** 2 - (x2 - y2)) < 1e-10


def test_lemniscate_membership_dense():
    p = Lemniscate().position(np.arange(1000) / 1000)
    assert np.max(np.abs(Lemniscate().implicit(p))) < 1e-10


@settings(max_examples=40, deadline=None)
@given(unit_u)
def test_position_periodic(u):
    for curve in (Ellipse(2.0, 1.0), Lemniscate()):
        np.testing.assert_allclose(curve.position(u + 1.0), curve.position(u), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(unit_u)
def test_point_symmetry_by_projection(u):
    for curve in (Ellipse(2.0, 1.0), Lemniscate(), ProfileEight(lemniscate_profile())):
        q = curve.position(u)
        v = curve.locate(-q)
        assert np.max(np.abs(curve.position(v) + q)) < 1e-10


# ---------------------------------------------------------------------------
# arc length


def test_arc_length_examples():
    assert circle().arc_length(0.0, 1.0) == pytest.approx(2 * np.pi, abs=1e-10)
    e = Ellipse(2.0, 1.0)
    assert e.arc_length(0.0, 1.0) == pytest.approx(8.0 * ellipe(0.75), abs=1e-10)
    assert e.length == pytest.approx(9.688448220547676, abs=1e-10)
    assert e.arc_length(0.3, 0.3) == 0.0


def test_ellipse_length_dense_trapezoid():
    e = Ellipse(2.0, 1.0)
    u = np.arange(200000) / 200000
    # periodic trapezoid converges spectrally for a smooth closed curve
    assert np.mean(e.speed(u)) == pytest.approx(e.length, abs=1e-10)


def test_lemniscate_length_closed_form():
    # total length 2 * varpi, varpi = Gamma(1/4)^2 / (2 sqrt(2 pi))
    varpi = gamma(0.25) ** 2 / (2 * math.sqrt(2 * math.pi))
    assert Lemniscate().length == pytest.approx(2 * varpi, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(unit_u, unit_u, unit_u)
def test_arc_length_additive(a, b, c):
    u0, u1, u2 = sorted((a, b, c))
    for curve in (Ellipse(2.0, 1.0), Lemniscate()):
        total = curve.arc_length(u0, u2)
        assert total == pytest.approx(curve.arc_length(u0, u1) + curve.arc_length(u1, u2), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 2.0))
def test_sigma_roundtrip(u):
    curve = Lemniscate()
    s = curve.sigma_of_u(u)
    assert curve.u_of_sigma(s) == pytest.approx(u, abs=1e-10)
    assert s == pytest.approx(curve.arc_length(0.0, u % 1.0) + curve.length * (u // 1.0), abs=1e-9)


# ---------------------------------------------------------------------------
# critical abscissa and conditions


def test_critical_a0_lemniscate_matches_symbolic_root():
    x = sp.symbols("x")
    f = sp.sqrt((-1 + sp.sqrt(1 + 8 * x**2)) / 2 - x**2)
    root = sp.nsolve(sp.diff(f, x) + 1, x, 0.9, prec=30)
    prof = lemniscate_profile()
    a0 = critical_a0(prof)
    assert a0 == pytest.approx(float(sp.re(root)), abs=1e-12)
    assert float(prof(a0, 1) + prof(0.0, 1)) == pytest.approx(0.0, abs=1e-10)


def test_critical_a0_cubic():
    # f = x - x^3: f'(a) = 1 - 3a^2 = -1  =>  a = sqrt(2/3)
    prof = polynomial_profile([0, 1, 0, -1])
    assert critical_a0(prof) == pytest.approx(math.sqrt(2 / 3), abs=1e-12)


def test_critical_a0_odd_sqrt_profile():
    # f = x sqrt(1 - x^2): f'(a) = (1 - 2a^2)/sqrt(1 - a^2) = -1  =>  a = sqrt(3)/2
    prof = polynomial_profile([0, 1], sqrt_tip=True, tip="1-x^2")
    assert critical_a0(prof) == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_critical_a0_rejects_non_concave():
    prof = polynomial_profile([0, 1, 0, 1])  # f' increasing
    with pytest.raises(ConditionViolated):
        critical_a0(prof)


def test_conditions_lemniscate_fail_only_vi():
    rep = check_conditions(lemniscate_profile())
    assert rep.applicable
    assert set(rep.failures) == {"VI"}
    assert rep.failures["VI"].witness == pytest.approx(math.sqrt(5 / 32), abs=1e-6)


def test_conditions_ellipse_inapplicable():
    rep = check_conditions(Ellipse(2.0, 1.0))
    assert not rep.applicable
    assert not rep.passed


@pytest.mark.parametrize("coeffs,tip", [([0, 1], "1-x"), ([0, 1, 0.5], "1-x"), ([0, 1], "1-x^2")])
def test_conditions_pass_for_valid_profiles(coeffs, tip):
    rep = check_conditions(polynomial_profile(coeffs, sqrt_tip=True, tip=tip))
    assert rep.passed, rep.failures


def test_condition_vi_constructed_violation():
    # f = x(1 - x)(1 + x) + x^4/4 * ... : add a positive cubic bump to f'''
    base = polynomial_profile([0, 1, 0, -1])
    bump = EightProfile(
        base.f,
        base.f1,
        lambda x: base.f2(x) + 0.0,
        lambda x: base.f3(x) + 12.0 * np.asarray(x) ** 2,
        name="bumped",
    )
    rep = check_conditions(bump)
    w = rep.failures["VI"].witness
    # f''' = -6 + 12 x^2 turns positive past 1/sqrt(2)
    assert w == pytest.approx(1 / math.sqrt(2), abs=2e-3)


def test_condition_v_constructed_violation():
    prof = polynomial_profile([0, 1, 1, -3], sqrt_tip=True)
    rep = check_conditions(prof)
    assert "V" in rep.failures
    x = rep.failures["V"].witness
    assert float(prof(x, 2)) >= 0 or float(prof(x + 1e-3, 2)) >= 0


# ---------------------------------------------------------------------------
# sampled curves and files


def test_sampled_curve_follows_ellipse():
    e = Ellipse(2.0, 1.0)
    pts = e.position(np.arange(256) / 256)
    sc = SampledCurve(pts, Symmetry.POINT)
    assert sc.length == pytest.approx(e.length, rel=1e-7)
    assert is_point_symmetric(sc)
    np.testing.assert_allclose(sc.position(0.1), e.position(0.1), atol=1e-6)


def test_sampled_curve_corner():
    square = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float)
    sc = SampledCurve(square)
    with pytest.raises(NonDifferentiable):
        sc.derivative(0.25)
    sc.position(0.25)


@pytest.mark.parametrize("curve", [Ellipse(2.0, 1.0), Lemniscate(), ProfileEight(lemniscate_profile()),
                                   ProfileEight(polynomial_profile([0, 1, 0.5], sqrt_tip=True)),
                                   SampledCurve(circle(1.5).position(np.arange(64) / 64), Symmetry.POINT)],
                         ids=["ellipse", "lemniscate", "profile", "polynomial", "sampled"])
def test_curve_file_roundtrip(curve, tmp_path):
    path = tmp_path / "curve.json"
    save_curve(curve, path)
    back = load_curve(path)
    u = np.linspace(0, 1, 37)
    np.testing.assert_allclose(back.position(u), curve.position(u), atol=1e-14)
    assert curve_to_dict(back) == curve_to_dict(curve)


def test_curve_from_dict_rejects_unknown():
    with pytest.raises(ValueError):
        curve_from_dict({"schema": "curvechoreo-curve", "version": 1, "kind": "spiral"})
