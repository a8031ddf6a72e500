from math import log, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srae import lemmas
from srae.lemmas import CriticalAlpha, CurveEquation, FormulaId

LN2 = log(2)
ALPHA_GRID = np.linspace(0.83, 3.0, 12)


def five_point(fn, x, h, order):
    """Independent 5-point stencil, used as an oracle for the closed forms."""
    fm2, fm1, f0, fp1, fp2 = (fn(x + k * h) for k in (-2, -1, 0, 1, 2))
    if order == 1:
        return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)


def f(x, a):
    return float(lemmas.renyi_f(x, a))


# -- closed forms against an independent stencil -----------------------------------


@pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("alpha", [0.83, 0.9, 1.0, 1.5, 2.0, 3.0])
def test_first_derivatives_match_stencil(x, alpha):
    d1 = five_point(lambda t: f(t, alpha), x, 1e-4, 1)
    d1_sq = five_point(lambda t: f(t, alpha) ** 2, x, 1e-4, 1)
    assert lemmas.d1_renyi(x, alpha) == pytest.approx(d1, rel=1e-7)
    assert lemmas.d1_sq_renyi(x, alpha) == pytest.approx(d1_sq, rel=1e-7)


@pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("alpha", [0.83, 0.9, 1.5, 2.0, 3.0])
def test_second_derivatives_match_stencil(x, alpha):
    d2 = five_point(lambda t: f(t, alpha), x, 1e-3, 2)
    d2_sq = five_point(lambda t: f(t, alpha) ** 2, x, 1e-3, 2)
    assert lemmas.d2_renyi(x, alpha) == pytest.approx(d2, rel=1e-4, abs=1e-8)
    assert lemmas.h_alpha(x, alpha) == pytest.approx((1 - alpha) ** 2 * d2_sq, rel=1e-4, abs=1e-8)


def test_h_alpha_vanishes_at_one():
    assert lemmas.h_alpha(np.linspace(0.1, 0.9, 9), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_boundary_rejected():
    for fn in (lemmas.d1_renyi, lemmas.d1_sq_renyi, lemmas.h_alpha, lemmas.d2_renyi):
        for x in (0.0, 1.0):
            with pytest.raises(ValueError, match="use limit operations"):
                fn(x, 2.0)


def test_eof_branch_refused_for_second_order_closed_forms():
    with pytest.raises(ValueError):
        lemmas.d2_renyi(0.5, 1.0)
    with pytest.raises(ValueError):
        lemmas.d2_sq_renyi(0.5, 1.0)


# -- operation examples ------------------------------------------------------------


def test_d1_sq_examples():
    assert lemmas.d1_sq_renyi(np.linspace(0.01, 0.99, 50), 2.0).min() > 0
    assert lemmas.fd_check("D1_SQ_RENYI", 0.5, 2.0).rel_err <= 1e-4
    signs = {bool(np.all(np.asarray(lemmas.d1_sq_renyi(lemmas.scan_grid(50), a)) > 0)) for a in ALPHA_GRID}
    assert signs == {True}


def test_h_alpha_limits():
    assert lemmas.h_limit_x0(2.0) == pytest.approx(4 / (8 * LN2**2))
    assert lemmas.h_limit_x0(2.0) == pytest.approx(1.0407, abs=1e-4)
    assert lemmas.h_limit_x1(2.0) > 0
    grid = lemmas.derivative_grid("H_ALPHA", lemmas.scan_grid(100), np.linspace(1, 3, 21))
    assert grid.values.min() >= -1e-9


def test_d1_renyi_examples():
    assert lemmas.d1_renyi(0.5, 0.83) > 0
    assert lemmas.fd_check(FormulaId.D1_RENYI, 0.5, 2.0).rel_err <= 1e-4
    assert lemmas.d1_renyi(0.3, 0.9) > 0 and lemmas.d1_renyi(0.3, 1.7) > 0


@pytest.mark.parametrize(
    "formula,x,alpha", [("D1_RENYI", 0.5, 2.0), ("H_ALPHA", 0.5, 1.5), ("D1_SQ_RENYI", 0.9, 1.2)]
)
def test_fd_check_examples(formula, x, alpha):
    res = lemmas.fd_check(formula, x, alpha)
    assert res.rel_err <= 1e-4
    assert res.analytic == pytest.approx(res.numeric, rel=1e-4)


@given(st.floats(0.02, 0.98), st.floats(0.83, 3.0))
@settings(max_examples=200, deadline=None)
def test_fd_check_first_order_anywhere(x, alpha):
    for formula in (FormulaId.D1_RENYI, FormulaId.D1_SQ_RENYI):
        assert lemmas.fd_check(formula, x, alpha).rel_err <= 1e-4


def test_fd_derivative_on_polynomial():
    assert lemmas.fd_derivative(lambda t: t**3, 0.5, 1) == pytest.approx(0.75, rel=1e-10)
    assert lemmas.fd_derivative(lambda t: t**3, 0.5, 2, 1e-3) == pytest.approx(3.0, rel=1e-8)


# -- critical orders ---------------------------------------------------------------


def test_critical_alpha_values():
    c1 = lemmas.critical_alpha(CriticalAlpha.ALPHA_C1)
    c2 = lemmas.critical_alpha("ALPHA_C2")
    assert c1 == pytest.approx(0.764, abs=1e-3)
    assert c1 == pytest.approx(lemmas.critical_alpha_closed_form("ALPHA_C1"), abs=1e-10)
    assert c2 == pytest.approx((sqrt(13) - 1) / 2, abs=1e-12)
    assert c2 == pytest.approx(1.303, abs=1e-3)


def test_critical_orders_are_limit_zeros():
    c1 = lemmas.critical_alpha_closed_form("ALPHA_C1")
    c2 = lemmas.critical_alpha_closed_form("ALPHA_C2")
    assert lemmas.d2_sq_limit_x1(c1) == pytest.approx(0.0, abs=1e-12)
    assert lemmas.d2_limit_x1(c2) == pytest.approx(0.0, abs=1e-12)
    # numeric second derivatives approach the limits from inside
    assert lemmas.d2_renyi(1 - 1e-6, 2.0) == pytest.approx(lemmas.d2_limit_x1(2.0), rel=1e-3)


# -- critical curves ---------------------------------------------------------------


def test_curve_needs_resolution():
    with pytest.raises(ValueError, match="at least 50"):
        lemmas.critical_curve("D2_ZERO", lemmas.scan_grid(20))


@pytest.fixture(scope="module")
def curves():
    _, out = lemmas.curve_checks(60)
    return out


def test_d2_sq_curve_rises_to_alpha_c1(curves):
    c = curves[CurveEquation.D2_SQ_ZERO]
    assert not c.gaps
    assert np.all(np.diff(c.alpha) > 0)
    end = lemmas.curve_point("D2_SQ_ZERO", 1 - 1e-6)
    assert end == pytest.approx(lemmas.critical_alpha_closed_form("ALPHA_C1"), abs=1e-3)


def test_d2_curve_falls_to_alpha_c2(curves):
    c = curves[CurveEquation.D2_ZERO]
    assert not c.gaps
    assert np.all(np.diff(c.alpha) < 0)
    end = lemmas.curve_point(CurveEquation.D2_ZERO, 1 - 1e-6)
    assert end == pytest.approx((sqrt(13) - 1) / 2, abs=1e-3)


def test_curve_points_are_roots(curves):
    for x, a in curves[CurveEquation.D2_ZERO].points[::10]:
        assert abs(lemmas.d2_renyi(x, a)) <= 1e-6
    for x, a in curves[CurveEquation.D2_SQ_ZERO].points[::10]:
        assert abs(lemmas.h_alpha(x, a)) <= 1e-6


def test_gradient_zeros_meet_only_at_alpha_one(curves):
    dha = curves[CurveEquation.DHDALPHA_ZERO]
    assert np.allclose(dha.alpha, 1.0, atol=1e-6)
    dhx = curves[CurveEquation.DHDX_ZERO]
    assert np.all(dhx.alpha > 1.0)
    assert min(abs(lemmas.dh_dalpha(x, a)) for x, a in dhx.points) > 0.5


def test_curve_gap_recorded_when_no_root():
    c = lemmas.critical_curve("D2_ZERO", lemmas.scan_grid(50), alpha_range=(2.0, 3.0))
    assert len(c.gaps) == 50 and c.points.shape == (0, 2)


# -- certification report -----------------------------------------------------------


def test_certify_all_pass():
    checks = lemmas.certify()
    failed = [c.name for c in checks if not c.passed]
    assert not failed
    names = {c.name for c in checks}
    assert {"d1_sq_min", "h_min", "fd_d2_max_concave_window", "alpha_c1_vs_0.764"} <= names
    assert all(set(c.to_dict()) >= {"name", "value", "threshold", "passed"} for c in checks)
