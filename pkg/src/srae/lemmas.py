"""Derivatives of ``f_alpha`` and numerical certification of their signs.

With ``x`` the squared concurrence, ``r = sqrt(1-x)``, ``A = 1 + r`` and
``B = 1 - r``, the Renyi-alpha entanglement is
``f_alpha(x) = ln[2**-alpha (A**alpha + B**alpha)] / ((1 - alpha) ln 2)``.
The closed forms here are singular at ``x = 0`` and ``x = 1``; the limits are
exposed separately.

Everything here works for any ``alpha > 0`` (no window check), because the
sign scans deliberately cross the window edges.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import log, sqrt

import numpy as np
from scipy.optimize import bisect

from .measures import ALPHA_C, ALPHA_C2, EOF_BAND, pure_renyi_from_c2

LN2 = log(2.0)
FD_STEP = 1e-5
SCAN_STEP = 1e-3
SCAN_MARGIN = 1e-3
LIMIT_MARGIN = 1e-8
BISECT_XTOL = 1e-12
CURVE_XTOL = 1e-10


class FormulaId(str, enum.Enum):
    D1_SQ_RENYI = "D1_SQ_RENYI"
    H_ALPHA = "H_ALPHA"
    D1_RENYI = "D1_RENYI"
    D2_RENYI_FD = "D2_RENYI_FD"
    D2_SQ_RENYI_FD = "D2_SQ_RENYI_FD"


class CriticalAlpha(str, enum.Enum):
    ALPHA_C1 = "ALPHA_C1"
    ALPHA_C2 = "ALPHA_C2"


class CurveEquation(str, enum.Enum):
    DHDX_ZERO = "DHDX_ZERO"
    DHDALPHA_ZERO = "DHDALPHA_ZERO"
    D2_SQ_ZERO = "D2_SQ_ZERO"
    D2_ZERO = "D2_ZERO"


def _interior(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise ValueError("x on the boundary of [0, 1]; use limit operations")
    r = np.sqrt(1.0 - x)
    return x, r, 1.0 + r, 1.0 - r


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def _is_eof(alpha) -> bool:
    return abs(float(alpha) - 1.0) < EOF_BAND


def renyi_f(x, alpha):
    """``f_alpha(x)`` without the window check."""
    return pure_renyi_from_c2(x, float(alpha))


# -- analytic derivatives -----------------------------------------------------


def d1_renyi(x, alpha):
    """``d f_alpha / dx``.  At ``alpha = 1`` the binary-entropy derivative is used."""
    x, r, a_, b_ = _interior(x)
    a = float(alpha)
    if _is_eof(a):
        return _scalar(np.log2(a_ / b_) / (4.0 * r))
    s = a_**a + b_**a
    return _scalar(a * (b_ ** (a - 1) - a_ ** (a - 1)) / (2.0 * (1.0 - a) * s * r * LN2))


def d1_sq_renyi(x, alpha):
    """``d f_alpha^2 / dx``."""
    x, r, a_, b_ = _interior(x)
    a = float(alpha)
    if _is_eof(a):
        return _scalar(2.0 * renyi_f(x, 1.0) * np.log2(a_ / b_) / (4.0 * r))
    s = a_**a + b_**a
    num = a * (b_ ** (a - 1) - a_ ** (a - 1)) * np.log(2.0**-a * s)
    return _scalar(num / ((1.0 - a) ** 2 * s * r * LN2**2))


def h_alpha(x, alpha):
    """``(1 - alpha)^2 d^2 f_alpha^2 / dx^2`` in closed form.

    The expression is valid for every ``alpha > 0`` and vanishes identically
    at ``alpha = 1``.
    """
    x, r, a_, b_ = _interior(x)
    a = float(alpha)
    s = a_**a + b_**a
    lam = a / (2.0 * s**2 * (1.0 - x) * LN2**2)
    diff = a_ ** (a - 1) - b_ ** (a - 1)
    inner = -diff * s / r + (a - 1) * (a_ ** (a - 2) + b_ ** (a - 2)) * s - a * diff**2
    return _scalar(lam * (a * diff**2 + inner * np.log(2.0**-a * s)))


def d2_renyi(x, alpha):
    """``d^2 f_alpha / dx^2`` in closed form (``alpha != 1``)."""
    x, r, a_, b_ = _interior(x)
    a = float(alpha)
    if _is_eof(a):
        raise ValueError("alpha = 1 needs the entropy branch; use finite differences")
    s = a_**a + b_**a
    s1 = a * (b_ ** (a - 1) - a_ ** (a - 1)) / (2.0 * r)
    s2 = a * ((a - 1) * (a_ ** (a - 2) + b_ ** (a - 2)) / (4.0 * r * r) + (b_ ** (a - 1) - a_ ** (a - 1)) / (4.0 * r**3))
    return _scalar((s2 * s - s1**2) / (s * s * (1.0 - a) * LN2))


def d2_sq_renyi(x, alpha):
    """``d^2 f_alpha^2 / dx^2`` from :func:`h_alpha` (``alpha != 1``)."""
    if _is_eof(alpha):
        raise ValueError("alpha = 1 needs the entropy branch; use finite differences")
    return _scalar(np.asarray(h_alpha(x, alpha)) / (1.0 - float(alpha)) ** 2)


# -- boundary limits ----------------------------------------------------------


def h_limit_x0(alpha) -> float:
    """``lim_{x->0} h_alpha``."""
    return alpha**2 / (8.0 * LN2**2)


def h_limit_x1(alpha) -> float:
    """``lim_{x->1} h_alpha``."""
    return (1 - alpha) ** 2 * alpha * (3 * alpha + 2 * (alpha**2 + alpha - 3) * LN2) / (6.0 * LN2**2)


def d2_sq_limit_x1(alpha) -> float:
    """``lim_{x->1} d^2 f_alpha^2 / dx^2``; its zero is the first critical order."""
    return alpha * (3 * alpha + 2 * (alpha**2 + alpha - 3) * LN2) / (6.0 * LN2**2)


def d2_limit_x1(alpha) -> float:
    """``lim_{x->1} d^2 f_alpha / dx^2``; its zero is the second critical order."""
    return alpha * (alpha**2 + alpha - 3) / (6.0 * LN2)


# -- finite differences -------------------------------------------------------


def fd_derivative(fn, x, order: int = 1, step: float = FD_STEP):
    """Central difference of order 1 or 2 with one Richardson extrapolation level."""
    x = np.asarray(x, dtype=float)
    step = np.asarray(step, dtype=float)

    def central(h):
        if order == 1:
            return (fn(x + h) - fn(x - h)) / (2.0 * h)
        if order == 2:
            return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h)
        raise ValueError("order must be 1 or 2")

    return _scalar((4.0 * central(step / 2) - central(step)) / 3.0)


def _safe_step(x, step):
    """Shrink ``step`` so that ``x +- step`` stays inside ``(0, 1)``."""
    x = np.asarray(x, dtype=float)
    return np.minimum(step, np.minimum(x, 1.0 - x) / 4.0)


def _numeric(formula: FormulaId, x, alpha, step):
    a = float(alpha)
    h = _safe_step(x, step)
    if formula is FormulaId.D1_RENYI:
        return fd_derivative(lambda t: renyi_f(t, a), x, 1, h)
    if formula is FormulaId.D1_SQ_RENYI:
        return fd_derivative(lambda t: renyi_f(t, a) ** 2, x, 1, h)
    if formula is FormulaId.H_ALPHA:
        return fd_derivative(lambda t: (1 - a) ** 2 * renyi_f(t, a) ** 2, x, 2, h)
    if formula is FormulaId.D2_RENYI_FD:
        return fd_derivative(lambda t: renyi_f(t, a), x, 2, h)
    if formula is FormulaId.D2_SQ_RENYI_FD:
        return fd_derivative(lambda t: renyi_f(t, a) ** 2, x, 2, h)
    raise ValueError(f"unknown formula {formula!r}")


_ANALYTIC = {
    FormulaId.D1_RENYI: d1_renyi,
    FormulaId.D1_SQ_RENYI: d1_sq_renyi,
    FormulaId.H_ALPHA: h_alpha,
    FormulaId.D2_RENYI_FD: d2_renyi,
    FormulaId.D2_SQ_RENYI_FD: d2_sq_renyi,
}


@dataclass(frozen=True)
class FDCheck:
    analytic: float
    numeric: float
    rel_err: float


_SECOND_ORDER = (FormulaId.H_ALPHA, FormulaId.D2_RENYI_FD, FormulaId.D2_SQ_RENYI_FD)


def fd_check(formula_id, x: float, alpha: float, step: float | None = None) -> FDCheck:
    """Compare a closed-form derivative with its finite-difference estimate.

    ``step`` defaults to ``1e-5`` for first derivatives and ``1e-3`` for
    second derivatives, where a smaller step loses digits to roundoff.
    ``rel_err`` is ``|numeric - analytic| / max(|analytic|, 1e-300)``.
    """
    formula = FormulaId(formula_id)
    if step is None:
        step = SCAN_STEP if formula in _SECOND_ORDER else FD_STEP
    analytic = float(_ANALYTIC[formula](x, alpha))
    numeric = float(_numeric(formula, x, alpha, step))
    return FDCheck(analytic, numeric, abs(numeric - analytic) / max(abs(analytic), 1e-300))


@dataclass(frozen=True)
class DerivativeGrid:
    x_points: np.ndarray
    alpha_points: np.ndarray
    values: np.ndarray
    formula_id: FormulaId

    def __post_init__(self):
        if np.any(self.x_points <= 0) or np.any(self.x_points >= 1):
            raise ValueError("x_points must lie strictly inside (0, 1)")


def derivative_grid(formula_id, x_points, alpha_points, step: float = SCAN_STEP) -> DerivativeGrid:
    """Evaluate a formula on ``alpha_points x x_points`` (rows are alphas).

    The ``*_FD`` formulas are evaluated by finite differences, the others in
    closed form.
    """
    formula = FormulaId(formula_id)
    xs = np.asarray(x_points, dtype=float)
    alphas = np.asarray(alpha_points, dtype=float)
    if np.any(xs <= 0) or np.any(xs >= 1):
        raise ValueError("x_points must lie strictly inside (0, 1)")
    fd = formula in (FormulaId.D2_RENYI_FD, FormulaId.D2_SQ_RENYI_FD)
    rows = [
        np.asarray(_numeric(formula, xs, a, step) if fd else _ANALYTIC[formula](xs, a), dtype=float)
        for a in alphas
    ]
    return DerivativeGrid(xs, alphas, np.vstack(rows), formula)


def scan_grid(n: int, margin: float = SCAN_MARGIN) -> np.ndarray:
    return np.linspace(margin, 1.0 - margin, n)


# -- critical orders ----------------------------------------------------------


def _c1_equation(a: float) -> float:
    return 3 * a + 2 * (a * a + a - 3) * LN2


def _c2_equation(a: float) -> float:
    return a * a + a - 3


def critical_alpha_closed_form(which) -> float:
    which = CriticalAlpha(which)
    if which is CriticalAlpha.ALPHA_C1:
        b = 2 * LN2 + 3
        return (-b + sqrt(b * b + 48 * LN2**2)) / (4 * LN2)
    return (sqrt(13) - 1) / 2


def critical_alpha(which) -> float:
    """Critical order by bisection on its defining equation (``xtol = 1e-12``)."""
    which = CriticalAlpha(which)
    eq = _c1_equation if which is CriticalAlpha.ALPHA_C1 else _c2_equation
    return float(bisect(eq, 0.1, 2.0, xtol=BISECT_XTOL))


# -- critical curves ----------------------------------------------------------


def dh_dx(x, alpha, step: float = FD_STEP):
    return fd_derivative(lambda t: h_alpha(t, alpha), x, 1, _safe_step(x, step))


def dh_dalpha(x, alpha, step: float = FD_STEP):
    return fd_derivative(lambda a: np.asarray(h_alpha(x, float(a))), float(alpha), 1, step)


_CURVES = {
    # equation -> (function of (x, alpha), default alpha bracket)
    CurveEquation.DHDX_ZERO: (dh_dx, (1.0 + 1e-3, 3.0)),
    CurveEquation.DHDALPHA_ZERO: (dh_dalpha, (0.9, 3.0)),
    CurveEquation.D2_SQ_ZERO: (h_alpha, (0.05, 1.0 - 1e-3)),
    CurveEquation.D2_ZERO: (d2_renyi, (1.0 + 1e-3, 10.0)),
}


@dataclass(frozen=True)
class CriticalCurve:
    equation: CurveEquation
    points: np.ndarray  # (n, 2) rows of (x, alpha)
    gaps: list = field(default_factory=list)

    @property
    def x(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def alpha(self) -> np.ndarray:
        return self.points[:, 1]


def curve_point(equation, x: float, alpha_range: tuple[float, float] | None = None) -> float | None:
    """Root in ``alpha`` of ``equation`` at fixed ``x``, or None without a sign change."""
    fn, bracket = _CURVES[CurveEquation(equation)]
    lo, hi = alpha_range or bracket
    g = lambda a: float(fn(x, a))  # noqa: E731
    if g(lo) * g(hi) > 0:
        return None
    return float(bisect(g, lo, hi, xtol=CURVE_XTOL))


def critical_curve(equation, grid, alpha_range: tuple[float, float] | None = None) -> CriticalCurve:
    """Solve ``equation = 0`` for ``alpha`` on each ``x`` grid line by bisection.

    Parameters
    ----------
    equation : CurveEquation
        ``D2_SQ_ZERO`` uses the sign of ``h_alpha`` (same sign as the second
        derivative of ``f_alpha^2``), ``D2_ZERO`` the closed-form second
        derivative of ``f_alpha``; the two gradient components of ``h_alpha``
        are finite differences.
    grid : array_like
        ``x`` values inside ``(0, 1)``, at least 50 of them.
    alpha_range : (float, float), optional
        Bracket for the bisection; defaults depend on the equation.

    Returns
    -------
    CriticalCurve
        Grid lines without a sign change in the bracket are listed in ``gaps``.
    """
    equation = CurveEquation(equation)
    xs = np.asarray(grid, dtype=float)
    if xs.size < 50:
        raise ValueError("critical curves need at least 50 grid points")
    pts, gaps = [], []
    for x in xs:
        a = curve_point(equation, x, alpha_range)
        if a is None:
            gaps.append(float(x))
        else:
            pts.append((float(x), a))
    return CriticalCurve(equation, np.asarray(pts, dtype=float).reshape(-1, 2), gaps)


# -- certification suite ------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    relation: str  # "<=", ">=" or ">"
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "relation": self.relation,
            "passed": self.passed,
        }


def _check(name, value, relation, threshold) -> Check:
    value = float(value)
    ok = {"<=": value <= threshold, ">=": value >= threshold, ">": value > threshold}[relation]
    return Check(name, value, float(threshold), relation, bool(ok))


LIMIT_ALPHAS = (1.5, 2.0, 2.5, 3.0)


def certify(n_x: int = 200, n_alpha: int = 50) -> list[Check]:
    """Run every sign scan, finite-difference comparison, limit and constant check."""
    xs = scan_grid(n_x)
    checks = []
    increasing_sq = derivative_grid(FormulaId.D1_SQ_RENYI, xs, np.linspace(ALPHA_C, 3.0, 12))
    checks.append(_check("d1_sq_min", increasing_sq.values.min(), ">", 0.0))
    mono = derivative_grid(FormulaId.D1_RENYI, xs, np.linspace(ALPHA_C, 3.0, 12))
    checks.append(_check("d1_min", mono.values.min(), ">", 0.0))
    h_grid = derivative_grid(FormulaId.H_ALPHA, xs, np.linspace(1.0, 3.0, n_alpha))
    checks.append(_check("h_min", h_grid.values.min(), ">=", -1e-9))
    low = derivative_grid(FormulaId.D2_SQ_RENYI_FD, xs, np.linspace(ALPHA_C, 1.0, n_alpha, endpoint=False))
    checks.append(_check("fd_d2_sq_min_below_alpha1", low.values.min(), ">=", -1e-9))
    concave = derivative_grid(FormulaId.D2_RENYI_FD, xs, np.linspace(ALPHA_C, ALPHA_C2, n_alpha))
    checks.append(_check("fd_d2_max_concave_window", concave.values.max(), "<=", 1e-9))

    fd_x = np.linspace(0.05, 0.95, 19)
    fd_alphas = (0.83, 0.9, 1.2, 1.5, 2.0, 2.5, 3.0)
    for formula in (FormulaId.D1_SQ_RENYI, FormulaId.D1_RENYI, FormulaId.H_ALPHA):
        worst = max(fd_check(formula, x, a).rel_err for x in fd_x for a in fd_alphas)
        checks.append(_check(f"fd_rel_err_{formula.value}", worst, "<=", 1e-4))

    for a in LIMIT_ALPHAS:
        lim0, lim1 = h_limit_x0(a), h_limit_x1(a)
        checks.append(_check(f"limit_x0_alpha{a}", abs(h_alpha(LIMIT_MARGIN, a) - lim0) / lim0, "<=", 1e-3))
        checks.append(_check(f"limit_x1_alpha{a}", abs(h_alpha(1 - LIMIT_MARGIN, a) - lim1) / lim1, "<=", 1e-3))

    c1 = critical_alpha(CriticalAlpha.ALPHA_C1)
    c2 = critical_alpha(CriticalAlpha.ALPHA_C2)
    checks.append(_check("alpha_c", abs(ALPHA_C - (sqrt(7) - 1) / 2), "<=", 1e-12))
    checks.append(_check("alpha_c1_vs_0.764", abs(c1 - 0.764), "<=", 1e-3))
    checks.append(_check("alpha_c1_closed_form", abs(c1 - critical_alpha_closed_form("ALPHA_C1")), "<=", 1e-10))
    checks.append(_check("alpha_c2", abs(c2 - (sqrt(13) - 1) / 2), "<=", 1e-12))
    return checks


def curve_checks(n_x: int = 60) -> tuple[list[Check], dict[CurveEquation, CriticalCurve]]:
    """Shape checks on the four critical curves, plus the curves themselves."""
    xs = scan_grid(n_x)
    curves = {eq: critical_curve(eq, xs) for eq in CurveEquation}
    checks = []
    sq, d2 = curves[CurveEquation.D2_SQ_ZERO], curves[CurveEquation.D2_ZERO]
    checks.append(_check("d2_sq_curve_gaps", len(sq.gaps), "<=", 0))
    checks.append(_check("d2_curve_gaps", len(d2.gaps), "<=", 0))
    # alpha rising with x along the curve is the same as x rising with alpha
    checks.append(_check("d2_sq_curve_monotone_increasing", -np.diff(sq.alpha).min(), "<=", 0.0))
    checks.append(_check("d2_curve_monotone_decreasing", np.diff(d2.alpha).max(), "<=", 0.0))
    edge = 1.0 - 1e-6
    end_sq = curve_point(CurveEquation.D2_SQ_ZERO, edge)
    end_d2 = curve_point(CurveEquation.D2_ZERO, edge)
    checks.append(_check("d2_sq_curve_endpoint", abs(end_sq - critical_alpha_closed_form("ALPHA_C1")), "<=", 1e-3))
    checks.append(_check("d2_curve_endpoint", abs(end_d2 - ALPHA_C2), "<=", 1e-3))
    dha = curves[CurveEquation.DHDALPHA_ZERO]
    checks.append(_check("dh_dalpha_zero_at_alpha1", np.abs(dha.alpha - 1.0).max(), "<=", 1e-6))
    dhx = curves[CurveEquation.DHDX_ZERO]
    # along the interior dh/dx = 0 curve, dh/dalpha stays strictly positive
    interior = min(float(dh_dalpha(x, a)) for x, a in dhx.points)
    checks.append(_check("no_interior_common_gradient_zero", interior, ">", 0.0))
    return checks, curves
