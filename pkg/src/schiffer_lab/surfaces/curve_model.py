"""Exact hyperelliptic curve models, branch points and local jets of differentials."""
import json
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import mpmath
import numpy as np
from pydantic import ValidationError

from ..config.settings import get_settings
from ..models.curve import ChartKind, CurveSpec, HyperellipticCurve, LocalJet, SurfacePoint
from ..utils.exceptions import (
    ChartError,
    CurveSpecError,
    JetOrderError,
    NonSquarefreeError,
    RootRefinementError,
)
from ..utils.logger import get_logger
from .series import PowerSeries, deflate, taylor_shift

logger = get_logger(__name__)

MAX_NEWTON_STEPS = 60


def _to_fraction(text: str) -> Fraction:
    try:
        if "/" in text:
            return Fraction(text.strip())
        return Fraction(Decimal(text.strip()))
    except (InvalidOperation, ValueError, ZeroDivisionError) as e:
        raise CurveSpecError(f"Coefficient is not a decimal number: {text!r}", field="f_coeffs",
                             value=text, cause=e)


def _poly_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    """Remainder of a by b, descending coefficients, exact"""
    a = list(a)
    while len(a) >= len(b) and any(a):
        factor = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= factor * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def exact_gcd_degree(coefficients: Sequence[Fraction]) -> int:
    """Degree of gcd(f, f') computed with exact rational Euclid"""
    desc = list(reversed(coefficients))
    d = len(desc) - 1
    deriv = [desc[i] * (d - i) for i in range(d)]
    a, b = desc, deriv
    while b:
        a, b = b, _poly_rem(a, b)
    return len(a) - 1


def parse_curve(spec: Union[CurveSpec, dict, str, Path]) -> HyperellipticCurve:
    """Build a certified curve from a structured-text description

    Accepts a CurveSpec, a mapping, a JSON string, or a path to a JSON file.
    """
    if isinstance(spec, Path) or (isinstance(spec, str) and not spec.lstrip().startswith("{")):
        try:
            spec = json.loads(Path(spec).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise CurveSpecError(f"Cannot read curve spec: {e}", cause=e)
    elif isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as e:
            raise CurveSpecError(f"Malformed curve spec: {e}", cause=e)
    if not isinstance(spec, CurveSpec):
        try:
            spec = CurveSpec.model_validate(spec)
        except ValidationError as e:
            raise CurveSpecError(f"Malformed curve spec: {e.errors()[0]['msg']}", cause=e)

    coefficients = [_to_fraction(c) for c in spec.f_coeffs]
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients.pop()
    degree = len(coefficients) - 1
    if degree < 3:
        raise CurveSpecError(f"Degree {degree} < 3 gives genus 0", field="f_coeffs", value=degree)
    if exact_gcd_degree(coefficients) > 0:
        raise NonSquarefreeError("f(x) is not squarefree", field="f_coeffs", value=spec.f_coeffs)

    roots, error, separation = _certified_roots(coefficients)
    curve = HyperellipticCurve(
        name=spec.name,
        coefficients=tuple(coefficients),
        branch_points=roots,
        root_error=error,
        separation=separation,
    )
    logger.debug(f"Parsed curve {spec.name}: degree {degree}, genus {curve.genus}")
    return curve


def curve_from_coefficients(coeffs: Iterable[Union[int, str, Fraction]], name: str = "curve") -> HyperellipticCurve:
    return parse_curve(CurveSpec(name=name, f_coeffs=[str(c) for c in coeffs]))


def _certified_roots(coefficients: Sequence[Fraction]):
    """Companion-matrix roots, Newton-polished, with a separation certificate"""
    config = get_settings()
    desc = [float(c) for c in reversed(coefficients)]
    guesses = np.roots(desc)

    with mpmath.workdps(max(config.prec, 15) + 10):
        mp_desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coefficients)]
        refined, errors, residuals = [], [], []
        for guess in guesses:
            z = mpmath.mpc(guess)
            for _ in range(MAX_NEWTON_STEPS):
                value, deriv = mpmath.polyval(mp_desc, z, derivative=True)
                if deriv == 0:
                    raise RootRefinementError("Vanishing derivative during root refinement")
                step = value / deriv
                z -= step
                if abs(step) <= mpmath.mpf(10) ** (-config.prec - 5) * max(1, abs(z)):
                    break
            else:
                raise RootRefinementError("Newton refinement did not converge",
                                          residual=float(abs(mpmath.polyval(mp_desc, z))))
            value, deriv = mpmath.polyval(mp_desc, z, derivative=True)
            refined.append(complex(z))
            residuals.append(float(abs(value)))
            # Newton-Kantorovich style radius, plus float64 rounding of the stored root
            errors.append(float(abs(value / deriv)) + 2.0 ** -52 * max(1.0, float(abs(z))))

    roots = np.array(refined, dtype=complex)
    order = sorted(range(len(roots)), key=lambda k: (round(roots[k].real, 12), round(roots[k].imag, 12)))
    roots = roots[order]
    error = max(errors)
    tol = config.quad_tol * max(1.0, float(np.max(np.abs(roots))))
    residual_scale = max(abs(float(c)) for c in coefficients)
    if max(residuals) > tol * residual_scale:
        raise RootRefinementError("Branch point residual above tolerance", residual=max(residuals))

    gaps = np.abs(roots[:, None] - roots[None, :]) + np.diag(np.full(len(roots), np.inf))
    separation = float(np.min(gaps))
    if separation <= 10 * error:
        raise NonSquarefreeError("Branch points are not certifiably separated",
                                 details={"separation": separation, "root_error": error})
    return roots, error, separation


def branch_points(curve: HyperellipticCurve) -> np.ndarray:
    """Finite branch points, sorted lexicographically by (Re, Im)"""
    return np.array(curve.branch_points)


def weierstrass_points(curve: HyperellipticCurve) -> List[SurfacePoint]:
    points = [SurfacePoint.branch(k) for k in range(len(curve.branch_points))]
    if curve.branch_at_infinity:
        points.append(SurfacePoint.infinity())
    return points


def check_anchor(curve: HyperellipticCurve, anchor: SurfacePoint, module: str = "curve_model") -> None:
    if anchor.chart is ChartKind.ORDINARY:
        if curve.nearest_branch_distance(anchor.x) <= 10 * curve.root_error:
            raise ChartError("Anchor sits on a branch point; use the branch chart", module=module,
                             details={"x": str(anchor.x)})
    elif anchor.chart is ChartKind.BRANCH:
        if not 0 <= anchor.branch_index < len(curve.branch_points):
            raise ChartError(f"No branch point with index {anchor.branch_index}", module=module)
    elif not curve.branch_at_infinity:
        raise ChartError("Even-degree curves have no branch point at infinity", module=module)


def holomorphic_density(curve: HyperellipticCurve, j: int, anchor: SurfacePoint, order: int,
                        chart_scale: complex = 1.0) -> PowerSeries:
    """Local density of x^{j-1} dx / y in the anchor's chart"""
    g = curve.genus
    if anchor.chart is ChartKind.ORDINARY:
        x0 = complex(anchor.x)
        x = PowerSeries.variable(order, x0, chart_scale)
        f_t = taylor_shift(curve.coeffs, x0, order)
        # x = x0 + lam t, so f(x(t)) has coefficients c_s lam^s
        f_t = PowerSeries(f_t.coeffs * chart_scale ** np.arange(order + 1))
        y = f_t.sqrt(root0=curve.y(anchor))
        return (x ** (j - 1)) * chart_scale / y

    # Even charts: the density is a series in u = tau^2, so build it to order/2
    half = order // 2
    if anchor.chart is ChartKind.BRANCH:
        e = complex(curve.branch_points[anchor.branch_index])
        q = deflate(curve.coeffs, e)
        q_u = taylor_shift(q, e, half)
        x_u = PowerSeries.variable(half, e, 1.0)
        density_u = (x_u ** (j - 1)) * 2.0 / q_u.sqrt()
    else:
        reversed_f = PowerSeries(curve.coeffs[::-1], half)
        density_u = PowerSeries.constant(-2.0, half) / reversed_f.sqrt()
        shift = g - j
        density_u = PowerSeries(np.r_[np.zeros(shift), density_u.coeffs], half)
    density = density_u.compose_even().truncate(order)
    return PowerSeries(density.coeffs * chart_scale ** np.arange(1, order + 2))


def differential_jet(curve: HyperellipticCurve, j: int, anchor: SurfacePoint, order: int,
                     chart_scale: complex = 1.0) -> LocalJet:
    """Jet of the unnormalized holomorphic differential x^{j-1} dx / y at an anchor"""
    config = get_settings()
    if not 1 <= j <= curve.genus:
        raise ChartError(f"Basis index {j} outside 1..{curve.genus}")
    if order < 0 or order > config.max_jet_order:
        raise JetOrderError("Jet order outside the configured budget", requested=order,
                            allowed=config.max_jet_order)
    check_anchor(curve, anchor)
    density = holomorphic_density(curve, j, anchor, order, chart_scale)
    return LocalJet(
        anchor=anchor,
        chart=anchor.chart,
        coefficients=np.array(density.coeffs),
        chart_scale=chart_scale,
        label=f"omega_hat_{j}",
    )


def basis_jets(curve: HyperellipticCurve, anchor: SurfacePoint, order: int,
               chart_scale: complex = 1.0) -> List[LocalJet]:
    return [differential_jet(curve, j, anchor, order, chart_scale) for j in range(1, curve.genus + 1)]


def point_from_text(text: str) -> SurfacePoint:
    """Parse the CLI point syntax: ``x,+`` / ``x,-`` / ``branch:k`` / ``inf``

    x is a Python complex literal such as ``2`` or ``0.5+1j``.
    """
    text = text.strip()
    if text in ("inf", "infinity"):
        return SurfacePoint.infinity()
    if text.startswith("branch:"):
        return SurfacePoint.branch(int(text.split(":", 1)[1]))
    x_text, _, sheet_text = text.partition(",")
    sheet = -1 if sheet_text.strip() == "-" else 1
    try:
        return SurfacePoint.ordinary(complex(x_text.replace(" ", "")), sheet)
    except ValueError as e:
        raise CurveSpecError(f"Cannot parse point {text!r}", field="point", value=text, cause=e)


def sample_ordinary_point(curve: HyperellipticCurve, rng: np.random.Generator, radius: float = 1.5,
                          min_distance: float = 0.1, max_attempts: int = 100) -> SurfacePoint:
    """Random ordinary point in the disc of ``radius`` * scale, kept away from the branch points"""
    scale = curve.scale
    for _ in range(max_attempts):
        x = complex(*rng.uniform(-radius * scale, radius * scale, size=2))
        if curve.nearest_branch_distance(x) >= min_distance * scale:
            return SurfacePoint.ordinary(x, int(rng.choice([1, -1])))
    raise ChartError("Could not sample an ordinary point away from the branch points",
                     details={"curve": curve.name})
