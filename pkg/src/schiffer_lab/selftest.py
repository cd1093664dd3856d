"""Quick invariant suite run by ``schiffer-lab selftest``."""
from typing import Callable, Dict, List, Tuple

import mpmath
import numpy as np

from .lattice.lll import lll_reduce
from .models.curve import SurfacePoint
from .models.results import Characteristic
from .surfaces.abel_jacobi import hyperelliptic_test
from .surfaces.curve_model import curve_from_coefficients, weierstrass_points
from .surfaces.homology_periods import normalized_jets, period_matrix
from .theta.theta_tools import theta_null
from .utils.exceptions import LabError
from .utils.logger import get_logger
from .variation.schiffer_engine import first_order_update, schiffer_series

logger = get_logger(__name__)

Check = Callable[[], Tuple[bool, str]]


def _klein_j(tau: complex) -> complex:
    return complex(mpmath.kleinj(tau))


def check_genus1_modulus() -> Tuple[bool, str]:
    """x^3 - x has the square lattice: Klein's J of Pi equals J(i) = 1"""
    period = period_matrix(curve_from_coefficients([0, -1, 0, 1], name="x3-x"))
    value = _klein_j(complex(period.Pi[0, 0]))
    return abs(value - 1) < 1e-9, f"J(Pi) = {value:.12g}"


def check_genus2_riemann() -> Tuple[bool, str]:
    period = period_matrix(curve_from_coefficients([-1, 0, 0, 0, 0, 1], name="x5-1"))
    ok = period.symmetry_residual < 1e-10 and period.min_imag_eigenvalue > 0
    return ok, f"residual {period.symmetry_residual:.2e}, min eig {period.min_imag_eigenvalue:.3e}"


def check_theta_square_lattice() -> Tuple[bool, str]:
    value = theta_null(np.array([[1j]]), Characteristic(alpha=(0,), beta=(0,))).value
    expected = float(mpmath.pi ** 0.25 / mpmath.gamma(0.75))
    return abs(value - expected) < 1e-10, f"theta3(0, i) = {value.real:.15f}"


def check_lll_example() -> Tuple[bool, str]:
    reduced = lll_reduce(np.array([[1, 1, 1], [-1, 0, 2], [3, 5, 6]]))
    found = any(np.array_equal(np.abs(row), [0, 1, 0]) for row in reduced.basis)
    det = round(abs(np.linalg.det(reduced.transform)))
    return found and det == 1, f"basis {reduced.basis.tolist()}"


def check_weierstrass_jets() -> Tuple[bool, str]:
    curve = curve_from_coefficients([-1, 0, 0, 0, 0, 1], name="x5-1")
    period = period_matrix(curve)
    residuals = [hyperelliptic_test(curve, period, w).residual for w in weierstrass_points(curve)]
    ordinary = hyperelliptic_test(curve, period, SurfacePoint.ordinary(2.0)).residual
    return max(residuals) < 1e-10 and ordinary > 1e-3, f"max Weierstrass {max(residuals):.1e}, ordinary {ordinary:.3e}"


def check_rank_one_update() -> Tuple[bool, str]:
    curve = curve_from_coefficients([-1, 0, 0, 0, 0, 1], name="x5-1")
    period = period_matrix(curve)
    p0 = SurfacePoint.ordinary(2.0)
    update = first_order_update(period, normalized_jets(curve, period, p0, 0))
    series = schiffer_series(curve, period, p0, 1)
    s = np.linalg.svd(update, compute_uv=False)
    ok = s[1] / s[0] < 1e-13 and np.allclose(series.delta_pi(1), update, rtol=0, atol=1e-15)
    return ok, f"sigma2/sigma1 {s[1] / s[0]:.1e}"


CHECKS: Dict[str, Check] = {
    "genus1_modulus": check_genus1_modulus,
    "genus2_riemann": check_genus2_riemann,
    "theta_square_lattice": check_theta_square_lattice,
    "lll_example": check_lll_example,
    "weierstrass_jets": check_weierstrass_jets,
    "rank_one_update": check_rank_one_update,
}


def run_selftest() -> List[Dict[str, object]]:
    results = []
    for name, check in CHECKS.items():
        try:
            ok, detail = check()
        except LabError as e:
            ok, detail = False, str(e)
        logger.info(f"selftest {name}: {'ok' if ok else 'FAILED'} ({detail})")
        results.append({"check": name, "ok": bool(ok), "detail": detail})
    return results
