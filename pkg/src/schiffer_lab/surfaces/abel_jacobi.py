"""Abel-Jacobi map, its jets, and the hyperellipticity criterion at a point."""
from math import factorial
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import get_settings
from ..models.curve import HyperellipticCurve, SurfacePoint
from ..models.periods import PeriodData
from ..models.results import AJJet, AJValue, HyperellipticVerdict
from ..utils.exceptions import ChartError, HomologyError
from ..utils.logger import get_logger
from .curve_model import check_anchor
from .homology_periods import normalized_jets
from .paths import Vertex, detour_vertices, integrate_leg_on_sheet

logger = get_logger(__name__)

MODULE = "abel_jacobi"


def _vertex(curve: HyperellipticCurve, point: SurfacePoint) -> Vertex:
    if point.at_infinity:
        raise ChartError("Abel-Jacobi paths end at finite points; use a finite branch point instead of infinity",
                         module=MODULE)
    check_anchor(curve, point, module=MODULE)
    if point.branch_index is not None:
        return Vertex(complex(curve.branch_points[point.branch_index]), point.branch_index)
    return Vertex(complex(point.x))


def _walk(curve: HyperellipticCurve, vertices: List[Vertex], y0: Optional[complex], tol: Optional[float]):
    pieces, error, y, free_from = [], 0.0, y0, None
    for idx, (a, b) in enumerate(zip(vertices, vertices[1:])):
        if a.is_branch:
            free_from = idx
        values, leg_error, y = integrate_leg_on_sheet(curve, a, b, y, tol, module=MODULE)
        pieces.append(values)
        error += leg_error
    return pieces, error, y, free_from


def _parse_cycle(label: str) -> Tuple[int, str]:
    label = label.strip()
    if label.startswith("-"):
        return -1, label[1:]
    return 1, label.lstrip("+")


def abel_jacobi(curve: HyperellipticCurve, period: PeriodData, p0: SurfacePoint, p: SurfacePoint,
                via: Sequence[complex] = (), cycles: Sequence[str] = (), reduce: bool = False,
                tol: Optional[float] = None) -> AJValue:
    """Integral of the normalized differentials from p0 to p along a polyline

    ``via`` adds intermediate x-values; ``cycles`` appends whole cycles by
    label (``"b1"``, ``"-a2"``). The sheet at an ordinary p is enforced: when
    the polyline arrives on the wrong sheet the legs after the last branch
    vertex are flipped, or, without one, the branch point nearest to p is
    inserted as a vertex.
    """
    g = curve.genus
    start, end = _vertex(curve, p0), _vertex(curve, p)
    vertices = [start] + [Vertex(complex(x)) for x in via] + [end]
    vertices = [v for i, v in enumerate(vertices) if i == 0 or v != vertices[i - 1]]
    if len(vertices) == 1 and not p0.same_place(p):
        # same x on opposite sheets: go round the nearest branch point
        k = int(np.argmin(np.abs(curve.branch_points - end.x)))
        vertices = [start, Vertex(complex(curve.branch_points[k]), k), end]
    y0 = None if p0.branch_index is not None else curve.y(p0)

    total = np.zeros(g, dtype=complex)
    error = 0.0
    if len(vertices) > 1:
        vertices = detour_vertices(curve, vertices, module=MODULE)
        pieces, error, y_end, free_from = _walk(curve, vertices, y0, tol)
        if p.branch_index is None:
            target = curve.y(p)
            if (y_end / target).real < 0:
                if free_from is None:
                    k = int(np.argmin(np.abs(curve.branch_points - end.x)))
                    logger.debug(f"Sheet repair through branch point {k}")
                    vertices = vertices[:-1] + [Vertex(complex(curve.branch_points[k]), k), end]
                    vertices = detour_vertices(curve, vertices, module=MODULE)
                    pieces, error, y_end, free_from = _walk(curve, vertices, y0, tol)
                if (y_end / target).real < 0:
                    pieces = pieces[:free_from] + [-piece for piece in pieces[free_from:]]
                    y_end = -y_end
            if abs(y_end - target) > 1e-8 * max(1.0, abs(target)):
                raise HomologyError("Sheet tracking lost the endpoint value of y",
                                    details={"module": MODULE, "y_end": str(y_end), "y": str(target)})
        total = np.sum(pieces, axis=0)

    value = period.C @ total
    for label in cycles:
        sign, name = _parse_cycle(label)
        value = value + sign * period.cycle_vector(name)

    result = AJValue(
        p0=p0,
        p=p,
        value=value,
        path=[v.x for v in vertices],
        error=error * max(1.0, float(np.max(np.abs(period.C)))),
    )
    if reduce:
        reduced, m, n = reduce_mod_lattice(period, value)
        result = result.model_copy(update={
            "value": reduced, "lattice_reduced": True, "lattice_shift": (m.tolist(), n.tolist()),
        })
    return result


def lattice_coordinates(period: PeriodData, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Real (m, n) with v = m + Pi n"""
    v = np.asarray(v, dtype=complex)
    n = np.linalg.solve(period.Pi.imag, v.imag)
    m = v.real - period.Pi.real @ n
    return m, n


def reduce_mod_lattice(period: PeriodData, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Subtract the nearest lattice point m + Pi n, returning (reduced, m, n)"""
    m, n = lattice_coordinates(period, v)
    m_int, n_int = np.rint(m).astype(int), np.rint(n).astype(int)
    return np.asarray(v) - period.lattice_point(m_int, n_int), m_int, n_int


def lattice_residual(period: PeriodData, v: np.ndarray) -> float:
    """Distance from v to the nearest lattice point in the (m, n) coordinates"""
    reduced, _, _ = reduce_mod_lattice(period, v)
    return float(np.max(np.abs(reduced)))


def aj_jet(curve: HyperellipticCurve, period: PeriodData, anchor: SurfacePoint, order: int,
           chart_scale: complex = 1.0) -> AJJet:
    """d^n/dt^n of the Abel-Jacobi map at the anchor, n = 1..order

    Order n, component j is (n-1)! times the t^(n-1) coefficient of the
    normalized omega_j jet; no quadrature is involved.
    """
    if order < 1:
        raise ChartError("Abel-Jacobi jets start at order 1", module=MODULE, details={"module": MODULE, "order": order})
    jets = normalized_jets(curve, period, anchor, order - 1, chart_scale)
    derivatives = np.array([
        [factorial(s) * jet.coefficients[s] for jet in jets] for s in range(order)
    ], dtype=complex)
    return AJJet(anchor=anchor, chart=anchor.chart, chart_scale=chart_scale, derivatives=derivatives)


def hyperelliptic_test(curve: HyperellipticCurve, period: PeriodData, anchor: SurfacePoint,
                       threshold: Optional[float] = None) -> HyperellipticVerdict:
    """Second t-derivative of the Abel-Jacobi map at the anchor against a threshold"""
    threshold = threshold if threshold is not None else get_settings().hyperelliptic_threshold
    jet = aj_jet(curve, period, anchor, 2)
    residual = float(np.max(np.abs(jet.component(2))))
    return HyperellipticVerdict(
        anchor=anchor,
        is_hyperelliptic_at_p=residual < threshold,
        residual=residual,
        threshold=threshold,
    )
