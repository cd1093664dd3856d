"""Straight legs on the x-plane and the analytic branch of y along them.

Along a leg from a to b the curve's y is written as

    y_leg(x) = sqrt(lead) * prod_m sqrt_m(x - e_m)

where each factor uses a square root whose cut ray points from e_m away from
the leg midpoint. Such a ray never meets the leg, so y_leg is analytic on the
open leg and continuous up to branch-point endpoints; no step-by-step
continuation is needed. The actual sheet is recovered by comparing y_leg with
the tracked y at the leg's ordinary start point.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..config.settings import get_settings
from ..models.curve import HyperellipticCurve
from ..utils.exceptions import ClearanceError
from ..utils.logger import get_logger
from .quadrature import gauss_chebyshev, gauss_legendre

logger = get_logger(__name__)


@dataclass(frozen=True)
class Vertex:
    """A path vertex: an x-value, optionally a finite branch point index"""
    x: complex
    branch_index: Optional[int] = None

    @property
    def is_branch(self) -> bool:
        return self.branch_index is not None


@dataclass(frozen=True)
class LegIntegral:
    """Integrals of x^{j-1} dx / y_leg over one leg, j = 1..g"""
    values: np.ndarray
    error: float
    y_start: Optional[complex]
    y_end: Optional[complex]


def segment_distance(point: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(point - a)
    s = ((point - a) * np.conj(d)).real / abs(d) ** 2
    s = min(1.0, max(0.0, s))
    return abs(point - (a + s * d))


class LegBranch:
    """The analytic branch y_leg for one straight leg"""

    def __init__(self, curve: HyperellipticCurve, a: complex, b: complex):
        self.curve = curve
        roots = np.asarray(curve.branch_points)
        mid = 0.5 * (a + b)
        direction = mid - roots
        self.roots = roots
        self.rotations = direction / np.abs(direction)
        self.sqrt_rotations = np.sqrt(self.rotations)
        self.sqrt_lead = np.sqrt(curve.leading)

    def factor(self, m: int, z):
        """Branch of sqrt(z) for root m, with its cut pointing away from the leg"""
        return self.sqrt_rotations[m] * np.sqrt(np.asarray(z) / self.rotations[m])

    def product(self, x: np.ndarray, skip: Sequence[int] = ()) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        out = np.full(x.shape, self.sqrt_lead, dtype=complex)
        for m in range(len(self.roots)):
            if m not in skip:
                out = out * self.factor(m, x - self.roots[m])
        return out

    def y(self, x) -> np.ndarray:
        return self.product(x)


def _monomials(x: np.ndarray, g: int) -> np.ndarray:
    return np.power.outer(x, np.arange(g))


def check_clearance(curve: HyperellipticCurve, a: Vertex, b: Vertex, module: str = "abel_jacobi") -> float:
    """Smallest distance from the open leg to a branch point that is not one of its ends"""
    config = get_settings()
    limit = config.clearance * curve.scale
    closest = np.inf
    for m, e in enumerate(curve.branch_points):
        if m in (a.branch_index, b.branch_index):
            continue
        closest = min(closest, segment_distance(e, a.x, b.x))
    if closest <= limit:
        raise ClearanceError("Path passes within clearance of a branch point",
                             distance=float(closest), module=module)
    return float(closest)


def leg_integral(curve: HyperellipticCurve, a: Vertex, b: Vertex, tol: Optional[float] = None,
                 module: str = "abel_jacobi") -> LegIntegral:
    """Integrate x^{j-1} dx / y_leg from a to b for all j"""
    config = get_settings()
    tol = tol or config.quad_tol
    g = curve.genus
    check_clearance(curve, a, b, module=module)
    branch = LegBranch(curve, a.x, b.x)

    if a.is_branch and b.is_branch:
        half = 0.5 * (b.x - a.x)
        mid = 0.5 * (a.x + b.x)
        k_a, k_b = a.branch_index, b.branch_index
        const = branch.sqrt_lead * branch.factor(k_a, half) * branch.factor(k_b, -half)

        def chebyshev_integrand(u):
            x = mid + half * u
            rest = branch.product(x, skip=(k_a, k_b)) / branch.sqrt_lead
            return half * _monomials(x, g) / (const * rest)[:, None]

        result = gauss_chebyshev(chebyshev_integrand, tol, config.max_quad_nodes, module=module)
        return LegIntegral(result.value, result.error, None, None)

    if a.is_branch or b.is_branch:
        # Integrate from the branch point e out to the ordinary point q with x = e + (q - e) s^2
        e_vertex, q_vertex = (a, b) if a.is_branch else (b, a)
        e, q, k = e_vertex.x, q_vertex.x, e_vertex.branch_index
        span = q - e
        const = branch.factor(k, span)

        def radial_integrand(s):
            x = e + span * s ** 2
            rest = branch.product(x, skip=(k,))
            return (2.0 * span * _monomials(x, g)) / (const * rest)[:, None]

        result = gauss_legendre(radial_integrand, tol, config.max_quad_nodes, module=module)
        y_q = complex(branch.y(q)[0])
        sign = 1.0 if a.is_branch else -1.0
        y_start, y_end = (None, y_q) if a.is_branch else (y_q, None)
        return LegIntegral(sign * result.value, result.error, y_start, y_end)

    span = b.x - a.x

    def straight_integrand(s):
        x = a.x + span * s
        return span * _monomials(x, g) / branch.y(x)[:, None]

    result = gauss_legendre(straight_integrand, tol, config.max_quad_nodes, module=module)
    return LegIntegral(result.value, result.error, complex(branch.y(a.x)[0]), complex(branch.y(b.x)[0]))


def detour_vertices(curve: HyperellipticCurve, vertices: List[Vertex], module: str = "abel_jacobi") -> List[Vertex]:
    """Insert a deterministic midpoint detour on legs that graze a branch point

    The detour midpoint is offset by detour_offset * leg length, to the left of
    the direction of travel first, to the right if the left side also fails.
    """
    config = get_settings()
    out = [vertices[0]]
    for a, b in zip(vertices, vertices[1:]):
        try:
            check_clearance(curve, a, b, module=module)
        except ClearanceError:
            span = b.x - a.x
            for side in (1j, -1j):
                mid = Vertex(0.5 * (a.x + b.x) + side * config.detour_offset * span)
                try:
                    check_clearance(curve, a, mid, module=module)
                    check_clearance(curve, mid, b, module=module)
                except ClearanceError:
                    continue
                logger.warning(f"Detour inserted between {a.x} and {b.x}")
                out.append(mid)
                break
            else:
                raise
        out.append(b)
    return out


def integrate_leg_on_sheet(curve: HyperellipticCurve, a: Vertex, b: Vertex, y_at_a: Optional[complex],
                           tol: Optional[float] = None, module: str = "abel_jacobi"):
    """Integrate along a leg starting on the sheet where y(a) = y_at_a

    Returns the integral vector and the continued y at b (None at branch points).
    A leg starting at a branch point starts on the y_leg branch.
    """
    leg = leg_integral(curve, a, b, tol, module=module)
    sign = 1.0
    if not a.is_branch:
        sign = 1.0 if (y_at_a / leg.y_start).real >= 0 else -1.0
    y_end = None if leg.y_end is None else sign * leg.y_end
    return sign * leg.values, leg.error, y_end
