"""Canonical homology, cycle integrals and the normalized period matrix.

Branch points e_0, e_1, ... are taken in their lexicographic order and joined
by the straight segments S_k = [e_k, e_{k+1}], k = 0..2g-1. A thin loop
around S_k integrates a differential to twice its segment integral. With
0-based cycle indices

    a_i = +-loop(S_{2i}),     b_i = sum_{m >= i} +-loop(S_{2m+1}),

which is the standard hyperelliptic pairing up to the orientation signs. The
signs are fixed by requiring the Riemann relations: the assignment whose
period matrix is symmetric with positive definite imaginary part is kept.
"""
import itertools
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import get_settings
from ..models.curve import HyperellipticCurve, LocalJet, SurfacePoint, combine_jets
from ..models.periods import Cycle, CycleKind, CycleSegment, PeriodData
from ..models.results import DualFormData
from ..utils.exceptions import AnchorMismatchError, HomologyError, PeriodMatrixError
from ..utils.logger import get_logger
from .curve_model import basis_jets
from .paths import Vertex, leg_integral

logger = get_logger(__name__)

MODULE = "homology_periods"


def canonical_homology(curve: HyperellipticCurve) -> List[Cycle]:
    """The 2g cycles a_1..a_g, b_1..b_g with unit orientation signs"""
    g = curve.genus
    if g < 1:
        raise HomologyError("Genus 0 curves have no homology", details={"genus": g})
    cycles = [Cycle(kind=CycleKind.A, index=i + 1, segments=(CycleSegment(start=2 * i),))
              for i in range(g)]
    cycles += [
        Cycle(kind=CycleKind.B, index=i + 1,
              segments=tuple(CycleSegment(start=2 * m + 1) for m in range(i, g)))
        for i in range(g)
    ]
    return cycles


def segment_integrals(curve: HyperellipticCurve, tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Integrals of x^{j-1} dx / y over S_k, shape (2g, g), with per-segment error estimates"""
    g = curve.genus
    values = np.zeros((2 * g, g), dtype=complex)
    errors = np.zeros(2 * g)
    for k in range(2 * g):
        a = Vertex(complex(curve.branch_points[k]), k)
        b = Vertex(complex(curve.branch_points[k + 1]), k + 1)
        leg = leg_integral(curve, a, b, tol, module=MODULE)
        values[k], errors[k] = leg.values, leg.error
    return values, errors


def cycle_integral(curve: HyperellipticCurve, j: int, cycle: Cycle,
                   segments: Optional[np.ndarray] = None, tol: Optional[float] = None) -> complex:
    """Contour integral of x^{j-1} dx / y over a cycle"""
    if not 1 <= j <= curve.genus:
        raise HomologyError(f"Basis index {j} outside 1..{curve.genus}")
    if segments is None:
        segments, _ = segment_integrals(curve, tol)
    return complex(sum(2.0 * seg.sign * segments[seg.start, j - 1] for seg in cycle.segments))


def _cycle_matrix(cycles: Sequence[Cycle], segments: np.ndarray) -> np.ndarray:
    """Column c holds the integrals of all basis differentials over cycles[c]"""
    return np.column_stack([
        sum(2.0 * seg.sign * segments[seg.start] for seg in cycle.segments) for cycle in cycles
    ])


def _assemble(A: np.ndarray, B: np.ndarray):
    C = np.linalg.inv(A)
    Pi = (C @ B).T
    residual = float(np.max(np.abs(Pi - Pi.T)))
    np.linalg.cholesky(0.5 * (Pi + Pi.T).imag)
    return C, Pi, residual


def period_matrix(curve: HyperellipticCurve, tol: Optional[float] = None,
                  segments: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> PeriodData:
    """Normalized period matrix with the Riemann relations certified

    ``segments`` lets a caller supply externally computed segment integrals
    (values, errors) so other quadrature families go through the same
    homology construction.
    """
    config = get_settings()
    g = curve.genus
    base_cycles = canonical_homology(curve)
    values, errors = segments if segments is not None else segment_integrals(curve, tol)
    certificate = config.certificate_tol

    best = None
    for tail in itertools.product((1, -1), repeat=2 * g - 1):
        signs = (1,) + tail
        cycles = [cycle.with_signs(signs) for cycle in base_cycles]
        A = _cycle_matrix(cycles[:g], values)
        B = _cycle_matrix(cycles[g:], values)
        try:
            C, Pi, residual = _assemble(A, B)
        except np.linalg.LinAlgError:
            continue
        scale = max(1.0, float(np.max(np.abs(Pi))))
        logger.debug(f"Signs {signs}: symmetry residual {residual:.3e}")
        if best is None or residual / scale < best[0]:
            best = (residual / scale, cycles, A, B, C, Pi, residual)
        if residual <= certificate * scale:
            break

    if best is None:
        raise PeriodMatrixError("No orientation of the cycles gives Im Pi > 0; A-periods singular or "
                                "homology construction failed")
    relative, cycles, A, B, C, Pi, residual = best
    if relative > certificate:
        raise PeriodMatrixError("Period matrix fails the symmetry certificate", residual=residual,
                                details={"curve": curve.name, "certificate": certificate})

    Pi = 0.5 * (Pi + Pi.T)
    min_eig = float(np.min(np.linalg.eigvalsh(Pi.imag)))
    M = np.linalg.inv(2j * Pi.imag)
    quad_error = 2.0 * float(np.max(errors)) * g * float(np.max(np.abs(C))) * max(1.0, float(np.max(np.abs(Pi))))
    data = PeriodData(
        curve_name=curve.name,
        A=A,
        B=B,
        C=C,
        Pi=Pi,
        M=M,
        error=max(quad_error, residual),
        symmetry_residual=residual,
        min_imag_eigenvalue=min_eig,
        cycles=cycles,
    )
    logger.info(f"Period matrix for {curve.name} (g={g}): symmetry residual {residual:.2e}, "
                f"min eig Im Pi {min_eig:.3e}")
    return data


def normalized_jets(curve: HyperellipticCurve, period: PeriodData, anchor: SurfacePoint, order: int,
                    chart_scale: complex = 1.0) -> List[LocalJet]:
    """Jets of the normalized differentials omega_i = sum_k C_ik omega_hat_k"""
    jets = basis_jets(curve, anchor, order, chart_scale)
    return combine_jets(jets, period.C, labels=[f"omega_{i + 1}" for i in range(curve.genus)])


def dual_form_local_data(period: PeriodData, jets: List[LocalJet]) -> DualFormData:
    """h_k jets, h_k = sum_m M_km omega_m, of the harmonic dual forms"""
    if len(jets) != period.genus:
        raise AnchorMismatchError(f"Expected {period.genus} jets, got {len(jets)}")
    first = jets[0]
    for jet in jets[1:]:
        if not jet.anchor.same_place(first.anchor) or jet.chart_scale != first.chart_scale \
                or jet.order != first.order:
            raise AnchorMismatchError("Jets do not share a common anchor and chart",
                                      details={"anchors": [j.anchor.to_wire() for j in jets]})
    h = combine_jets(jets, period.M, labels=[f"h_{k + 1}" for k in range(period.genus)])
    return DualFormData(anchor=first.anchor, jets=h)
