"""Rationality of an Abel-Jacobi tangent vector with respect to the period lattice.

U is called rational when the complex line C.U meets Z^g + Pi Z^g in a rank-2
subgroup. Lattice points near the line are found by reducing the embedding

    row_l = [ e_l | W * Q^T iota(lambda_l) ],   l = 1..2g,

with lambda_l the lattice generators, iota the real embedding C^g -> R^2g,
Q an orthonormal basis of the complement of the real plane spanned by
iota(U), iota(iU), and W = 1/tol. Short rows are integer combinations whose
lattice point lies close to the line.
"""
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..config.settings import get_settings
from ..models.curve import HyperellipticCurve, SurfacePoint
from ..models.periods import PeriodData
from ..models.results import ExperimentTable, LatticeBasis, RationalityVerdict
from ..surfaces.abel_jacobi import aj_jet
from ..surfaces.homology_periods import normalized_jets
from ..utils.exceptions import ExperimentError, LatticeError
from ..utils.logger import get_logger
from ..variation.schiffer_engine import criterion_sum, dual_data_at
from .lll import lll_reduce

logger = get_logger(__name__)

MODULE = "soliton_check"
CRITERION_ORDER = 6


def embed(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def period_lattice(period: PeriodData) -> LatticeBasis:
    g = period.genus
    generators = np.vstack([embed(np.eye(g, dtype=complex)), embed(period.Pi.T)])
    basis = LatticeBasis(generators=generators)
    if basis.normalized_gram_determinant <= 1e-12:
        raise LatticeError("Period lattice generators are not independent over R",
                           details={"gram": basis.normalized_gram_determinant})
    return basis


def line_complement(U: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of the real plane C.U"""
    plane = np.column_stack([embed(U), embed(1j * np.asarray(U))])
    q, _ = np.linalg.qr(plane, mode="complete")
    return q[:, 2:]


def _independent_pair(witnesses: List[np.ndarray]) -> List[np.ndarray]:
    for i, first in enumerate(witnesses):
        for second in witnesses[i + 1:]:
            if np.linalg.matrix_rank(np.vstack([first, second]).astype(float)) == 2:
                return [first, second]
    return witnesses[:1]


def rationality_test(U: np.ndarray, period: PeriodData, tol: Optional[float] = None,
                     bound: Optional[int] = None, delta: Optional[float] = None) -> RationalityVerdict:
    """Search for two independent lattice points on the line C.U"""
    config = get_settings()
    tol = config.rationality_tol if tol is None else tol
    bound = config.rationality_bound if bound is None else bound
    U = np.asarray(U, dtype=complex)
    if not np.any(U):
        raise LatticeError("Tangent vector U must be nonzero")
    g = period.genus
    if g == 1:
        return RationalityVerdict(is_rational=True, witnesses=[[1, 0], [0, 1]], residuals=[0.0, 0.0],
                                  best_residual=0.0, bound=bound, tol=tol)

    lattice = period_lattice(period).generators
    Q = line_complement(U)
    rows = np.hstack([np.eye(2 * g), (lattice @ Q) / tol])
    reduced = lll_reduce(rows, delta)

    candidates: List[Tuple[float, np.ndarray]] = []
    for k in reduced.transform:
        if not np.any(k) or np.max(np.abs(k)) > bound:
            continue
        residual = float(np.linalg.norm((k @ lattice) @ Q))
        candidates.append((residual, k))
    candidates.sort(key=lambda item: item[0])

    witnesses = _independent_pair([k for residual, k in candidates if residual < tol])
    residuals = [r for r, _ in candidates]
    verdict = RationalityVerdict(
        is_rational=len(witnesses) == 2,
        witnesses=[[int(x) for x in k] for k in witnesses],
        residuals=residuals,
        best_residual=residuals[0] if residuals else float("inf"),
        bound=bound,
        tol=tol,
    )
    logger.debug(f"Rationality test: {len(witnesses)} witness(es), best residual {verdict.best_residual:.2e}")
    return verdict


def relation_residuals(U: np.ndarray, period: PeriodData, relations: List[List[int]]) -> List[float]:
    """Distance from the line C.U of the lattice point k . (e, Pi) for each integer relation k"""
    lattice = period_lattice(period).generators
    Q = line_complement(np.asarray(U, dtype=complex))
    return [float(np.linalg.norm((np.asarray(k, dtype=float) @ lattice) @ Q)) for k in relations]


def split_period_matrix(Pi: np.ndarray) -> np.ndarray:
    """Pi with the first row and column decoupled from the rest"""
    split = np.array(Pi, dtype=complex)
    split[0, 1:] = 0
    split[1:, 0] = 0
    return split


def synthetic_rational_control(period: PeriodData, rng: np.random.Generator,
                               max_coefficient: int = 5) -> Tuple[PeriodData, np.ndarray, Tuple[np.ndarray, np.ndarray]]:
    """A lattice point U = m + Pi_s n on the rational line C.e_1 of the split matrix Pi_s

    A lattice point of the unsplit Pi spans a line meeting the lattice in rank 1
    only, which the two-witness test reads as irrational. Decoupling the first
    coordinate makes C.e_1 carry the rank-2 group Z + Pi_11 Z.
    """
    g = period.genus
    split = period.with_pi(split_period_matrix(period.Pi))
    m, n = np.zeros(g, dtype=int), np.zeros(g, dtype=int)
    while m[0] == 0 and n[0] == 0:
        m[0], n[0] = rng.integers(-max_coefficient, max_coefficient + 1, size=2)
    return split, split.lattice_point(m, n), (m, n)


def soliton_breaking_experiment(curve: HyperellipticCurve, period: PeriodData, p: SurfacePoint,
                                p0: SurfacePoint, eps_grid: Optional[Iterable[float]] = None,
                                tol: Optional[float] = None, bound: Optional[int] = None) -> ExperimentTable:
    """Rationality of U(eps) against Pi(eps) under the first-order Schiffer update at p0

    The eps = 0 control is the split matrix Pi_s with U0 = g_1(p) e_1. The
    update is Pi(eps) = Pi_s + eps v v^T and U(eps) = U0 + eps v S_0 with
    v = (f_k(p0)) and S_0 = sum_k f_k(p0) h_k(p).

    The jump is read off the integer relations that witness the control: at
    eps > 0 they are scored against the moved lattice and line. A fresh search
    at eps > 0 also reports its best residual, but with weight 1/tol generic
    Diophantine approximations land within a small factor of tol.
    """
    config = get_settings()
    eps_grid = list(config.eps_grid_soliton if eps_grid is None else eps_grid)
    tol = config.rationality_tol if tol is None else tol
    bound = config.rationality_bound if bound is None else bound

    split = period.with_pi(split_period_matrix(period.Pi))
    lam = aj_jet(curve, period, p, 1).component(1)[0]
    if abs(lam) < 1e-12:
        raise ExperimentError("Degenerate control: first AJ tangent component vanishes at p",
                              experiment="thm-5-5", module=MODULE)
    U0 = np.zeros(period.genus, dtype=complex)
    U0[0] = lam

    f_jets = normalized_jets(curve, period, p0, CRITERION_ORDER)
    v = np.array([jet.coefficients[0] for jet in f_jets])
    criterion = criterion_sum(f_jets, dual_data_at(curve, period, p), derivative=False)
    S0 = criterion.values[0]

    control = rationality_test(U0, split, tol, bound)
    if not control.is_rational:
        logger.warning(f"{curve.name}: eps = 0 control found {len(control.witnesses)} witness(es) only")

    rows = []
    for eps in eps_grid:
        moved = split.with_pi(split.Pi + eps * np.outer(v, v))
        U = U0 + eps * S0 * v
        verdict = control if eps == 0 else rationality_test(U, moved, tol, bound)
        carried = relation_residuals(U, moved, control.witnesses)
        rows.append({
            "eps": float(eps),
            "rational": verdict.is_rational,
            "best_residual": verdict.best_residual,
            "control_residual": max(carried) if carried else float("inf"),
            "witnesses": len(verdict.witnesses),
        })
        logger.info(f"{curve.name}: eps={eps:.1e} rational={verdict.is_rational} "
                    f"best residual {verdict.best_residual:.2e}, "
                    f"control relations {rows[-1]['control_residual']:.2e}")

    perturbed = [r for r in rows if r["eps"] > 0]
    return ExperimentTable(
        name="thm-5-5",
        rows=rows,
        summary={
            "curve": curve.name,
            "p": p.to_wire(),
            "p0": p0.to_wire(),
            "control_rational": control.is_rational,
            "control_witnesses": control.witnesses,
            "min_jump": min((r["control_residual"] / tol for r in perturbed), default=None),
            "min_search_jump": min((r["best_residual"] / tol for r in perturbed), default=None),
            "S0_abs": float(abs(S0)),
            "criterion_max": criterion.max_abs,
            "tol": tol,
            "bound": bound,
        },
    )
