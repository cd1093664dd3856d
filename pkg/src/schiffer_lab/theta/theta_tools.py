"""Riemann theta constants with half-integer characteristics.

theta[a;b](0, Pi) = sum_n exp(i pi (n+a)^T Pi (n+a) + 2 i pi (n+a)^T b)

summed over the lattice points with ||T (n+a)|| < R, where T^T T = pi Im Pi.
The radius is grown until the Gaussian tail bound

    (g/2) (2/rho)^g Gamma(g/2, (R - rho/2)^2)

falls below theta_tail_rel times the largest term; rho is a lower bound on the
shortest vector of the lattice T Z^g obtained from an LLL-reduced basis.
"""
import itertools
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import gamma, gammaincc

from ..config.settings import get_settings
from ..lattice.lll import lll_reduce
from ..models.results import Characteristic, HyperThetaVerdict, Parity, ThetaConstant, ThetaPathJet
from ..utils.exceptions import SiegelSpaceError, ThetaConvergenceError, UnsupportedGenusError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MAX_RADIUS_STEPS = 40


def characteristics(g: int) -> List[Characteristic]:
    bits = list(itertools.product((0, 1), repeat=g))
    return [Characteristic(alpha=alpha, beta=beta) for alpha in bits for beta in bits]


def even_characteristics(g: int) -> List[Characteristic]:
    return [c for c in characteristics(g) if c.parity is Parity.EVEN]


def siegel_factor(Pi: np.ndarray) -> np.ndarray:
    """Upper triangular T with ||T x||^2 = pi x^T Im(Pi) x"""
    Pi = np.asarray(Pi, dtype=complex)
    if Pi.ndim != 2 or Pi.shape[0] != Pi.shape[1]:
        raise SiegelSpaceError("Period matrix must be square")
    if np.max(np.abs(Pi - Pi.T)) > 1e-8 * max(1.0, float(np.max(np.abs(Pi)))):
        raise SiegelSpaceError("Period matrix is not symmetric")
    try:
        L = np.linalg.cholesky(Pi.imag)
    except np.linalg.LinAlgError as e:
        raise SiegelSpaceError("Im Pi is not positive definite",
                               min_eigenvalue=float(np.min(np.linalg.eigvalsh(Pi.imag))), cause=e)
    return np.sqrt(np.pi) * L.T


def shortest_vector_bound(T: np.ndarray) -> float:
    """Lower bound on the shortest nonzero vector of T Z^g"""
    g = T.shape[0]
    reduced = lll_reduce(T.T)
    return float(np.linalg.norm(reduced.shortest)) / 2 ** ((g - 1) / 2)


def tail_bound(g: int, radius: float, rho: float) -> float:
    x = (radius - rho / 2) ** 2
    return float(g / 2 * (2 / rho) ** g * gamma(g / 2) * gammaincc(g / 2, x))


def _lattice_points(T: np.ndarray, shift: np.ndarray, radius: float, max_points: int) -> np.ndarray:
    """All n + shift with ||T (n + shift)|| < radius"""
    widths = radius * np.linalg.norm(np.linalg.inv(T), axis=1)
    ranges = [np.arange(np.ceil(-s - w), np.floor(-s + w) + 1) for s, w in zip(shift, widths)]
    count = int(np.prod([len(r) for r in ranges]))
    if count > max_points:
        raise ThetaConvergenceError("Theta summation box exceeds the point budget; Im Pi is ill-conditioned",
                                    points=count)
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, len(shift)) + shift
    z = grid @ T.T
def _summed_terms(Pi: np.ndarray, characteristic: Characteristic, tail_rel: float, max_points: int,
                  extra_radius: float = 0.0) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """Lattice points n + a and their theta terms, with the radius grown until the tail bound passes"""
    g = Pi.shape[0]
    if characteristic.genus != g:
        raise SiegelSpaceError(f"Characteristic of genus {characteristic.genus} for a {g}x{g} matrix")

    T = siegel_factor(Pi)
    rho = shortest_vector_bound(T)
    a, b = characteristic.a, characteristic.b
    radius = max((np.sqrt(g) + rho) / 2, np.sqrt(-np.log(tail_rel)) + rho / 2)
    for _ in range(MAX_RADIUS_STEPS):
        X = _lattice_points(T, a, radius + extra_radius, max_points)
        quad = np.einsum("ni,ij,nj->n", X, Pi, X)
        terms = np.exp(1j * np.pi * quad + 2j * np.pi * (X @ b))
        lead = float(np.max(np.abs(terms))) if len(terms) else 0.0
        tail = tail_bound(g, radius, rho)
        if lead > 0 and tail <= tail_rel * lead:
            return X, terms, float(radius + extra_radius), tail
        radius += 1.0
    raise ThetaConvergenceError("Theta tail bound did not reach the requested tolerance", points=len(terms))


def theta_null(Pi: np.ndarray, characteristic: Characteristic, tail_rel: Optional[float] = None,
               max_points: Optional[int] = None) -> ThetaConstant:
    """theta[a;b](0, Pi) with a certified truncation radius"""
    config = get_settings()
    tail_rel = config.theta_tail_rel if tail_rel is None else tail_rel
    max_points = config.theta_max_points if max_points is None else max_points
    Pi = np.asarray(Pi, dtype=complex)

    X, terms, radius, tail = _summed_terms(Pi, characteristic, tail_rel, max_points)
    value = complex(np.sum(terms))
    logger.debug(f"theta{characteristic.label()}: R={radius:.2f}, {len(terms)} points, tail {tail:.1e}")
    return ThetaConstant(characteristic=characteristic, value=value, radius=radius,
                         tail=tail, points=len(terms))


def theta_null_path_jet(Pi: np.ndarray, characteristic: Characteristic, first: np.ndarray,
                        second: Optional[np.ndarray] = None, tail_rel: Optional[float] = None,
                        max_points: Optional[int] = None) -> ThetaPathJet:
    """Taylor coefficients of eps -> theta[c](0, Pi + eps A + eps^2 B) up to eps^2

    Termwise, exp(i pi m^T (eps A + eps^2 B) m) = 1 + eps q_A + eps^2 (q_B + q_A^2 / 2) + ...
    with q_X = i pi m^T X m. The polynomial weights grow with |m|, so the sum
    runs two units past the certified radius of the plain constant.
    """
    config = get_settings()
    tail_rel = config.theta_tail_rel if tail_rel is None else tail_rel
    max_points = config.theta_max_points if max_points is None else max_points
    Pi = np.asarray(Pi, dtype=complex)
    A = np.asarray(first, dtype=complex)
    B = np.zeros_like(A) if second is None else np.asarray(second, dtype=complex)
    if A.shape != Pi.shape or B.shape != Pi.shape:
        raise SiegelSpaceError("Path directions must match the period matrix shape")

    X, terms, radius, _ = _summed_terms(Pi, characteristic, tail_rel, max_points, extra_radius=2.0)
    q_a = 1j * np.pi * np.einsum("ni,ij,nj->n", X, A, X)
    q_b = 1j * np.pi * np.einsum("ni,ij,nj->n", X, B, X)
    return ThetaPathJet(
        characteristic=characteristic,
        value=complex(np.sum(terms)),
        first=complex(np.sum(q_a * terms)),
        second=complex(np.sum((q_b + 0.5 * q_a ** 2) * terms)),
        scale=float(np.sum(np.abs(q_a * terms))),
        radius=radius,
    )


def even_nulls(Pi: np.ndarray) -> List[ThetaConstant]:
    Pi = np.asarray(Pi, dtype=complex)
    return [theta_null(Pi, c) for c in even_characteristics(Pi.shape[0])]


def hyperelliptic_theta_test(Pi: np.ndarray, genus: Optional[int] = None,
                             threshold: Optional[float] = None) -> HyperThetaVerdict:
    """Minimum |even theta-null| and the vanishing-count verdict (exactly one for g = 3)"""
    Pi = np.asarray(Pi, dtype=complex)
    g = Pi.shape[0] if genus is None else genus
    if g not in (1, 2, 3) or Pi.shape != (g, g):
        raise UnsupportedGenusError("Theta-null hyperellipticity test covers genus 1 to 3", genus=g)
    threshold = get_settings().effective_theta_threshold if threshold is None else threshold

    constants = even_nulls(Pi)
    moduli = np.array([abs(c.value) for c in constants])
    best = int(np.argmin(moduli))
    vanishing = int(np.sum(moduli < threshold))
    return HyperThetaVerdict(
        genus=g,
        min_even_null=float(moduli[best]),
        index=constants[best].characteristic,
        is_hyperelliptic=True if g <= 2 else vanishing == 1,
        vanishing=vanishing,
        threshold=threshold,
        nulls={c.characteristic.label(): float(m) for c, m in zip(constants, moduli)},
    )
