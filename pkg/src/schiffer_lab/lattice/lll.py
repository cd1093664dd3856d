"""Lenstra-Lenstra-Lovasz reduction of a row basis in floating point."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..config.settings import get_settings
from ..utils.exceptions import LatticeError
from ..utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ReducedBasis:
    """Reduced rows together with the unimodular U such that reduced = U @ input"""
    basis: np.ndarray
    transform: np.ndarray
    swaps: int

    @property
    def shortest(self) -> np.ndarray:
        return self.basis[0]


def gram_schmidt(B: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Orthogonalized rows B* and coefficients mu with B = mu B*"""
    n = B.shape[0]
    Bs = np.zeros_like(B, dtype=float)
    mu = np.eye(n)
    for i in range(n):
        Bs[i] = B[i]
        for j in range(i):
            mu[i, j] = B[i] @ Bs[j] / (Bs[j] @ Bs[j])
            Bs[i] = Bs[i] - mu[i, j] * Bs[j]
    return Bs, mu


def _check_independent(Bs: np.ndarray, scale: float) -> np.ndarray:
    norms = np.einsum("ij,ij->i", Bs, Bs)
    if np.any(norms <= 1e-24 * scale):
        raise LatticeError("Degenerate basis: rows are linearly dependent",
                           details={"min_gram_schmidt_norm": float(np.min(norms))})
    return norms


def lll_reduce(basis, delta: Optional[float] = None) -> ReducedBasis:
    """Reduce the rows of ``basis`` until size reduction and the Lovasz condition hold"""
    delta = get_settings().lll_delta if delta is None else delta
    if not 0.25 < delta < 1:
        raise LatticeError("Lovasz parameter must lie in (0.25, 1)", details={"delta": delta})
    original = np.asarray(basis)
    B = np.array(original, dtype=float)
    if B.ndim != 2 or B.shape[0] < 1:
        raise LatticeError("Basis must be a non-empty matrix of row vectors")
    n = B.shape[0]
    U = np.eye(n, dtype=np.int64)
    scale = float(np.max(np.einsum("ij,ij->i", B, B)))

    Bs, mu = gram_schmidt(B)
    norms = _check_independent(Bs, scale)
    k, swaps = 1, 0
    while k < n:
        for j in range(k - 1, -1, -1):
            q = np.rint(mu[k, j])
            if q != 0:
                B[k] -= q * B[j]
                U[k] -= int(q) * U[j]
                mu[k, :j] -= q * mu[j, :j]
                mu[k, j] -= q
        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            B[[k - 1, k]] = B[[k, k - 1]]
            U[[k - 1, k]] = U[[k, k - 1]]
            swaps += 1
            Bs, mu = gram_schmidt(B)
            norms = _check_independent(Bs, scale)
            k = max(k - 1, 1)

    logger.debug(f"LLL finished after {swaps} swaps (dim {n})")
    if np.issubdtype(original.dtype, np.integer):
        B = np.rint(B).astype(np.int64)
    return ReducedBasis(basis=B, transform=U, swaps=swaps)


def is_lll_reduced(basis, delta: float = 0.99, eta: float = 0.5 + 1e-9) -> bool:
    B = np.array(basis, dtype=float)
    Bs, mu = gram_schmidt(B)
    norms = np.einsum("ij,ij->i", Bs, Bs)
    n = B.shape[0]
    for i in range(1, n):
        if np.any(np.abs(mu[i, :i]) > eta):
            return False
        if norms[i] < (delta - mu[i, i - 1] ** 2) * norms[i - 1] * (1 - 1e-12):
            return False
    return True
