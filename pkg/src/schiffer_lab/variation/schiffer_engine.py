"""Period matrix and differential jets under a Schiffer variation at p0.

In the chart t at p0 the normalized differentials have densities f_j(t) and
the harmonic dual forms have holomorphic parts e_k(t) = sum_m M_km f_m(t).
The deformed differentials are

    f*_j(t) = f_j(t) + sum_k C_jk(eps) e_k(t),     C(eps) = sum_{r>=1} eps^r C^(r),

and the eps^N coefficient of the deformed period matrix collects

    T^(N)_ij = sum_{n+r=N, n>=1} 1/(n!(n-1)!) sum_{s+m=n-1} binom(n-1, m)
                  D^{n-1+m} F_i^(r)(0) D^s f_j(0)

where F^(r) is the eps^r part of f* (F^(0) = f). The same expression gives
C^(N), so the orders are solved one after another from known lower orders.
"""
from math import comb, factorial
from typing import List, Optional, Union

import numpy as np

from ..config.settings import get_settings
from ..models.curve import ChartKind, HyperellipticCurve, LocalJet, SurfacePoint
from ..models.periods import PeriodData
from ..models.results import CriterionSum, DualFormData, SchifferOrder, SchifferSeries
from ..surfaces.homology_periods import dual_form_local_data, normalized_jets
from ..utils.exceptions import AnchorMismatchError, ChartError, JetOrderError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MODULE = "schiffer_engine"


def jet_values(jets: List[LocalJet]) -> np.ndarray:
    """Matrix of t-derivatives D^s f_j(0), rows j, columns s"""
    return np.array([jet.derivatives() for jet in jets])


def first_order_update(period: PeriodData, jets: List[LocalJet]) -> np.ndarray:
    """Outer product v v^T of the normalized densities at p0; the caller scales by eps"""
    if len(jets) != period.genus:
        raise AnchorMismatchError(f"Expected {period.genus} jets at p0, got {len(jets)}", module=MODULE)
    v = np.array([jet.coefficients[0] for jet in jets], dtype=complex)
    return np.outer(v, v)


def _order_term(N: int, F: np.ndarray, Df: np.ndarray) -> np.ndarray:
    """T^(N) from the derivative tables F[r] of the eps^r parts of f*"""
    g = Df.shape[0]
    T = np.zeros((g, g), dtype=complex)
    for n in range(1, N + 1):
        r = N - n
        weight = 1.0 / (factorial(n) * factorial(n - 1))
        for m in range(n):
            s = n - 1 - m
            T += weight * comb(n - 1, m) * np.outer(F[r][:, n - 1 + m], Df[:, s])
    return T


def schiffer_series(curve: HyperellipticCurve, period: PeriodData, p0: SurfacePoint, order: int,
                    jet_order: Optional[int] = None, chart_scale: complex = 1.0) -> SchifferSeries:
    """Order-by-order eps-expansion of Pi* and of the f*-jets at p0"""
    if p0.chart is not ChartKind.ORDINARY:
        raise ChartError("Schiffer variation is supported at ordinary points only", module=MODULE)
    if order < 1:
        raise JetOrderError("Series order must be at least 1", requested=order, allowed=1, module=MODULE)
    needed = 2 * order - 1
    jet_order = needed if jet_order is None else jet_order
    if jet_order < needed:
        raise JetOrderError(f"Order {order} needs jets to t-order {needed}", requested=needed,
                            allowed=jet_order, module=MODULE)
    if jet_order > get_settings().max_jet_order:
        raise JetOrderError("Jet order outside the configured budget", requested=jet_order,
                            allowed=get_settings().max_jet_order, module=MODULE)

    jets = normalized_jets(curve, period, p0, jet_order, chart_scale)
    dual = dual_form_local_data(period, jets)
    Df = jet_values(jets)
    De = jet_values(dual.jets)

    g, width = Df.shape
    F = np.zeros((order, g, width), dtype=complex)
    F[0] = Df
    C = np.zeros((order, g, g), dtype=complex)
    terms = []
    for N in range(1, order + 1):
        T = _order_term(N, F, Df)
        C[N - 1] = T
        if N < order:
            F[N] = T @ De
        antisym = 0.5 * float(np.max(np.abs(T - T.T)))
        terms.append(SchifferOrder(n=N, dPi=0.5 * (T + T.T), raw=T, antisymmetric_residual=antisym))
        logger.debug(f"Schiffer order {N}: |dPi| {np.max(np.abs(T)):.3e}, antisymmetric part {antisym:.3e}")

    facts = np.array([factorial(s) for s in range(width)], dtype=float)
    return SchifferSeries(
        p0=p0,
        chart_scale=chart_scale,
        base=np.array(period.Pi),
        orders=terms,
        C=C,
        star_jets=F / facts,
    )


def criterion_sum(f_jets: List[LocalJet], h: Union[DualFormData, np.ndarray], derivative: bool = False,
                  order: Optional[int] = None) -> CriterionSum:
    """S_i = sum_k D^i f_k(p0) h_k(p) for i = 0..order

    With ``derivative`` set h'_k(p) replaces h_k(p). ``h`` may also be a raw
    vector of length g standing in for the dual-form data.
    """
    anchor = f_jets[0].anchor
    if any(not jet.anchor.same_place(anchor) for jet in f_jets):
        raise AnchorMismatchError("f-jets are not anchored at a common p0", module=MODULE)
    if isinstance(h, DualFormData):
        if h.anchor.same_place(anchor):
            raise AnchorMismatchError("The criterion needs p distinct from p0", module=MODULE)
        weights = h.derivatives if derivative else h.values
    else:
        weights = np.asarray(h, dtype=complex)
    if len(weights) != len(f_jets):
        raise AnchorMismatchError("Dual data and jets disagree on the genus", module=MODULE)

    Df = jet_values(f_jets)
    order = Df.shape[1] - 1 if order is None else order
    if order > Df.shape[1] - 1:
        raise JetOrderError("Criterion order exceeds the jet order", requested=order,
                            allowed=Df.shape[1] - 1, module=MODULE)
    return CriterionSum(values=Df[:, :order + 1].T @ weights, derivative=derivative)


def dual_data_at(curve: HyperellipticCurve, period: PeriodData, p: SurfacePoint, order: int = 1) -> DualFormData:
    return dual_form_local_data(period, normalized_jets(curve, period, p, order))
