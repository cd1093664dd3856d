"""Seeded corpus of random squarefree curves with integer coefficients."""
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..models.curve import HyperellipticCurve
from ..models.periods import PeriodData
from ..surfaces.curve_model import curve_from_coefficients
from ..surfaces.homology_periods import period_matrix
from ..utils.exceptions import ExperimentError, LabError
from ..utils.logger import get_logger

logger = get_logger(__name__)

COEFFICIENT_RANGE = 5


def random_coefficients(genus: int, rng: np.random.Generator) -> List[int]:
    """Ascending integer coefficients in [-5, 5] of a degree 2g+1 polynomial"""
    coeffs = rng.integers(-COEFFICIENT_RANGE, COEFFICIENT_RANGE + 1, size=2 * genus + 2).tolist()
    while coeffs[-1] == 0:
        coeffs[-1] = int(rng.integers(-COEFFICIENT_RANGE, COEFFICIENT_RANGE + 1))
    return [int(c) for c in coeffs]


def random_curve(genus: int, rng: np.random.Generator, with_periods: bool = True, max_attempts: int = 50,
                 name: Optional[str] = None) -> Tuple[HyperellipticCurve, Optional[PeriodData]]:
    """Draw until the polynomial is squarefree and (optionally) its periods certify"""
    for attempt in range(max_attempts):
        coeffs = random_coefficients(genus, rng)
        try:
            curve = curve_from_coefficients(coeffs, name=name or f"g{genus}-" + "_".join(map(str, coeffs)))
            period = period_matrix(curve) if with_periods else None
        except LabError as e:
            logger.warning(f"Resampling corpus curve {coeffs}: {e}")
            continue
        return curve, period
    raise ExperimentError(f"No admissible genus-{genus} curve after {max_attempts} draws")


def corpus(genus: int, count: int, seed: int, with_periods: bool = True) -> Iterator[Tuple[HyperellipticCurve, Optional[PeriodData]]]:
    rng = np.random.default_rng(seed)
    for index in range(count):
        yield random_curve(genus, rng, with_periods, name=f"g{genus}-s{seed}-{index}")
