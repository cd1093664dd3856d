import logging
from pathlib import Path

import pytest

from schiffer_lab.config.settings import reset_settings
from schiffer_lab.surfaces.curve_model import curve_from_coefficients, parse_curve
from schiffer_lab.surfaces.homology_periods import period_matrix

CURVES_DIR = Path(__file__).resolve().parent.parent / "curves"


@pytest.fixture(autouse=True)
def _fresh_settings():
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(autouse=True)
def _restore_root_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture(scope="session")
def curves_dir() -> Path:
    return CURVES_DIR


@pytest.fixture(scope="session")
def x3_x():
    return parse_curve(CURVES_DIR / "x3-x.json")


@pytest.fixture(scope="session")
def x3_1():
    return parse_curve(CURVES_DIR / "x3-1.json")


@pytest.fixture(scope="session")
def x4_1():
    return parse_curve(CURVES_DIR / "x4-1.json")


@pytest.fixture(scope="session")
def x5_1():
    return parse_curve(CURVES_DIR / "x5-1.json")


@pytest.fixture(scope="session")
def genus3():
    """A fixed genus-3 hyperelliptic curve with integer coefficients and no symmetry"""
    return curve_from_coefficients([1, -2, 0, 3, -1, 0, 2, 1], name="g3-fixed")


@pytest.fixture(scope="session")
def x3_x_periods(x3_x):
    return period_matrix(x3_x)


@pytest.fixture(scope="session")
def x3_1_periods(x3_1):
    return period_matrix(x3_1)


@pytest.fixture(scope="session")
def x5_1_periods(x5_1):
    return period_matrix(x5_1)


@pytest.fixture(scope="session")
def genus3_periods(genus3):
    return period_matrix(genus3)
