import itertools

import numpy as np
import pytest
from scipy.special import gamma

from schiffer_lab.models.results import Characteristic, Parity
from schiffer_lab.theta.theta_tools import (
    characteristics,
    even_characteristics,
    hyperelliptic_theta_test,
    shortest_vector_bound,
    siegel_factor,
    theta_null,
    theta_null_path_jet,
)
from schiffer_lab.utils.exceptions import SiegelSpaceError, UnsupportedGenusError


def _char(alpha, beta):
    return Characteristic(alpha=tuple(alpha), beta=tuple(beta))


def _direct_sum(Pi, characteristic, width=8):
    a, b = characteristic.a, characteristic.b
    total = 0j
    for n in itertools.product(range(-width, width + 1), repeat=len(a)):
        x = np.array(n) + a
        total += np.exp(1j * np.pi * x @ Pi @ x + 2j * np.pi * x @ b)
    return total


class TestGenusOne:
    def test_square_lattice_value(self):
        value = theta_null(np.array([[1j]]), _char([0], [0])).value
        assert abs(value - np.pi ** 0.25 / gamma(0.75)) < 1e-10
        assert abs(value - 1.0864348112133080) < 1e-10

    @pytest.mark.parametrize("tau", [1j, 0.3 + 0.8j, -0.5 + 0.9j])
    def test_jacobi_quartic_identity(self, tau):
        Pi = np.array([[tau]])
        t00, t10, t01 = (theta_null(Pi, _char(a, b)).value for a, b in ([[0], [0]], [[1], [0]], [[0], [1]]))
        assert abs(t00 ** 4 - t10 ** 4 - t01 ** 4) < 1e-12

    def test_odd_constant_vanishes(self):
        assert abs(theta_null(np.array([[0.2 + 1.1j]]), _char([1], [1])).value) < 1e-12


class TestCharacteristics:
    @pytest.mark.parametrize("g, even", [(1, 3), (2, 10), (3, 36)])
    def test_counts(self, g, even):
        assert len(characteristics(g)) == 4 ** g
        assert len(even_characteristics(g)) == even
        assert all(c.parity is Parity.EVEN for c in even_characteristics(g))

    def test_wire_form(self):
        assert _char([1, 0], [0, 1]).to_wire() == [["1/2", "0"], ["0", "1/2"]]
        assert _char([1, 0], [0, 1]).label() == "[10;01]"


class TestGenusTwoAndThree:
    def test_matches_direct_summation(self, x5_1_periods):
        Pi = x5_1_periods.Pi
        for c in (_char([0, 0], [0, 0]), _char([1, 0], [0, 1]), _char([1, 1], [0, 0])):
            value = theta_null(Pi, c).value
            assert abs(value - _direct_sum(Pi, c)) < 1e-12 * max(1.0, abs(value))

    def test_odd_constants_vanish(self, x5_1_periods):
        odd = [c for c in characteristics(2) if c.parity is Parity.ODD]
        assert len(odd) == 6
        for c in odd:
            assert abs(theta_null(x5_1_periods.Pi, c).value) < 1e-12

    def test_integral_shift_preserves_modulus(self, x5_1_periods):
        Pi = x5_1_periods.Pi
        for c in even_characteristics(2):
            assert np.isclose(abs(theta_null(Pi, c).value), abs(theta_null(Pi + 2 * np.eye(2), c).value),
                              rtol=1e-12, atol=1e-14)

    def test_tail_below_tolerance(self, x5_1_periods):
        constant = theta_null(x5_1_periods.Pi, _char([0, 0], [0, 0]), tail_rel=1e-14)
        assert constant.tail <= 1e-14
        assert constant.points > 1

    def test_genus_two_no_vanishing_even_null(self, x5_1_periods):
        verdict = hyperelliptic_theta_test(x5_1_periods.Pi)
        assert verdict.min_even_null > 1e-4
        assert verdict.vanishing == 0
        assert verdict.is_hyperelliptic

    def test_genus_three_single_vanishing_null(self, genus3_periods):
        verdict = hyperelliptic_theta_test(genus3_periods.Pi)
        assert verdict.vanishing == 1
        assert verdict.min_even_null < 1e-8
        assert verdict.is_hyperelliptic
        others = sorted(verdict.nulls.values())[1:]
        assert min(others) > 1e-4

    def test_shortest_vector_bound_is_a_lower_bound(self, genus3_periods):
        T = siegel_factor(genus3_periods.Pi)
        rho = shortest_vector_bound(T)
        for n in itertools.product(range(-2, 3), repeat=3):
            if any(n):
                assert np.linalg.norm(T @ np.array(n)) >= rho - 1e-12


class TestRejections:
    def test_unsupported_genus(self):
        with pytest.raises(UnsupportedGenusError):
            hyperelliptic_theta_test(1j * np.eye(4))

    def test_imaginary_part_not_positive(self):
        with pytest.raises(SiegelSpaceError):
            theta_null(np.diag([1j, -1j]), _char([0, 0], [0, 0]))

    def test_asymmetric_matrix(self):
        with pytest.raises(SiegelSpaceError):
            siegel_factor(np.array([[1j, 0.5], [0.0, 1j]]))

    def test_genus_mismatch(self, x5_1_periods):
        with pytest.raises(SiegelSpaceError):
            theta_null(x5_1_periods.Pi, _char([0], [0]))


def _random_siegel_point(g, rng):
    A = rng.normal(size=(g, g))
    X = rng.normal(size=(g, g))
    return 0.5 * (X + X.T) + 1j * (A @ A.T / g + 0.5 * np.eye(g))


@pytest.mark.slow
@pytest.mark.parametrize("g", [1, 2, 3])
def test_tail_bound_covers_truncation(g):
    rng = np.random.default_rng(10 + g)
    for _ in range(20):
        Pi = _random_siegel_point(g, rng)
        c = even_characteristics(g)[-1]
        loose = theta_null(Pi, c, tail_rel=1e-6)
        tight = theta_null(Pi, c, tail_rel=1e-15)
        assert tight.radius >= loose.radius
        assert abs(loose.value - tight.value) <= loose.tail + tight.tail + 1e-14


def _symmetric(g, rng, size=0.2):
    X = rng.normal(size=(g, g)) + 1j * rng.normal(size=(g, g))
    return size * 0.5 * (X + X.T)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_path_jet_matches_finite_differences(g):
    rng = np.random.default_rng(40 + g)
    Pi = _random_siegel_point(g, rng)
    A, B = _symmetric(g, rng), _symmetric(g, rng)
    c = even_characteristics(g)[-1]
    jet = theta_null_path_jet(Pi, c, A, B)

    def along(eps):
        return theta_null(Pi + eps * A + eps ** 2 * B, c, tail_rel=1e-16).value

    assert abs(jet.value - theta_null(Pi, c).value) < 1e-13
    h = 1e-4
    assert abs((along(h) - along(-h)) / (2 * h) - jet.first) < 1e-7
    h = 1e-3
    assert abs((along(h) + along(-h) - 2 * along(0.0)) / (2 * h ** 2) - jet.second) < 1e-5


def test_path_jet_without_second_direction(x5_1_periods):
    rng = np.random.default_rng(5)
    A = _symmetric(2, rng)
    c = _char([0, 0], [0, 0])
    plain = theta_null_path_jet(x5_1_periods.Pi, c, A)
    zero = theta_null_path_jet(x5_1_periods.Pi, c, A, np.zeros((2, 2)))
    assert plain.first == zero.first
    assert plain.second == zero.second
    assert plain.first_rate <= 1.0
    assert plain.scale > 0
