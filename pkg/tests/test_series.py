import numpy as np
import pytest

from schiffer_lab.surfaces.series import PowerSeries, deflate, taylor_shift


def test_inverse_of_one_minus_t_is_geometric():
    inv = PowerSeries([1, -1], order=8).inverse()
    assert np.allclose(inv.coeffs, np.ones(9))


def test_sqrt_squares_back():
    a = PowerSeries([4, 1, -2, 0.5, 3j], order=10)
    s = a.sqrt()
    assert s.coeffs[0] == pytest.approx(2.0)
    assert np.allclose((s * s).coeffs, a.coeffs, atol=1e-13)


def test_sqrt_respects_requested_root():
    s = PowerSeries([4, 1], order=5).sqrt(root0=-2.0)
    assert s.coeffs[0] == pytest.approx(-2.0)
    assert np.allclose((s * s).coeffs, PowerSeries([4, 1], order=5).coeffs)


def test_zero_constant_term_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        PowerSeries([0, 1], order=3).inverse()


def test_taylor_shift_matches_polynomial_values():
    coeffs = [1, -2, 0, 3]
    shifted = taylor_shift(coeffs, 0.5 + 0.25j, order=3)
    t = 0.1 - 0.2j
    direct = np.polyval(np.array(coeffs[::-1], dtype=complex), 0.5 + 0.25j + t)
    assert shifted.evaluate(t) == pytest.approx(direct)


def test_deflate_removes_root():
    # x^3 - 1 = (x - 1)(x^2 + x + 1)
    assert np.allclose(deflate([-1, 0, 0, 1], 1.0), [1, 1, 1])


def test_compose_even_places_coefficients_on_even_powers():
    a = PowerSeries([1, 2, 3], order=2).compose_even()
    assert a.order == 2
    assert np.allclose(a.coeffs, [1, 0, 2])


def test_derivative_values_scale_by_factorials():
    a = PowerSeries([1, 1, 1, 1], order=3)
    assert np.allclose(a.derivative_values(), [1, 1, 2, 6])
