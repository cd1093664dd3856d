import mpmath
import numpy as np
import pytest

from schiffer_lab.experiments.corpus import corpus
from schiffer_lab.models.curve import SurfacePoint
from schiffer_lab.models.periods import CycleKind, PeriodData
from schiffer_lab.surfaces.abel_jacobi import abel_jacobi
from schiffer_lab.surfaces.curve_model import curve_from_coefficients
from schiffer_lab.surfaces.homology_periods import (
    canonical_homology,
    cycle_integral,
    dual_form_local_data,
    normalized_jets,
    period_matrix,
    segment_integrals,
)
from schiffer_lab.utils.exceptions import AnchorMismatchError, HomologyError


def lemniscate_constant() -> float:
    return float(mpmath.pi / mpmath.agm(1, mpmath.sqrt(2)))


def _inside_triangle(z, corners) -> bool:
    signs = []
    for u, w in zip(corners, corners[1:] + corners[:1]):
        signs.append(((w - u).conjugate() * (z - u)).imag)
    return all(s >= 0 for s in signs) or all(s <= 0 for s in signs)


def _bend(a, b, others):
    """Apex of a bent path a -> c -> b whose triangle with [a, b] holds no other branch point"""
    mid = (a + b) / 2
    for height in (0.3, 0.2, 0.1, 0.05):
        for side in (1, -1):
            c = mid + side * height * 1j * (b - a)
            if not any(_inside_triangle(e, [a, c, b]) for e in others):
                return c
    raise AssertionError("no admissible bend for the segment")


def tanh_sinh_segments(curve, dps: int = 30) -> np.ndarray:
    """Segment integrals by mpmath tanh-sinh along a bent contour a -> c -> b

    y is the product of sqrt factors whose cuts point away from the straight
    segment midpoint. Those cuts stay clear of the triangle a, c, b, so the
    bent path is homotopic to the straight one with the same branch of y.
    """
    g = curve.genus
    points = [complex(z) for z in curve.branch_points]
    roots = [mpmath.mpc(z) for z in points]
    lead = mpmath.mpc(curve.leading)
    values = np.zeros((2 * g, g), dtype=complex)
    with mpmath.workdps(dps):
        for k in range(2 * g):
            a, b = roots[k], roots[k + 1]
            mid = (a + b) / 2
            rotations = [(mid - e) / abs(mid - e) for e in roots]
            c = mpmath.mpc(_bend(points[k], points[k + 1], points[:k] + points[k + 2:]))

            def y(x):
                out = mpmath.sqrt(lead)
                for e, r in zip(roots, rotations):
                    out *= mpmath.sqrt(r) * mpmath.sqrt((x - e) / r)
                return out

            for j in range(1, g + 1):
                values[k, j - 1] = complex(mpmath.quad(lambda x, j=j: x ** (j - 1) / y(x), [a, c, b]))
    return values


class TestCanonicalHomology:
    @pytest.mark.parametrize("coeffs,count", [
        ([0, -1, 0, 1], 2),
        ([-1, 0, 0, 0, 0, 1], 4),
        ([1, -2, 0, 3, -1, 0, 2, 1], 6),
    ])
    def test_cycle_count(self, coeffs, count):
        cycles = canonical_homology(curve_from_coefficients(coeffs))
        assert len(cycles) == count

    def test_pairing_labels(self, x5_1):
        cycles = canonical_homology(x5_1)
        assert [c.label for c in cycles] == ["a1", "a2", "b1", "b2"]
        assert cycles[0].kind is CycleKind.A
        assert [s.start for s in cycles[0].segments] == [0]
        assert [s.start for s in cycles[2].segments] == [1, 3]
        assert [s.start for s in cycles[3].segments] == [3]


class TestGenusOne:
    def test_segment_integral_matches_agm(self, x3_x):
        values, errors = segment_integrals(x3_x)
        assert abs(abs(values[0, 0]) - lemniscate_constant()) < 1e-10
        assert abs(abs(values[1, 0]) - lemniscate_constant()) < 1e-10
        assert np.max(errors) < 1e-11

    def test_square_lattice_modulus(self, x3_x_periods):
        tau = complex(x3_x_periods.Pi[0, 0])
        assert tau.imag > 0
        assert abs(complex(mpmath.kleinj(tau)) - 1) < 1e-10

    def test_hexagonal_lattice_modulus(self, x3_1_periods):
        tau = complex(x3_1_periods.Pi[0, 0])
        assert abs(complex(mpmath.kleinj(tau))) < 1e-10

    def test_even_degree_model(self, x4_1):
        tau = complex(period_matrix(x4_1).Pi[0, 0])
        assert abs(complex(mpmath.kleinj(tau)) - 1) < 1e-10

    def test_a_cycle_normalization(self, x3_x, x3_x_periods):
        a1 = x3_x_periods.cycles[0]
        assert x3_x_periods.C[0, 0] * cycle_integral(x3_x, 1, a1) == pytest.approx(1.0, abs=1e-12)

    def test_cycle_integral_rejects_bad_index(self, x3_x, x3_x_periods):
        with pytest.raises(HomologyError):
            cycle_integral(x3_x, 2, x3_x_periods.cycles[0])


class TestRiemannRelations:
    def test_genus_two(self, x5_1_periods):
        assert x5_1_periods.symmetry_residual < 1e-10
        assert x5_1_periods.min_imag_eigenvalue > 0
        assert np.allclose(x5_1_periods.Pi, x5_1_periods.Pi.T)

    def test_genus_three(self, genus3_periods):
        assert genus3_periods.symmetry_residual < 1e-10
        assert genus3_periods.min_imag_eigenvalue > 0

    def test_a_periods_are_identity(self, x5_1_periods):
        assert np.allclose(x5_1_periods.C @ x5_1_periods.A, np.eye(2), atol=1e-12)

    def test_dual_matrix(self, x5_1_periods):
        assert np.allclose(x5_1_periods.M @ (2j * x5_1_periods.Pi.imag), np.eye(2), atol=1e-12)

    @pytest.mark.slow
    @pytest.mark.parametrize("genus", [1, 2, 3])
    def test_corpus_curves_certify(self, genus):
        for curve, period in corpus(genus, 10, seed=11):
            assert period.symmetry_residual < 1e-10 * max(1.0, np.max(np.abs(period.Pi))), curve.name
            assert period.min_imag_eigenvalue > 0, curve.name


class TestIndependentQuadrature:
    def test_tanh_sinh_oracle_genus_two(self, x5_1, x5_1_periods):
        oracle = tanh_sinh_segments(x5_1)
        assert np.all(np.isfinite(oracle))
        values, _ = segment_integrals(x5_1)
        assert np.max(np.abs(values - oracle)) < 1e-10
        rebuilt = period_matrix(x5_1, segments=(oracle, np.zeros(4)))
        assert np.max(np.abs(rebuilt.Pi - x5_1_periods.Pi)) < 1e-8

    def test_halving_tolerance_stays_within_error(self, x5_1, x5_1_periods):
        finer = period_matrix(x5_1, tol=0.5e-12)
        assert np.max(np.abs(finer.Pi - x5_1_periods.Pi)) <= x5_1_periods.error + 1e-13

    def test_coefficient_perturbation_is_continuous(self, x5_1_periods):
        moved = period_matrix(curve_from_coefficients(["-1.000001", 0, 0, 0, 0, 1]))
        assert np.max(np.abs(moved.Pi - x5_1_periods.Pi)) < 1e-4


class TestDualFormData:
    def test_row_identity(self, x5_1, x5_1_periods):
        jets = normalized_jets(x5_1, x5_1_periods, SurfacePoint.ordinary(2.0), 3)
        dual = dual_form_local_data(x5_1_periods, jets)
        omega = np.array([jet.coefficients for jet in jets])
        h = np.array([jet.coefficients for jet in dual.jets])
        assert np.allclose((2j * x5_1_periods.Pi.imag) @ h, omega, atol=1e-13)
        assert [jet.label for jet in dual.jets] == ["h_1", "h_2"]

    def test_genus_one_scalar(self, x3_x, x3_x_periods):
        jets = normalized_jets(x3_x, x3_x_periods, SurfacePoint.ordinary(2.0), 0)
        dual = dual_form_local_data(x3_x_periods, jets)
        tau = x3_x_periods.Pi[0, 0]
        assert dual.values[0] == pytest.approx(jets[0].coefficients[0] / (2j * tau.imag))

    def test_matches_finite_difference_of_dual_integrals(self, x5_1, x5_1_periods):
        p0 = SurfacePoint.ordinary(2.0)
        dual = dual_form_local_data(x5_1_periods, normalized_jets(x5_1, x5_1_periods, p0, 1))
        M = x5_1_periods.M

        def eta_integral(offset):
            value = abel_jacobi(x5_1, x5_1_periods, p0, SurfacePoint.ordinary(2.0 + offset)).value
            return M @ (value - np.conj(value))

        step = 1e-4
        d_x = (eta_integral(step) - eta_integral(-step)) / (2 * step)
        d_y = (eta_integral(1j * step) - eta_integral(-1j * step)) / (2 * step)
        assert np.max(np.abs(0.5 * (d_x - 1j * d_y) - dual.values)) < 1e-6

    def test_anchor_mismatch(self, x5_1, x5_1_periods):
        first = normalized_jets(x5_1, x5_1_periods, SurfacePoint.ordinary(2.0), 2)
        second = normalized_jets(x5_1, x5_1_periods, SurfacePoint.ordinary(3.0), 2)
        with pytest.raises(AnchorMismatchError):
            dual_form_local_data(x5_1_periods, [first[0], second[1]])


class TestWireFormat:
    def test_round_trip(self, x5_1_periods):
        restored = PeriodData.from_wire(x5_1_periods.to_wire())
        assert np.array_equal(restored.Pi, x5_1_periods.Pi)
        assert np.array_equal(restored.M, x5_1_periods.M)
        assert restored.error == x5_1_periods.error

    def test_wire_keys(self, x3_x_periods):
        wire = x3_x_periods.to_wire()
        assert {"A", "B", "Pi", "M", "err"} <= set(wire)
        assert len(wire["Pi"]) == 1
        assert all(isinstance(part, str) for part in wire["Pi"][0][0])
