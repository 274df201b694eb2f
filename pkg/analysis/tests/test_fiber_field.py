import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from analysis.exceptions import (
    DimensionMismatchError,
    GridMismatchError,
    InvalidRegionError,
    NumericalInconsistencyError,
)
from analysis.fiber_field import (
    FiberedGeneratorSet,
    FiberGrid,
    closedness_diagnosis,
    ess_sup_angle,
    frame_bounds,
    intersection_spectrum,
    omega,
    omega_prime,
    range_function,
    restrict,
    spectrum,
)


def axis_set(grid, m=2, k=0):
    values = np.zeros((len(grid), m, 1), dtype=complex)
    values[:, k, 0] = 1.0
    return FiberedGeneratorSet(grid, values)


def rotating_set(grid, theta0, slope):
    theta = theta0 + slope * grid.points
    values = np.stack([np.cos(theta), np.sin(theta)], axis=1)[:, :, None]
    return FiberedGeneratorSet(grid, values)


class FiberGridTests(SimpleTestCase):
    def test_midpoint_and_left(self):
        assert_allclose(FiberGrid.midpoint(4).points, [0.125, 0.375, 0.625, 0.875])
        assert_allclose(FiberGrid.left(4).points, [0.0, 0.25, 0.5, 0.75])
        assert_allclose(FiberGrid.left(4).weights, [0.25] * 4)

    def test_validation(self):
        with self.assertRaises(DimensionMismatchError):
            FiberGrid(np.array([]), np.array([]))
        with self.assertRaises(DimensionMismatchError):
            FiberGrid(np.array([0.0, 0.5]), np.array([1.0]))
        with self.assertRaises(DimensionMismatchError):
            FiberGrid(np.array([0.0]), np.array([0.0]))

    def test_region_check(self):
        with self.assertRaises(InvalidRegionError):
            FiberGrid.left(3).check_region([0, 3])


class FiberedGeneratorSetTests(SimpleTestCase):
    def test_shape_checks(self):
        grid = FiberGrid.left(2)
        with self.assertRaises(DimensionMismatchError):
            FiberedGeneratorSet(grid, np.zeros((3, 2, 1)))
        with self.assertRaises(DimensionMismatchError):
            FiberedGeneratorSet(grid, np.zeros((2, 2)))
        with self.assertRaises(DimensionMismatchError):
            FiberedGeneratorSet(grid, np.full((2, 2, 1), np.nan))

    def test_norms_use_grid_weights(self):
        grid = FiberGrid.left(4)
        values = np.zeros((4, 2, 2), dtype=complex)
        values[:, 0, 0] = 2.0
        values[0, 1, 1] = 1.0
        assert_allclose(FiberedGeneratorSet(grid, values).norms(), [4.0, 0.25])

    def test_grid_mismatch(self):
        with self.assertRaises(GridMismatchError):
            ess_sup_angle(axis_set(FiberGrid.left(4)), axis_set(FiberGrid.midpoint(4)))
        with self.assertRaises(GridMismatchError):
            ess_sup_angle(axis_set(FiberGrid.left(4)), axis_set(FiberGrid.left(4), m=3))


class SpectrumTests(SimpleTestCase):
    def test_spectrum_skips_zero_fibers(self):
        grid = FiberGrid.left(4)
        zeroed = restrict(axis_set(grid), [1, 3])
        rf = range_function(zeroed)
        self.assertEqual(spectrum(rf), frozenset({1, 3}))
        self.assertEqual([J.dim for J in rf], [0, 1, 0, 1])

    def test_omega_and_omega_prime(self):
        grid = FiberGrid.left(8)
        A = axis_set(grid)
        B = restrict(rotating_set(grid, 0.0, np.pi / 2), range(6))
        self.assertEqual(omega(range_function(A), range_function(B)), frozenset(range(6)))
        # The rotating line passes through the axis at x = 0 only.
        self.assertEqual(intersection_spectrum(A, B), frozenset({0}))
        self.assertEqual(omega_prime(A, B), frozenset(range(1, 6)))


class AngleProfileTests(SimpleTestCase):
    def test_rotation_on_left_grid_attains_cos_pi_over_6(self):
        grid = FiberGrid.left(64)
        profile = ess_sup_angle(axis_set(grid), rotating_set(grid, np.pi / 6, np.pi / 3))
        self.assertAlmostEqual(profile.ess_sup, np.sqrt(3) / 2, places=12)
        self.assertEqual(profile.argmax, 0)
        self.assertEqual(profile.argmax_label, '0')
        assert_allclose(profile.angles(), np.abs(np.cos(np.pi / 6 + np.pi / 3 * grid.points)), atol=1e-12)

    def test_angles_are_symmetric(self):
        grid = FiberGrid.midpoint(16)
        A, B = axis_set(grid), rotating_set(grid, 0.2, 1.0)
        assert_allclose(ess_sup_angle(A, B).angles(), ess_sup_angle(B, A).angles(), atol=1e-12)

    def test_identical_sets_have_angle_one(self):
        grid = FiberGrid.left(4)
        profile = ess_sup_angle(axis_set(grid), axis_set(grid))
        self.assertAlmostEqual(profile.ess_sup, 1.0, places=12)
        self.assertEqual(profile.ess_sup_omega_prime, 0.0)

    def test_empty_omega(self):
        grid = FiberGrid.left(4)
        A = restrict(axis_set(grid), [0, 1])
        B = restrict(axis_set(grid, k=1), [2, 3])
        profile = ess_sup_angle(A, B)
        self.assertEqual(profile.ess_sup, 0.0)
        self.assertIsNone(profile.argmax)

    def test_explicit_region(self):
        grid = FiberGrid.left(8)
        profile = ess_sup_angle(axis_set(grid), rotating_set(grid, 0.0, np.pi / 2), region=[4, 5])
        self.assertEqual(profile.argmax, 4)
        self.assertAlmostEqual(profile.ess_sup, np.cos(np.pi / 4), places=12)
        with self.assertRaises(InvalidRegionError):
            ess_sup_angle(axis_set(grid), axis_set(grid), region=[8])

    def test_routes_agree_on_random_sets(self):
        rng = np.random.default_rng(11)
        grid = FiberGrid.midpoint(16)
        A = FiberedGeneratorSet(grid, rng.standard_normal((16, 4, 2)) + 1j * rng.standard_normal((16, 4, 2)))
        B = FiberedGeneratorSet(grid, rng.standard_normal((16, 4, 3)) + 1j * rng.standard_normal((16, 4, 3)))
        self.assertLessEqual(ess_sup_angle(A, B).max_route_gap, 1e-9)

    def test_ill_conditioned_fiber_raises(self):
        grid = FiberGrid.left(1)
        A = FiberedGeneratorSet(grid, np.array([[[1, 1], [0, 1e-7], [0, 0]]], dtype=complex))
        B = FiberedGeneratorSet(grid, np.array([[[0], [1], [0]]], dtype=complex))
        with self.assertRaises(NumericalInconsistencyError) as ctx:
            ess_sup_angle(A, B)
        self.assertEqual(ctx.exception.fiber_index, 0)
        self.assertGreater(ctx.exception.gap, 1e-6)


class ClosednessTests(SimpleTestCase):
    def test_rotation_between_pi_6_and_pi_2_is_closed(self):
        grid = FiberGrid.left(64)
        report = closedness_diagnosis(axis_set(grid), rotating_set(grid, np.pi / 6, np.pi / 3))
        self.assertTrue(report.closed)
        self.assertAlmostEqual(report.ess_sup_omega_prime, 0.8660254, delta=1e-7)
        self.assertEqual(report.witnesses, ())

    def test_cosine_profile_is_not_closed(self):
        grid = FiberGrid.midpoint(4096)
        report = closedness_diagnosis(axis_set(grid), rotating_set(grid, 0.0, np.pi))
        self.assertFalse(report.closed)
        self.assertAlmostEqual(report.ess_sup_omega_prime, np.cos(np.pi / 8192), places=12)
        self.assertIn(0, report.witnesses)
        self.assertIn(4095, report.witnesses)
        self.assertEqual(report.intersection_fibers, ())

    def test_intersection_fiber_is_excluded(self):
        grid = FiberGrid.left(8)
        report = closedness_diagnosis(axis_set(grid), rotating_set(grid, 0.0, np.pi / 2))
        self.assertEqual(report.intersection_fibers, (0,))
        self.assertTrue(report.closed)
        self.assertAlmostEqual(report.ess_sup_omega_prime, np.cos(np.pi / 16), places=12)
        self.assertAlmostEqual(report.profile.ess_sup_omega, 1.0, places=12)

    def test_disjoint_axes(self):
        grid = FiberGrid.midpoint(8)
        report = closedness_diagnosis(axis_set(grid), axis_set(grid, k=1))
        self.assertTrue(report.closed)
        self.assertAlmostEqual(report.ess_sup_omega_prime, 0.0, places=12)


class FrameBoundsTests(SimpleTestCase):
    def test_orthonormal_generators_form_riesz_sequence(self):
        grid = FiberGrid.left(4)
        values = np.zeros((4, 3, 2), dtype=complex)
        values[:, 0, 0] = 1.0
        values[:, 1, 1] = 2.0
        report = frame_bounds(FiberedGeneratorSet(grid, values))
        self.assertAlmostEqual(report.lower, 1.0)
        self.assertAlmostEqual(report.upper, 4.0)
        self.assertTrue(report.is_riesz)
        self.assertTrue(report.is_frame)

    def test_vanishing_fiber_breaks_riesz_but_not_frame(self):
        grid = FiberGrid.left(4)
        report = frame_bounds(restrict(axis_set(grid), [0, 1, 2]))
        self.assertFalse(report.is_riesz)
        self.assertAlmostEqual(report.lower, 1.0)
        self.assertIsNone(report.fibers[3].bounds)

    def test_redundant_generators(self):
        grid = FiberGrid.left(2)
        values = np.zeros((2, 2, 2), dtype=complex)
        values[:, 0, :] = 1.0
        report = frame_bounds(FiberedGeneratorSet(grid, values))
        self.assertFalse(report.is_riesz)
        self.assertAlmostEqual(report.lower, 2.0)
        self.assertAlmostEqual(report.upper, 2.0)


def random_set(rng, grid, m, r):
    shape = (len(grid), m, r)
    return FiberedGeneratorSet(grid, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def scaled(gen_set, factor):
    return FiberedGeneratorSet(gen_set.grid, gen_set.values * factor)


class ScaleInvarianceTests(SimpleTestCase):
    def test_rescaling_keeps_angles_and_spectra(self):
        grid = FiberGrid.left(8)
        A = axis_set(grid)
        B = restrict(rotating_set(grid, 0.0, np.pi / 2), range(6))
        base = closedness_diagnosis(A, B)
        for factor in (1e-6, 3.0 - 4.0j, 1e6):
            A2, B2 = scaled(A, factor), scaled(B, -2j * factor)
            rf_a, rf_b = range_function(A2), range_function(B2)
            self.assertEqual(spectrum(rf_a), spectrum(range_function(A)))
            self.assertEqual(spectrum(rf_b), frozenset(range(6)))
            self.assertEqual(omega(rf_a, rf_b), frozenset(range(6)))
            self.assertEqual(omega_prime(A2, B2), frozenset(range(1, 6)))
            report = closedness_diagnosis(A2, B2)
            self.assertEqual(report.closed, base.closed)
            self.assertEqual(report.witnesses, base.witnesses)
            assert_allclose(report.profile.angles(), base.profile.angles(), atol=1e-12)

    def test_rescaling_random_sets(self):
        rng = np.random.default_rng(21)
        grid = FiberGrid.midpoint(12)
        A = restrict(random_set(rng, grid, 4, 2), range(10))
        B = restrict(random_set(rng, grid, 4, 1), range(2, 12))
        base = ess_sup_angle(A, B)
        for factor in (1e-5, 1e5):
            profile = ess_sup_angle(scaled(A, factor), scaled(B, 1j / factor))
            assert_allclose(profile.angles(), base.angles(), atol=1e-12)
            self.assertAlmostEqual(profile.ess_sup_omega_prime, base.ess_sup_omega_prime, delta=1e-12)
            self.assertEqual(omega_prime(scaled(A, factor), B), omega_prime(A, B))


class RegionMonotonicityTests(SimpleTestCase):
    def test_smaller_region_never_raises_the_supremum(self):
        rng = np.random.default_rng(22)
        grid = FiberGrid.midpoint(16)
        A, B = random_set(rng, grid, 4, 2), random_set(rng, grid, 4, 2)
        regions = [range(16), range(12), range(0, 12, 2), [4]]
        sups = [ess_sup_angle(A, B, region=region).ess_sup for region in regions]
        for wider, narrower in zip(sups, sups[1:]):
            self.assertLessEqual(narrower, wider)


class RestrictTests(SimpleTestCase):
    def setUp(self):
        self.grid = FiberGrid.left(8)
        self.gen_set = random_set(np.random.default_rng(23), self.grid, 3, 2)

    def test_idempotent(self):
        once = restrict(self.gen_set, [1, 4, 5])
        assert_allclose(restrict(once, [1, 4, 5]).values, once.values)

    def test_spectrum_stays_inside_region(self):
        for region in ([0], [2, 3, 7], range(1, 8, 3)):
            spec = spectrum(range_function(restrict(self.gen_set, region)))
            self.assertLessEqual(spec, frozenset(region))

    def test_full_region_is_a_no_op(self):
        full = restrict(self.gen_set, range(8))
        assert_allclose(full.values, self.gen_set.values)
        self.assertEqual(spectrum(range_function(full)), spectrum(range_function(self.gen_set)))

    def test_rejects_indices_outside_the_grid(self):
        for region in ([8], [-1], [0, 12]):
            with self.assertRaises(InvalidRegionError):
                restrict(self.gen_set, region)
