import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from analysis.exceptions import DimensionMismatchError, InvalidToleranceError
from analysis.subspace_geometry import (
    RankTolerance,
    Subspace,
    intersection_dimension,
    orthonormal_basis,
    principal_cosines,
    project,
    subspace_sum,
    sup_cosine_angle,
)


def _span(*vectors):
    return orthonormal_basis([np.asarray(v, dtype=complex) for v in vectors])


class RankToleranceTests(SimpleTestCase):
    def test_defaults(self):
        tol = RankTolerance()
        self.assertEqual(tol.relative_threshold, 1e-10)
        self.assertEqual(tol.intersect_threshold, 1e-8)
        self.assertEqual(tol.close_threshold, 1e-6)

    def test_rejects_values_outside_unit_interval(self):
        for bad in (0.0, 1.0, -1e-3, 2.0):
            with self.assertRaises(InvalidToleranceError):
                RankTolerance(relative_threshold=bad)

    def test_replace_ignores_none(self):
        tol = RankTolerance().replace(relative_threshold=1e-12, close_threshold=None)
        self.assertEqual(tol.relative_threshold, 1e-12)
        self.assertEqual(tol.close_threshold, 1e-6)


class OrthonormalBasisTests(SimpleTestCase):
    def test_dependent_vectors_collapse(self):
        E = _span([1, 0, 0], [2, 0, 0], [0, 1j, 0])
        self.assertEqual(E.dim, 2)
        assert_allclose(E.basis.conj().T @ E.basis, np.eye(2), atol=1e-12)

    def test_zero_vectors_give_zero_subspace(self):
        E = _span([0, 0], [0, 0])
        self.assertTrue(E.is_zero)
        self.assertEqual(E.ambient_dim, 2)

    def test_empty_list_needs_ambient_dim(self):
        with self.assertRaises(DimensionMismatchError):
            orthonormal_basis([])
        self.assertEqual(orthonormal_basis([], ambient_dim=3).dim, 0)

    def test_mismatched_lengths(self):
        with self.assertRaises(DimensionMismatchError):
            orthonormal_basis([[1, 0], [1, 0, 0]])

    def test_reference_scale_drops_small_directions(self):
        vectors = [[1e-6, 0], [0, 1e-6]]
        self.assertEqual(orthonormal_basis(vectors).dim, 2)
        self.assertEqual(orthonormal_basis(vectors, reference_scale=1e6).dim, 0)


class AngleTests(SimpleTestCase):
    def test_identical_lines(self):
        E = _span([1, 1j])
        self.assertAlmostEqual(sup_cosine_angle(E, E), 1.0, places=12)

    def test_diagonal_line(self):
        E, F = _span([1, 0]), _span([1, 1])
        self.assertAlmostEqual(sup_cosine_angle(E, F), 1 / np.sqrt(2), places=12)

    def test_orthogonal_and_zero(self):
        E, F = _span([1, 0]), _span([0, 1])
        self.assertAlmostEqual(sup_cosine_angle(E, F), 0.0, places=12)
        self.assertEqual(sup_cosine_angle(E, Subspace.zero(2)), 0.0)

    def test_symmetric(self):
        rng = np.random.default_rng(3)
        E = orthonormal_basis(rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2)))
        F = orthonormal_basis(rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3)))
        self.assertAlmostEqual(sup_cosine_angle(E, F), sup_cosine_angle(F, E), places=12)

    def test_principal_cosines_sorted_and_clipped(self):
        E = _span([1, 0, 0], [0, 1, 0])
        F = _span([1, 0, 0], [0, 1, 1])
        cosines = principal_cosines(E, F)
        assert_allclose(cosines, [1.0, 1 / np.sqrt(2)], atol=1e-12)
        self.assertTrue(np.all(cosines <= 1.0))

    def test_ambient_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            sup_cosine_angle(_span([1, 0]), _span([1, 0, 0]))


class IntersectionTests(SimpleTestCase):
    def test_planes_in_three_space_meet_in_a_line(self):
        E = _span([1, 0, 0], [0, 1, 0])
        F = _span([0, 1, 0], [0, 0, 1])
        self.assertEqual(intersection_dimension(E, F), 1)
        self.assertEqual(subspace_sum(E, F).dim, 3)

    def test_tilted_line_is_not_an_intersection(self):
        eps = 1e-3
        E, F = _span([1, 0]), _span([np.cos(eps), np.sin(eps)])
        self.assertEqual(intersection_dimension(E, F), 0)

    def test_project(self):
        E = _span([1, 0, 0])
        assert_allclose(project(E, [3, 4j, 5]), [3, 0, 0])
        assert_allclose(project(Subspace.zero(3), [1, 2, 3]), np.zeros(3))


def _random_span(rng, m, k):
    return orthonormal_basis(rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k)))


class AngleOracleTests(SimpleTestCase):
    def test_sampled_supremum(self):
        rng = np.random.default_rng(11)
        for _ in range(3):
            E, F = _random_span(rng, 5, 2), _random_span(rng, 5, 2)
            coeffs = rng.standard_normal((2, 10_000)) + 1j * rng.standard_normal((2, 10_000))
            coeffs /= np.linalg.norm(coeffs, axis=0)
            samples = E.basis @ coeffs
            projected = F.basis @ (F.basis.conj().T @ samples)
            sampled = float(np.max(np.linalg.norm(projected, axis=0)))
            angle = sup_cosine_angle(E, F)
            self.assertLessEqual(sampled, angle + 1e-12)
            self.assertAlmostEqual(sampled, angle, delta=5e-3)

    def test_compressed_projector_eigenvalue(self):
        rng = np.random.default_rng(12)
        for dim_e, dim_f in [(1, 3), (2, 2), (3, 2), (3, 3)]:
            E, F = _random_span(rng, 6, dim_e), _random_span(rng, 6, dim_f)
            compressed = E.basis.conj().T @ F.projector() @ E.basis
            expected = np.sqrt(np.linalg.eigvalsh(compressed)[-1])
            self.assertAlmostEqual(sup_cosine_angle(E, F), expected, delta=1e-12)

    def test_larger_subspace_never_decreases_angle(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            E = _random_span(rng, 6, 2)
            vectors = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
            angles = [sup_cosine_angle(E, orthonormal_basis(vectors[:, :k])) for k in (1, 2, 3)]
            self.assertLessEqual(angles[0], angles[1] + 1e-12)
            self.assertLessEqual(angles[1], angles[2] + 1e-12)


class ProjectionTests(SimpleTestCase):
    def test_idempotent_and_contractive(self):
        rng = np.random.default_rng(14)
        for k in (1, 2, 4):
            E = _random_span(rng, 5, k)
            v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            once = project(E, v)
            assert_allclose(project(E, once), once, atol=1e-12)
            self.assertLessEqual(np.linalg.norm(once), np.linalg.norm(v) + 1e-12)

    def test_length_check(self):
        with self.assertRaises(DimensionMismatchError):
            project(_span([1, 0, 0]), [1, 0])


class DimensionFormulaTests(SimpleTestCase):
    def test_sum_and_intersection_in_six_space(self):
        rng = np.random.default_rng(15)
        # (shared, only in E, only in F)
        for shared, extra_e, extra_f in [(0, 2, 2), (1, 2, 1), (2, 1, 1), (0, 3, 3), (1, 3, 2), (2, 2, 2)]:
            common = rng.standard_normal((6, shared)) + 1j * rng.standard_normal((6, shared))
            only_e = rng.standard_normal((6, extra_e)) + 1j * rng.standard_normal((6, extra_e))
            only_f = rng.standard_normal((6, extra_f)) + 1j * rng.standard_normal((6, extra_f))
            E = orthonormal_basis(np.hstack([common, only_e]))
            F = orthonormal_basis(np.hstack([common, only_f]))
            meet = intersection_dimension(E, F)
            self.assertEqual(subspace_sum(E, F).dim, E.dim + F.dim - meet)
            self.assertEqual(subspace_sum(E, F).dim, min(6, shared + extra_e + extra_f))
