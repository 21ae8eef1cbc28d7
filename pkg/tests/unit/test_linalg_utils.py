import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from sfpca.errors import ConditioningError, DimensionError, NumericError
from sfpca.linalg_utils import (
    DifferencePenalty,
    as_dense,
    build_difference_penalty,
    build_smoother,
    identity_smoother,
    projector,
    s_norm,
    smoother_for,
    soft_threshold,
    thin_svd,
)
from tests import rng


class TestDifferencePenalty(unittest.TestCase):
    def test_second_order_dim_4(self):
        d = np.array([[1, -2, 1, 0], [0, 1, -2, 1]], dtype=float)
        assert_allclose(build_difference_penalty(4, 2).omega, d.T @ d)

    def test_second_order_dim_3(self):
        omega = build_difference_penalty(3, 2).omega
        assert_allclose(omega, [[1, -2, 1], [-2, 4, -2], [1, -2, 1]])

    def test_fourth_order_rank(self):
        omega = build_difference_penalty(10, 4).omega
        assert_allclose(omega, omega.T)
        w = np.linalg.eigvalsh(omega)
        self.assertGreaterEqual(w.min(), -1e-10)
        self.assertEqual(np.linalg.matrix_rank(omega), 6)

    def test_too_small(self):
        with self.assertRaises(DimensionError):
            build_difference_penalty(4, 4)
        with self.assertRaises(DimensionError):
            build_difference_penalty(10, 3)

    def test_rejects_asymmetric(self):
        with self.assertRaises(NumericError):
            DifferencePenalty(2, 2, np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestSmoother(unittest.TestCase):
    def test_alpha_zero_is_identity(self):
        s = build_smoother(build_difference_penalty(6, 2), 0.0)
        self.assertTrue(s.is_identity)
        for m in (s.s, s.chol_s, s.s_sqrt, s.s_inv_sqrt):
            assert_array_equal(m, np.eye(6))

    def test_diagonal_case(self):
        s = build_smoother(DifferencePenalty(2, 2, np.eye(2)), 1.0)
        assert_allclose(s.s, 2 * np.eye(2))
        assert_allclose(s.s_sqrt, np.sqrt(2) * np.eye(2))
        assert_allclose(s.s_inv_sqrt, np.eye(2) / np.sqrt(2))

    def test_round_trip(self):
        for dim, alpha in ((100, 3.0), (250, 10.0)):
            s = build_smoother(build_difference_penalty(dim, 2), alpha)
            assert_allclose(s.s_inv_sqrt @ s.s @ s.s_inv_sqrt, np.eye(dim), atol=1e-8)
            assert_allclose(s.chol_s @ s.chol_s.T, s.s, rtol=1e-10, atol=1e-10 * alpha)
            self.assertTrue(np.allclose(np.tril(s.chol_s), s.chol_s))

    def test_solve(self):
        s = smoother_for(20, 2.0)
        b = rng(1).standard_normal(20)
        assert_allclose(s.s @ s.solve(b), b, atol=1e-10)

    def test_negative_alpha(self):
        with self.assertRaises(DimensionError):
            build_smoother(build_difference_penalty(5, 2), -1.0)


class TestSoftThreshold(unittest.TestCase):
    def test_examples(self):
        self.assertAlmostEqual(float(soft_threshold(1.2, 0.5)), 0.7)
        self.assertEqual(float(soft_threshold(-0.3, 0.5)), 0.0)
        z = np.array([[1.0, -2.0], [0.25, 3.0]])
        assert_array_equal(soft_threshold(z, 0.0), z)

    def test_dead_zone_is_exact_zero(self):
        z = np.array([0.5, -0.5, 0.49999, 1e-300])
        out = soft_threshold(z, 0.5)
        self.assertEqual(np.count_nonzero(out), 0)

    def test_shrinkage_property(self):
        z = rng(2).standard_normal((30, 4)) * 3
        for tau in (0.0, 0.1, 1.0, 2.5):
            out = soft_threshold(z, tau)
            self.assertTrue(np.all(np.abs(out - z) <= tau + 1e-15))
            nz = out != 0
            assert_allclose(np.abs(out[nz]), np.abs(z[nz]) - tau, atol=1e-14)

    def test_negative_tau(self):
        with self.assertRaises(ValueError):
            soft_threshold(np.ones(3), -0.1)


class TestThinSvd(unittest.TestCase):
    def test_diagonal(self):
        _, d, _ = thin_svd(np.diag([3.0, 1.0]))
        assert_allclose(d, [3.0, 1.0])

    def test_rank_one(self):
        a, b = np.array([1.0, 2.0, 2.0]), np.array([3.0, 4.0])
        _, d, _ = thin_svd(np.outer(a, b))
        assert_allclose(d, [15.0, 0.0], atol=1e-12)

    def test_reconstruction(self):
        gen = rng(3)
        for shape in ((5, 3), (250, 100), (40, 60)):
            m = gen.standard_normal(shape)
            u, d, v = thin_svd(m)
            k = min(shape)
            assert_allclose(u.T @ u, np.eye(k), atol=1e-10)
            assert_allclose(v.T @ v, np.eye(k), atol=1e-10)
            self.assertTrue(np.all(np.diff(d) <= 0))
            self.assertTrue(np.all(d >= 0))
            err = np.linalg.norm((u * d) @ v.T - m) / np.linalg.norm(m)
            self.assertLessEqual(err, 1e-10)

    def test_rejects_non_finite(self):
        with self.assertRaises(NumericError):
            thin_svd(np.array([[1.0, np.nan]]))


class TestNorms(unittest.TestCase):
    def test_s_norm(self):
        e1 = np.array([1.0, 0.0])
        self.assertEqual(s_norm(e1, identity_smoother(2)), 1.0)
        s = build_smoother(DifferencePenalty(2, 2, np.eye(2)), 1.0)
        self.assertAlmostEqual(s_norm(e1, s), np.sqrt(2))

    def test_s_norm_matches_square_root(self):
        s = smoother_for(30, 3.0)
        x = rng(4).standard_normal(30)
        self.assertAlmostEqual(s_norm(x, s) ** 2, float(np.sum((s.s_sqrt @ x) ** 2)))

    def test_s_norm_dimension(self):
        with self.assertRaises(DimensionError):
            s_norm(np.ones(3), identity_smoother(4))

    def test_projector(self):
        b = rng(5).standard_normal((8, 3))
        p = projector(b)
        assert_allclose(p @ p, p, atol=1e-12)
        assert_allclose(p @ b, b, atol=1e-12)

    def test_projector_conditioning(self):
        b = np.ones((5, 2))
        with self.assertRaises(ConditioningError) as ctx:
            projector(b, "U")
        self.assertEqual(ctx.exception.factor, "U")

    def test_as_dense(self):
        with self.assertRaises(DimensionError):
            as_dense(np.ones(3))
        with self.assertRaises(NumericError):
            as_dense([[1.0, np.inf]])
