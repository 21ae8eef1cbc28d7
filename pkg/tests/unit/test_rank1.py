import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from sfpca.errors import ConfigError, DegenerateInputError, DimensionError
from sfpca.linalg_utils import identity_smoother, s_norm, smoother_for, thin_svd
from sfpca.rank1 import fit_rank1, objective_rank1
from sfpca.types.rank1 import Rank1Config
from tests import matrix_with_gap, rng


def config(n, p, lam_u=0.0, lam_v=0.0, alpha_u=0.0, alpha_v=0.0, **options):
    return Rank1Config(
        lam_u, lam_v, smoother_for(n, alpha_u), smoother_for(p, alpha_v), **options
    )


class TestObjective(unittest.TestCase):
    def test_examples(self):
        x = np.diag([3.0, 1.0])
        e = np.eye(2)
        self.assertEqual(objective_rank1(x, np.zeros(2), np.zeros(2), config(2, 2)), 0)
        self.assertAlmostEqual(
            objective_rank1(x, e[0], e[0], config(2, 2, 1.0, 1.0)), 1.0
        )

    def test_sign_symmetry(self):
        gen = rng(30)
        x = gen.standard_normal((6, 4))
        u, v = gen.standard_normal(6), gen.standard_normal(4)
        c = config(6, 4, 0.3, 0.2)
        self.assertAlmostEqual(
            objective_rank1(x, u, v, c), objective_rank1(x, -u, -v, c), places=12
        )

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            objective_rank1(np.eye(3), np.ones(2), np.ones(3), config(3, 3))


class TestFitRank1(unittest.TestCase):
    def test_diagonal(self):
        fit = fit_rank1(np.diag([3.0, 1.0]), config(2, 2))
        self.assertTrue(fit.converged)
        self.assertAlmostEqual(fit.d, 3.0)
        assert_allclose(np.abs(fit.u), [1.0, 0.0], atol=1e-12)
        assert_allclose(np.abs(fit.v), [1.0, 0.0], atol=1e-12)

    def test_unpenalized_recovers_leading_pair(self):
        gen = rng(31)
        for _ in range(20):
            x = matrix_with_gap(gen, 15, 12)
            left, d, right = thin_svd(x)
            fit = fit_rank1(x, config(15, 12))
            self.assertLessEqual(abs(fit.d - d[0]), 1e-6 * d[0])
            self.assertGreaterEqual(abs(fit.u @ left[:, 0]), 1 - 1e-8)
            self.assertGreaterEqual(abs(fit.v @ right[:, 0]), 1 - 1e-8)

    def test_huge_penalty_collapses(self):
        fit = fit_rank1(np.diag([3.0, 1.0]), config(2, 2, lam_u=1e3))
        self.assertTrue(fit.collapsed)
        self.assertTrue(fit.converged)
        self.assertEqual(fit.d, 0.0)
        self.assertFalse(np.any(fit.u))
        self.assertFalse(np.any(fit.v))

    def test_monotone_and_feasible(self):
        gen = rng(32)
        n, p = 40, 30
        x = matrix_with_gap(gen, n, p, gap=1.5) + 0.3 * gen.standard_normal((n, p))
        for rule in ("fixed-by-spectral-norm", "backtracking"):
            c = config(n, p, 0.5, 0.5, 2.0, 2.0, step_rule=rule)
            fit = fit_rank1(x, c)
            trace = np.asarray(fit.objective_trace)
            slack = 1e-10 * np.maximum(1.0, np.abs(trace[:-1]))
            self.assertTrue(np.all(np.diff(trace) <= slack))
            if not fit.collapsed:
                self.assertLessEqual(s_norm(fit.u, c.s_u), 1 + 1e-8)
                self.assertLessEqual(s_norm(fit.v, c.s_v), 1 + 1e-8)
                self.assertGreaterEqual(fit.d, 0.0)

    def test_sparsity_grows_with_lambda(self):
        gen = rng(33)
        x = matrix_with_gap(gen, 30, 20) + 0.5 * gen.standard_normal((30, 20))
        small = fit_rank1(x, config(30, 20, 0.05, 0.05))
        large = fit_rank1(x, config(30, 20, 1.0, 1.0))
        self.assertLessEqual(
            np.count_nonzero(large.u) + np.count_nonzero(large.v),
            np.count_nonzero(small.u) + np.count_nonzero(small.v),
        )

    def test_init_is_honored(self):
        x = np.diag([3.0, 1.0])
        fit = fit_rank1(x, config(2, 2, max_outer=1), init=(np.eye(2)[1], np.eye(2)[1]))
        self.assertEqual(fit.objective_trace[0], -1.0)

    def test_zero_matrix(self):
        with self.assertRaises(DegenerateInputError):
            fit_rank1(np.zeros((3, 2)), config(3, 2))

    def test_smoother_mismatch(self):
        c = Rank1Config(0.0, 0.0, identity_smoother(4), identity_smoother(2))
        with self.assertRaises(DimensionError):
            fit_rank1(np.ones((3, 2)), c)

    def test_to_dict(self):
        out = fit_rank1(np.diag([3.0, 1.0]), config(2, 2)).to_dict()
        self.assertEqual(
            sorted(out),
            ["collapsed", "converged", "d", "iterations", "objective_trace"],
        )

    def test_boundary_handling_agrees(self):
        gen = rng(34)
        u = np.zeros(40)
        u[:10] = gen.uniform(0.5, 1.5, 10)
        v = np.zeros(30)
        v[:8] = gen.uniform(0.5, 1.5, 8)
        x = 20.0 * np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v))
        objectives = []
        for boundary in ("every-step", "at-convergence"):
            c = config(40, 30, 0.5, 0.5, boundary=boundary, tol=1e-10)
            fit = fit_rank1(x, c)
            self.assertTrue(fit.converged)
            assert_array_equal(np.flatnonzero(fit.u), np.arange(10))
            assert_array_equal(np.flatnonzero(fit.v), np.arange(8))
            self.assertAlmostEqual(s_norm(fit.u, c.s_u), 1.0, places=12)
            self.assertAlmostEqual(s_norm(fit.v, c.s_v), 1.0, places=12)
            objectives.append(objective_rank1(x, fit.u, fit.v, c))
        self.assertAlmostEqual(objectives[0], objectives[1], places=6)

    def test_unknown_boundary(self):
        with self.assertRaises(ConfigError):
            config(3, 3, boundary="never")
