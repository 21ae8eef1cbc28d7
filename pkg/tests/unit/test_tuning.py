import unittest

import numpy as np

from sfpca.errors import ConfigError, TuningDegenerateError
from sfpca.linalg_utils import identity_smoother
from sfpca.rank1 import Rank1Fit
from sfpca.simbench.tuning import bic_score, bic_tune, default_grid
from sfpca.types.rank1 import Rank1Config
from sfpca.types.tuning import TuningGrid
from tests import matrix_with_gap, rng


class TestBicScore(unittest.TestCase):
    def test_exact_rank_one(self):
        u, v = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0])
        x = 4.0 * np.outer(u, v)
        score = bic_score(x, Rank1Fit(u, v, 4.0))
        # zero residual is floored, so the score is finite and very low
        self.assertTrue(np.isfinite(score))
        self.assertLess(score, -100)

    def test_formula(self):
        gen = rng(80)
        x = gen.standard_normal((6, 5))
        u, v = gen.standard_normal(6), gen.standard_normal(5)
        u[2] = 0.0
        uu, vv = u / np.linalg.norm(u), v / np.linalg.norm(v)
        rss = np.sum((x - (uu @ x @ vv) * np.outer(uu, vv)) ** 2)
        expected = np.log(rss / 30) + np.log(30) / 30 * (5 + 5)
        self.assertAlmostEqual(bic_score(x, Rank1Fit(u, v, 1.0)), expected, places=12)

    def test_scale_free(self):
        gen = rng(81)
        x = gen.standard_normal((5, 4))
        u, v = gen.standard_normal(5), gen.standard_normal(4)
        self.assertAlmostEqual(
            bic_score(x, Rank1Fit(u, v, 1.0)), bic_score(x, Rank1Fit(3 * u, -v, 1.0))
        )


class TestGrid(unittest.TestCase):
    def test_default_grid_scales_with_data(self):
        x = np.diag([3.0, 1.0, 0.5])
        grid = default_grid(x, TuningGrid())
        self.assertEqual(len(grid.lambda_u), 8)
        self.assertAlmostEqual(grid.lambda_u[-1], 3.0)
        self.assertAlmostEqual(grid.lambda_u[0], 0.03)
        self.assertAlmostEqual(grid.lambda_v[-1], 3.0)

    def test_explicit_grid_kept(self):
        grid = TuningGrid(lambda_u=(0.1,), lambda_v=(0.2,))
        self.assertIs(default_grid(np.eye(3), grid), grid)

    def test_validation(self):
        with self.assertRaises(ConfigError):
            TuningGrid(lambda_u=())
        with self.assertRaises(ConfigError):
            TuningGrid(alpha_u=(-1.0,))
        with self.assertRaises(ConfigError):
            TuningGrid(sweeps=0)
        with self.assertRaises(ConfigError):
            TuningGrid(penalty_order=3)  # type: ignore


class TestBicTune(unittest.TestCase):
    def setUp(self):
        gen = rng(82)
        noise = 0.1 * gen.standard_normal((20, 15))
        self.x = matrix_with_gap(gen, 20, 15, gap=2.0) + noise

    def test_single_point(self):
        result = bic_tune(self.x, TuningGrid.single(0.1, 0.2, 0.0, 1.0))
        self.assertEqual(
            result.params(),
            {"lambda_u": 0.1, "lambda_v": 0.2, "alpha_u": 0.0, "alpha_v": 1.0},
        )
        self.assertEqual(result.config.lambda_u, 0.1)
        self.assertEqual(result.config.s_v.alpha, 1.0)
        self.assertTrue(np.isfinite(result.bic))

    def test_picks_from_grid(self):
        grid = TuningGrid(
            lambda_u=(0.01, 0.1, 0.5),
            lambda_v=(0.01, 0.1, 0.5),
            alpha_u=(0.0, 1.0),
            alpha_v=(0.0, 1.0),
        )
        result = bic_tune(self.x, grid)
        self.assertIn(result.lambda_u, grid.lambda_u)
        self.assertIn(result.alpha_v, grid.alpha_v)
        self.assertAlmostEqual(result.bic, bic_score(self.x, result.fit))
        self.assertFalse(result.fit.collapsed)

    def test_base_options_carried(self):
        base = Rank1Config(
            0.0,
            0.0,
            identity_smoother(20),
            identity_smoother(15),
            max_outer=7,
            tol=1e-4,
        )
        result = bic_tune(self.x, TuningGrid.single(0.1, 0.1, 0.0, 0.0), base)
        self.assertEqual(result.config.max_outer, 7)
        self.assertEqual(result.config.tol, 1e-4)

    def test_everything_collapses(self):
        with self.assertRaises(TuningDegenerateError):
            bic_tune(self.x, TuningGrid.single(1e4, 1e4, 0.0, 0.0))
