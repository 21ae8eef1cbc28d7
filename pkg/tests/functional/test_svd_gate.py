import unittest

import numpy as np

from sfpca.linalg_utils import identity_smoother
from sfpca.man_sfpca import fit_manifold
from sfpca.pipeline import fit_pipeline
from sfpca.types.deflation import DeflationScheme
from sfpca.types.manifold import ENGINES, ManConfig
from sfpca.types.rank1 import Rank1Config
from tests import matrix_with_gap, max_angle, rng

K = 3


class TestSvdGate(unittest.TestCase):
    """Every solver with no penalties reproduces the truncated SVD subspaces."""

    def setUp(self):
        gen = rng(500)
        self.cases = [matrix_with_gap(gen, 40, 25, gap=1.12) for _ in range(20)]

    def check(self, x, u, v):
        left, _, right = np.linalg.svd(x, full_matrices=False)
        self.assertLessEqual(max_angle(u, left[:, :K]), 1e-4)
        self.assertLessEqual(max_angle(v, right.T[:, :K]), 1e-4)

    def test_rank1_pipeline(self):
        s_u, s_v = identity_smoother(40), identity_smoother(25)
        config = Rank1Config(0.0, 0.0, s_u, s_v, tol=1e-10)
        for x in self.cases:
            for kind in ("hotelling", "projection", "schur"):
                fit = fit_pipeline(x, config, K, DeflationScheme(kind))
                self.check(x, fit.u, fit.v)

    def test_manifold_engines(self):
        s_u, s_v = identity_smoother(40), identity_smoother(25)
        for engine in ENGINES:
            config = ManConfig(
                k=K, lambda_u=0.0, lambda_v=0.0, s_u=s_u, s_v=s_v, engine=engine
            )
            for x in self.cases:
                fit = fit_manifold(x, config)
                self.check(x, fit.u, fit.v)
