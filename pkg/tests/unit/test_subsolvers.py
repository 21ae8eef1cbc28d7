import unittest

import numpy as np
import scipy.linalg
import scipy.optimize
from numpy.testing import assert_allclose, assert_array_equal

from sfpca.errors import ConfigError, DegenerateInputError, DimensionError
from sfpca.linalg_utils import (
    SmoothingOperator,
    identity_smoother,
    smoother_for,
    soft_threshold,
)
from sfpca.manifold import (
    StiefelPoint,
    feasibility_residual,
    retract,
    tangency_residual,
)
from sfpca.stats import EngineStats
from sfpca.subsolvers import (
    DescentProblem,
    ProcrustesProblem,
    armijo_search,
    prox_l1_smoothed,
    solve_descent_direction,
    solve_procrustes,
)
from tests import rng


def feasible(gen, n, k, s):
    base = StiefelPoint(gen.standard_normal((n, k)), s, strict=False)
    return retract(base, np.zeros((n, k)))


def split_qp_oracle(problem):
    """
        Reference optimum of a one-column descent problem: the tangent space is
        parametrized by an orthonormal basis Q of (S u)^perp and the l1 term is
        split into nonnegative parts, leaving a smooth QP for SLSQP.
    """
    u = problem.base.u[:, 0]
    g = problem.grad_term[:, 0]
    n = u.size
    q = scipy.linalg.null_space(problem.base.smoother.apply(problem.base.u).T)
    m = q.shape[1]
    c = q.T @ g
    t, lam = problem.trust, problem.lam

    def f(w):
        z = w[:m]
        return 0.5 / t * z @ z - c @ z + lam * np.sum(w[m:])

    def grad(w):
        return np.concatenate([w[:m] / t - c, lam * np.ones(2 * n)])

    jac = np.hstack([q, -np.eye(n), np.eye(n)])
    constraint = {
        "type": "eq",
        "fun": lambda w: u + q @ w[:m] - w[m : m + n] + w[m + n :],
        "jac": lambda w: jac,
    }
    w0 = np.concatenate([np.zeros(m), np.maximum(u, 0), np.maximum(-u, 0)])
    res = scipy.optimize.minimize(
        f,
        w0,
        jac=grad,
        constraints=[constraint],
        bounds=[(None, None)] * m + [(0, None)] * (2 * n),
        method="SLSQP",
        options={"ftol": 1e-14, "maxiter": 1000},
    )
    d = (q @ res.x[:m])[:, None]
    return problem.objective(d)


class TestProcrustes(unittest.TestCase):
    def test_scaled_identity(self):
        s4 = SmoothingOperator(
            dim=2,
            alpha=1.0,
            s=4 * np.eye(2),
            chol_s=2 * np.eye(2),
            s_inv_sqrt=0.5 * np.eye(2),
            s_sqrt=2 * np.eye(2),
            min_eig=4.0,
            max_eig=4.0,
        )
        a = np.array([[2.0], [0.0]])
        out = solve_procrustes(ProcrustesProblem(s4, a, np.zeros((2, 1)), 1.0))
        assert_allclose(out, [[0.5], [0.0]], atol=1e-14)

    def test_orthonormal_target_small_rho(self):
        gen = rng(20)
        a = np.linalg.qr(gen.standard_normal((6, 2)))[0]
        out = solve_procrustes(
            ProcrustesProblem(identity_smoother(6), a, np.zeros((6, 2)), 1e-8)
        )
        assert_allclose(out, a, atol=1e-10)

    def test_feasible_and_optimal(self):
        gen = rng(21)
        cases = [(10, 1, 0.0, 1.0), (40, 3, 2.0, 1.0), (250, 5, 3.0, 1.0)]
        for _ in range(40):
            k = int(gen.integers(1, 6))
            cases.append(
                (
                    int(gen.integers(6, 251)),
                    k,
                    float(gen.choice([0.0, 0.5, 2.0, 3.0])),
                    float(gen.uniform(0.1, 10.0)),
                )
            )
        for n, k, alpha, rho in cases:
            s = smoother_for(n, alpha)
            a = gen.standard_normal((n, k))
            b = feasible(gen, n, k, s).u
            problem = ProcrustesProblem(s, a, b, rho)
            stats = EngineStats()
            out = solve_procrustes(problem, stats)
            self.assertEqual(stats.svd_calls, 1)
            self.assertLessEqual(feasibility_residual(out, s), 1e-10)
            best = problem.objective(out)
            point = StiefelPoint(out, s, strict=False)
            for _ in range(100):
                other = feasible(gen, n, k, s).u
                self.assertLessEqual(best, problem.objective(other) + 1e-10)
                near = retract(point, 1e-3 * gen.standard_normal((n, k))).u
                self.assertLessEqual(best, problem.objective(near) + 1e-10)

    def test_degenerate(self):
        s = identity_smoother(4)
        with self.assertRaises(DegenerateInputError):
            solve_procrustes(
                ProcrustesProblem(s, np.zeros((4, 2)), np.zeros((4, 2)), 1.0)
            )

    def test_validation(self):
        s = identity_smoother(4)
        with self.assertRaises(DimensionError):
            ProcrustesProblem(s, np.zeros((4, 2)), np.zeros((4, 1)), 1.0)
        with self.assertRaises(DimensionError):
            ProcrustesProblem(s, np.zeros((3, 1)), np.zeros((3, 1)), 1.0)
        with self.assertRaises(ConfigError):
            ProcrustesProblem(s, np.zeros((4, 1)), np.zeros((4, 1)), 0.0)


class TestProxL1Smoothed(unittest.TestCase):
    def test_identity_is_soft_threshold(self):
        gen = rng(24)
        c = gen.standard_normal((9, 2))
        stats = EngineStats()
        out = prox_l1_smoothed(c, identity_smoother(9), 0.4, stats=stats)
        assert_array_equal(out, soft_threshold(c, 0.4))
        self.assertEqual(stats.prox_iterations, 0)

    def test_optimality_conditions(self):
        gen = rng(25)
        for alpha in (0.5, 3.0):
            s = smoother_for(30, alpha)
            for tau in (0.05, 0.3, 1.0):
                c = gen.standard_normal((30, 2))
                stats = EngineStats()
                w = prox_l1_smoothed(c, s, tau, tol=1e-13, max_iter=50000, stats=stats)
                self.assertGreater(stats.prox_iterations, 0)
                g = s.apply(w - c)
                nz = w != 0
                assert_allclose(g[nz], -tau * np.sign(w[nz]), atol=1e-7)
                self.assertTrue(np.all(np.abs(g[~nz]) <= tau + 1e-7))

    def test_large_threshold_gives_exact_zero(self):
        gen = rng(26)
        s = smoother_for(12, 2.0)
        c = gen.standard_normal((12, 1))
        tau = 2.0 * float(np.max(np.abs(s.apply(c))))
        assert_array_equal(prox_l1_smoothed(c, s, tau), np.zeros((12, 1)))

    def test_zero_threshold_and_validation(self):
        gen = rng(27)
        c = gen.standard_normal((6, 1))
        assert_array_equal(prox_l1_smoothed(c, smoother_for(6, 1.0), 0.0), c)
        with self.assertRaises(ConfigError):
            prox_l1_smoothed(c, smoother_for(6, 1.0), -1.0)


class TestDescentDirection(unittest.TestCase):
    def test_unpenalized_examples(self):
        e = np.eye(3)
        base = StiefelPoint(e[:, :1], identity_smoother(3))
        out = solve_descent_direction(DescentProblem(e[:, 1:2], base, 0.0, 1.0))
        assert_allclose(out.direction, e[:, 1:2], atol=1e-14)
        self.assertTrue(out.converged)
        assert_allclose(out.prox, e[:, :1] + e[:, 1:2], atol=1e-14)
        out = solve_descent_direction(DescentProblem(e[:, :1], base, 0.0, 1.0))
        assert_allclose(out.direction, np.zeros((3, 1)), atol=1e-14)

    def test_matches_split_qp_oracle(self):
        gen = rng(22)
        for i in range(50):
            n = 3 + i % 4
            alpha = (0.0, 0.5, 2.0)[i % 3]
            s = smoother_for(n, alpha)
            base = feasible(gen, n, 1, s)
            problem = DescentProblem(
                gen.standard_normal((n, 1)),
                base,
                float(gen.uniform(0.05, 1.0)),
                float(gen.uniform(0.2, 2.0)),
            )
            out = solve_descent_direction(problem, tol=1e-10, max_iter=20000)
            self.assertLessEqual(tangency_residual(base, out.direction), 1e-10)
            self.assertLessEqual(out.objective, split_qp_oracle(problem) + 1e-4)
            if out.converged:
                assert_allclose(out.prox, base.u + out.direction, atol=1e-4)

    def test_never_worse_than_zero(self):
        gen = rng(23)
        s = smoother_for(8, 1.0)
        base = feasible(gen, 8, 2, s)
        problem = DescentProblem(gen.standard_normal((8, 2)), base, 5.0, 1.0)
        out = solve_descent_direction(problem, max_iter=3)
        self.assertLessEqual(out.objective, problem.objective(np.zeros((8, 2))))

    def test_validation(self):
        base = StiefelPoint(np.eye(3)[:, :1], identity_smoother(3))
        with self.assertRaises(DimensionError):
            DescentProblem(np.zeros((3, 2)), base, 0.1, 1.0)
        with self.assertRaises(ConfigError):
            DescentProblem(np.zeros((3, 1)), base, 0.1, 0.0)
        with self.assertRaises(ConfigError):
            DescentProblem(np.zeros((3, 1)), base, -0.1, 1.0)


class TestArmijo(unittest.TestCase):
    def setUp(self):
        e = np.eye(3)
        self.e = e
        self.base = StiefelPoint(e[:, :1], identity_smoother(3))

    def test_zero_direction(self):
        out = armijo_search(self.base, np.zeros((3, 1)), lambda w: 0.0)
        self.assertEqual(out.alpha, 0.0)
        self.assertIs(out.point, self.base)

    def test_constant_objective_accepts_full_step(self):
        out = armijo_search(self.base, self.e[:, 1:2], lambda w: 1.0)
        self.assertEqual(out.alpha, 1.0)
        assert_allclose(out.point.u[:, 0], (self.e[:, 0] + self.e[:, 1]) / np.sqrt(2))

    def test_descent_accepts_full_step(self):
        out = armijo_search(self.base, self.e[:, 1:2], lambda w: -float(w[1, 0]))
        self.assertEqual(out.alpha, 1.0)

    def test_ascent_gives_up(self):
        stats = EngineStats()
        out = armijo_search(
            self.base, self.e[:, 1:2], lambda w: -float(w[0, 0]), stats
        )
        self.assertEqual(out.alpha, 0.0)
        self.assertIs(out.point, self.base)
        self.assertEqual(stats.stalled_searches, 1)
        self.assertEqual(stats.retraction_calls, 61)
