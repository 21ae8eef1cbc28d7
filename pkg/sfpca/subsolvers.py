# -*- coding: utf-8 -*-

# Inner solvers of Manifold SFPCA: the closed-form generalized unbalanced
# Procrustes update (MADMM smooth step), the tangent-space descent direction
# (ManPG family) and the Armijo back-tracking line search.

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    RankDeficiencyError,
)
from .linalg_utils import SmoothingOperator, l1_norm, soft_threshold, thin_svd
from .manifold import StiefelPoint, TangentProjector, retract
from .stats import EngineStats

logger = logging.getLogger(__name__)

ARMIJO_SHRINK = 0.8
ARMIJO_MAX_SHRINKS = 60


@dataclass(frozen=True)
class ProcrustesProblem:
    """argmin over U^T S U = I of -Tr(U^T A) + (rho/2) ||U - B||_S^2."""

    s: SmoothingOperator
    a: np.ndarray
    b: np.ndarray
    rho: float

    def __post_init__(self):
        if self.a.shape != self.b.shape:
            raise DimensionError(
                "shapes of A and B differ ({0} vs {1})".format(
                    self.a.shape, self.b.shape
                )
            )
        if self.a.shape[0] != self.s.dim:
            raise DimensionError(
                "A has {0} rows, the smoother has dimension {1}".format(
                    self.a.shape[0], self.s.dim
                )
            )
        if not self.rho > 0:
            raise ConfigError("please set ‘rho’ to a positive value")

    def objective(self, u: np.ndarray) -> float:
        r = u - self.b
        return float(-np.sum(u * self.a) + 0.5 * self.rho * np.sum(r * self.s.apply(r)))


def solve_procrustes(
    p: ProcrustesProblem, stats: Optional[EngineStats] = None
) -> np.ndarray:
    """
        Closed form S^{-1/2} A_svd B_svd^T, where A_svd Delta B_svd^T is the thin
        SVD of S^{-1/2} A + rho S^{1/2} B.
    """
    s = p.s
    if s.is_identity:
        m = p.a + p.rho * p.b
    else:
        m = s.s_inv_sqrt @ p.a + p.rho * (s.s_sqrt @ p.b)
    left, d, right = thin_svd(m)
    if stats is not None:
        stats.svd_calls += 1
    if d.size == 0 or d[-1] <= 1e-12 * max(d[0], np.finfo(float).tiny):
        raise DegenerateInputError(
            "S^(-1/2) A + rho S^(1/2) B is rank deficient (singular values {0})".format(
                d
            )
        )
    polar = left @ right.T
    if s.is_identity:
        return polar
    return s.s_inv_sqrt @ polar


def prox_l1_smoothed(
    c: np.ndarray,
    s: SmoothingOperator,
    tau: float,
    start: Optional[np.ndarray] = None,
    tol: float = 1e-10,
    max_iter: int = 500,
    stats: Optional[EngineStats] = None,
) -> np.ndarray:
    """
        argmin_W tau ||W||_1 + 1/2 ||W - C||_S^2, the l1 prox in the S metric.
        Plain soft-thresholding when S = I; otherwise accelerated proximal
        gradient with step 1/lambda_max(S) and adaptive restart, warm-started
        at `start`. Iterates are soft-thresholded, so zeros are exact.
    """
    if tau < 0:
        raise ConfigError("please set ‘tau’ to a nonnegative value")
    c = np.asarray(c, dtype=float)
    if s.is_identity or tau == 0:
        return soft_threshold(c, tau)
    step = 1.0 / s.max_eig
    w = soft_threshold(c, tau) if start is None else np.array(start, dtype=float)
    y = w
    t = 1.0
    eps = tol * max(1.0, float(np.linalg.norm(c)))
    it = 0
    for it in range(1, max_iter + 1):
        w_new = soft_threshold(y - step * s.apply(y - c), tau * step)
        if np.sum((y - w_new) * (w_new - w)) > 0:
            # momentum points uphill
            t = 1.0
        t_new = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
        y = w_new + ((t - 1.0) / t_new) * (w_new - w)
        moved = float(np.linalg.norm(w_new - w))
        w, t = w_new, t_new
        if moved <= eps:
            break
    if stats is not None:
        stats.prox_iterations += it
    return w


@dataclass(frozen=True)
class DescentProblem:
    """
        min_D -<G, D> + ||D||^2 / (2 t) + lambda ||U + D||_1
        subject to D^T S U + U^T S D = 0.
    """

    grad_term: np.ndarray
    base: StiefelPoint
    lam: float
    trust: float

    def __post_init__(self):
        if self.grad_term.shape != self.base.shape:
            raise DimensionError(
                "gradient term has shape {0}, expected {1}".format(
                    self.grad_term.shape, self.base.shape
                )
            )
        if not self.trust > 0:
            raise ConfigError("please set ‘trust’ to a positive value")
        if not self.lam >= 0:
            raise ConfigError("please set ‘lambda’ to a nonnegative value")

    def objective(self, d: np.ndarray) -> float:
        return float(
            -np.sum(self.grad_term * d)
            + np.sum(d * d) / (2.0 * self.trust)
            + self.lam * l1_norm(self.base.u + d)
        )


@dataclass(frozen=True)
class DescentSolution:
    direction: np.ndarray
    objective: float
    converged: bool
    iterations: int
    # sparse iterate E ~ U + D of the splitting, exact zeros included
    prox: np.ndarray


def solve_descent_direction(
    p: DescentProblem, tol: float = 1e-9, max_iter: int = 5000
) -> DescentSolution:
    """
        Alternating-direction splitting between the tangency-constrained
        quadratic (closed form: scaled target, then tangent projection) and the
        l1 proximal step on E = U + D. Iterates D are always exactly tangent; the
        best one seen is returned, and never one worse than D = 0.
    """
    project = TangentProjector(p.base)
    u = p.base.u
    t = p.trust

    if p.lam == 0:
        d = t * project(p.grad_term)
        return DescentSolution(d, p.objective(d), True, 0, u + d)

    beta = 1.0 / t
    zero = np.zeros_like(u)
    best, best_obj = zero, p.objective(zero)
    e = u.copy()
    best_e = None
    y = np.zeros_like(u)
    eps = tol * max(1.0, float(np.linalg.norm(u)))
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        d = project((p.grad_term + beta * (e - u + y)) / (1.0 / t + beta))
        e_old = e
        e = soft_threshold(d + u - y, p.lam / beta)
        r = e - d - u
        y = y + r

        obj = p.objective(d)
        if obj < best_obj:
            best, best_obj, best_e = d, obj, e

        primal = float(np.linalg.norm(r))
        dual = beta * float(np.linalg.norm(e - e_old))
        if primal <= eps and dual <= eps:
            converged = True
            break

    if not converged:
        logger.warning(
            "descent-direction splitting did not converge in %d iterations", max_iter
        )
    if converged or best_e is None:
        best_e = e
    return DescentSolution(best, best_obj, converged, it, best_e)


class LineSearch(NamedTuple):
    alpha: float
    point: StiefelPoint


def armijo_search(
    base: StiefelPoint,
    d: np.ndarray,
    evaluate: Callable[[np.ndarray], float],
    stats: Optional[EngineStats] = None,
    shrink: float = ARMIJO_SHRINK,
    max_shrinks: int = ARMIJO_MAX_SHRINKS,
) -> LineSearch:
    """
        Start at alpha = 1 and shrink by 0.8 while the retracted point's
        objective is strictly greater than at the base. Ties accept. After
        max_shrinks shrinks give up and return (0, base).
    """
    if not np.any(d):
        return LineSearch(0.0, base)
    f0 = evaluate(base.u)
    alpha = 1.0
    for _ in range(max_shrinks + 1):
        try:
            candidate = retract(base, alpha * d)
        except RankDeficiencyError:
            candidate = None
        if stats is not None:
            stats.retraction_calls += 1
        if candidate is not None and not evaluate(candidate.u) > f0:
            return LineSearch(alpha, candidate)
        alpha *= shrink
    if stats is not None:
        stats.stalled_searches += 1
    return LineSearch(0.0, base)
