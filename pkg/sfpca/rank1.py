# -*- coding: utf-8 -*-

# Rank-one SFPCA: maximize u^T X v - lambda_u ||u||_1 - lambda_v ||v||_1 over
# the unit ellipses of S_u and S_v by alternating proximal gradient steps.

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import DegenerateInputError, DimensionError, NumericError
from .linalg_utils import SmoothingOperator, as_dense, l1_norm, s_norm, thin_svd
from .types.penalty import PenaltySpec
from .types.rank1 import Rank1Config

logger = logging.getLogger(__name__)

MAX_HALVINGS = 30
MONOTONE_SLACK = 1e-12


@dataclass
class Rank1Fit:
    u: np.ndarray
    v: np.ndarray
    d: float
    objective_trace: List[float] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0

    @property
    def collapsed(self) -> bool:
        return not (np.any(self.u) and np.any(self.v))

    def to_dict(self):
        return {
            "d": self.d,
            "objective_trace": list(self.objective_trace),
            "converged": self.converged,
            "iterations": self.iterations,
            "collapsed": self.collapsed,
        }


def _check_dims(x: np.ndarray, u: np.ndarray, v: np.ndarray) -> None:
    n, p = x.shape
    if u.shape != (n,) or v.shape != (p,):
        raise DimensionError(
            "factors of shape {0} and {1} do not match a {2}x{3} matrix".format(
                u.shape, v.shape, n, p
            )
        )


def objective_rank1(x, u, v, config: Rank1Config) -> float:
    """u^T X v - lambda_u ||u||_1 - lambda_v ||v||_1."""
    x = as_dense(x, "X")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_dims(x, u, v)
    return float(
        u @ x @ v - config.penalty_u.value(u) - config.penalty_v.value(v)
    )


def _to_boundary(w: np.ndarray, s: SmoothingOperator) -> np.ndarray:
    norm = s_norm(w, s)
    if norm == 0:
        return np.zeros_like(w)
    return w / norm


def _to_ball(w: np.ndarray, s: SmoothingOperator) -> np.ndarray:
    return w / max(1.0, s_norm(w, s))


class _SideStep:
    """Proximal ascent step for one factor, holding the current step size."""

    def __init__(
        self,
        s: SmoothingOperator,
        penalty: PenaltySpec,
        step: float,
        persistent: bool,
        on_boundary: bool = True,
    ):
        self.s = s
        self.penalty = penalty
        self.step = step
        self.persistent = persistent
        self.scale = _to_boundary if on_boundary else _to_ball

    def candidate(self, w: np.ndarray, grad: np.ndarray, t: float) -> np.ndarray:
        z = w + t * self.s.solve(grad)
        return self.scale(self.penalty.prox(z, t), self.s)


def _leading_pair(
    x: np.ndarray, s_u: SmoothingOperator, s_v: SmoothingOperator
) -> Tuple[np.ndarray, np.ndarray, float]:
    left, d, right = thin_svd(x)
    sigma1 = float(d[0])
    if sigma1 == 0:
        raise DegenerateInputError("X is the zero matrix")
    return _to_boundary(left[:, 0], s_u), _to_boundary(right[:, 0], s_v), sigma1


def fit_rank1(x, config: Rank1Config, init: Optional[Tuple] = None) -> Rank1Fit:
    """
        Alternating proximal gradient ascent. Each half-sweep takes
        u <- scale_to_ellipse(soft(u + t S_u^{-1} X v, t lambda_u)) (and the
        symmetric v update), halving t up to 30 times when the objective would
        worsen and keeping the old factor otherwise, so the minimization
        objective never increases. A prox step that zeroes a factor collapses
        the fit to (0, 0, d = 0), which counts as converged. With boundary
        "at-convergence" the iterates are only pulled into the unit S-ball and
        rescaled onto its boundary once, at exit.
    """
    x = as_dense(x, "X")
    n, p = x.shape
    if config.s_u.dim != n or config.s_v.dim != p:
        raise DimensionError(
            "smoothers of dimension ({0}, {1}) do not match a {2}x{3} matrix".format(
                config.s_u.dim, config.s_v.dim, n, p
            )
        )

    u, v, sigma1 = _leading_pair(x, config.s_u, config.s_v)
    if init is not None:
        u = _to_boundary(np.asarray(init[0], dtype=float), config.s_u)
        v = _to_boundary(np.asarray(init[1], dtype=float), config.s_v)
        _check_dims(x, u, v)

    if config.step_rule == "backtracking":
        t_u, t_v = config.s_u.min_eig, config.s_v.min_eig
    else:
        # 1 / (lambda_max(S^{-1}) sigma_1(X))
        t_u, t_v = config.s_u.min_eig / sigma1, config.s_v.min_eig / sigma1
    persistent = config.step_rule == "backtracking"
    every_step = config.boundary == "every-step"
    side_u = _SideStep(config.s_u, config.penalty_u, t_u, persistent, every_step)
    side_v = _SideStep(config.s_v, config.penalty_v, t_v, persistent, every_step)

    def minimized(uu: np.ndarray, vv: np.ndarray) -> float:
        return -(
            float(uu @ x @ vv)
            - config.penalty_u.value(uu)
            - config.penalty_v.value(vv)
        )

    f = minimized(u, v)
    trace = [f]
    converged = False
    collapsed = False
    it = 0

    def advance(side: _SideStep, w, grad, rebuild):
        """Returns (new factor, new objective, collapsed?)."""
        t = side.step
        for _ in range(MAX_HALVINGS + 1):
            w_new = side.candidate(w, grad, t)
            if not np.any(w_new):
                if 0.0 <= f + MONOTONE_SLACK * max(1.0, abs(f)):
                    return w_new, 0.0, True
            else:
                f_new = rebuild(w_new)
                if f_new <= f + MONOTONE_SLACK * max(1.0, abs(f)):
                    if side.persistent:
                        side.step = t
                    return w_new, f_new, False
            t /= 2.0
        logger.debug(
            "no improving step within %d halvings; keeping factor", MAX_HALVINGS
        )
        return w, f, False

    for it in range(1, config.max_outer + 1):
        f_prev = f

        u, f, collapsed = advance(side_u, u, x @ v, lambda w: minimized(w, v))
        if not collapsed:
            v, f, collapsed = advance(side_v, v, x.T @ u, lambda w: minimized(u, w))
        if not np.isfinite(f):
            raise NumericError(
                "rank-one objective is not finite at sweep {0}".format(it)
            )
        trace.append(f)

        if collapsed:
            logger.warning("rank-one factor collapsed to zero at sweep %d", it)
            u, v = np.zeros(n), np.zeros(p)
            converged = True
            break
        if abs(f - f_prev) <= config.tol * max(1.0, abs(f)):
            converged = True
            break

    if not converged:
        logger.warning(
            "rank-one SFPCA did not converge in %d sweeps", config.max_outer
        )
    if not every_step:
        u, v = _to_boundary(u, config.s_u), _to_boundary(v, config.s_v)

    d = float(u @ x @ v)
    if d < 0:
        u, v, d = -u, -v, -d
    logger.debug(
        "rank-one fit: d = %.6g after %d sweeps (|u|_1 = %.3g, |v|_1 = %.3g)",
        d,
        it,
        l1_norm(u),
        l1_norm(v),
    )
    return Rank1Fit(
        u=u, v=v, d=d, objective_trace=trace, converged=converged, iterations=it
    )
