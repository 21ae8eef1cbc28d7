# -*- coding: utf-8 -*-

# Multi-rank Manifold SFPCA: maximize Tr(U^T X V D_eps) - lambda_U ||U||_1 -
# lambda_V ||V||_1 over U^T S_u U = I_k and V^T S_v V = I_k by alternating
# block updates with a pluggable subproblem engine.

import dataclasses
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .engines import get_engine
from .engines.common import sides
from .errors import (
    DegenerateInputError,
    DimensionError,
    NumericError,
    RankDeficiencyError,
)
from .linalg_utils import as_dense, l1_norm, spectral_norm
from .logger import LogMixin
from .manifold import (
    StiefelPoint,
    feasibility_residual,
    init_leading_svd,
    retract,
    retract_on_support,
)
from .stats import EngineStats
from .types.manifold import ManConfig


@dataclass
class BlockFit:
    u: np.ndarray
    v: np.ndarray
    d: np.ndarray
    objective_trace: List[float] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    engine: str = "madmm"
    engine_stats: EngineStats = field(default_factory=EngineStats)
    # minimization objective at (u, v)
    objective: float = 0.0
    feasibility_u: float = 0.0
    feasibility_v: float = 0.0

    def to_dict(self):
        return {
            "engine": self.engine,
            "converged": self.converged,
            "iterations": self.iterations,
            "objective": self.objective,
            "objective_trace": list(self.objective_trace),
            "feasibility_residual_u": self.feasibility_u,
            "feasibility_residual_v": self.feasibility_v,
            "engine_stats": self.engine_stats.to_dict(),
        }


def _check_dims(x: np.ndarray, u: np.ndarray, v: np.ndarray) -> None:
    n, p = x.shape
    if u.ndim != 2 or v.ndim != 2 or u.shape[0] != n or v.shape[0] != p:
        raise DimensionError(
            "blocks of shape {0} and {1} do not match a {2}x{3} matrix".format(
                u.shape, v.shape, n, p
            )
        )
    if u.shape[1] != v.shape[1]:
        raise DimensionError(
            "U has {0} columns but V has {1}".format(u.shape[1], v.shape[1])
        )


def objective_manifold(x, u, v, config: ManConfig) -> float:
    """
        Tr(U^T X V D_eps) - lambda_U ||U||_1 - lambda_V ||V||_1, with D_eps the
        order weights (the identity when order_weight_epsilon is 0).
    """
    x = as_dense(x, "X")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_dims(x, u, v)
    weights = (1.0 + config.order_weight_epsilon) ** np.arange(u.shape[1] - 1, -1, -1)
    smooth = float(np.sum(np.diag(u.T @ x @ v) * weights))
    return smooth - config.lambda_u * l1_norm(u) - config.lambda_v * l1_norm(v)


def canonicalize(u, v) -> Tuple[np.ndarray, np.ndarray]:
    """
        Sort the columns of U lexicographically by absolute value (descending),
        permuting V alike; then flip each column pair so U's column has at least
        as many positive as negative entries, and on a tie a positive first
        nonzero entry.
    """
    u = np.array(u, dtype=float)
    v = np.array(v, dtype=float)
    if u.ndim != 2 or v.ndim != 2 or u.shape[1] != v.shape[1]:
        raise DimensionError(
            "cannot canonicalize blocks of shape {0} and {1}".format(u.shape, v.shape)
        )
    # lexsort's primary key is the last one: reverse rows so row 0 leads
    order = np.lexsort(-np.abs(u)[::-1, :])
    u, v = u[:, order], v[:, order]
    for j in range(u.shape[1]):
        col = u[:, j]
        pos, neg = int(np.sum(col > 0)), int(np.sum(col < 0))
        nonzero = np.flatnonzero(col)
        if neg > pos or (neg == pos and nonzero.size and col[nonzero[0]] < 0):
            u[:, j] = -col
            v[:, j] = -v[:, j]
    return u, v


class ManifoldFit(LogMixin):
    """Outer alternating loop shared by all engines."""

    def __init__(self, x, config: ManConfig):
        self.x = as_dense(x, "X")
        self.config = config
        n, p = self.x.shape
        if config.s_u.dim != n or config.s_v.dim != p:
            raise DimensionError(
                "smoothers of dimension ({0}, {1}) do not match a {2}x{3} "
                "matrix".format(config.s_u.dim, config.s_v.dim, n, p)
            )
        self.stats = EngineStats()
        self.weights = config.order_weights()

    def minimized(self, u: np.ndarray, v: np.ndarray) -> float:
        return -objective_manifold(self.x, u, v, self.config)

    def _finalize(self, engine, side, estimate: np.ndarray) -> np.ndarray:
        try:
            return retract_on_support(estimate, side.s).u.copy()
        except RankDeficiencyError as e:
            self.warn(
                "cannot place the {0} block on its support ({1}); retracting "
                "it densely".format(side.name, e)
            )
        point = StiefelPoint(estimate, side.s, strict=False)
        try:
            return retract(point, np.zeros_like(point.u)).u.copy()
        except RankDeficiencyError:
            fallback = engine.manifold_iterate(side.name)
            self.warn(
                "the {0} block is rank deficient at exit; reporting the last "
                "manifold iterate instead".format(side.name)
            )
            if fallback is None:
                raise
            return retract(
                StiefelPoint(fallback, side.s, strict=False), np.zeros_like(fallback)
            ).u.copy()

    def run(self) -> BlockFit:
        x, config = self.x, self.config
        if not np.any(x):
            raise DegenerateInputError("X is the zero matrix")
        u, v = init_leading_svd(x, config.k, config.s_u, config.s_v)
        self.stats.svd_calls += 1
        engine = get_engine(config.engine)(config, self.stats, spectral_norm(x))
        side_u, side_v = sides(config)

        f = self.minimized(u, v)
        trace = [f]
        # the initializer is off the manifold when alpha > 0, so it never counts
        best = (np.inf, u, v)
        estimate = (u, v)
        inner_ok = True
        converged = False
        it = 0
        for it in range(1, config.max_outer + 1):
            self.log_start("{0} sweep {1}: ".format(engine.get_type(), it))
            step_u = engine.update(side_u, (x @ v) * self.weights, u)
            step_v = engine.update(side_v, (x.T @ step_u.iterate) * self.weights, v)
            u_new, v_new = step_u.iterate, step_v.iterate
            f_new = self.minimized(u_new, v_new)
            if not np.isfinite(f_new):
                raise NumericError(
                    "objective is not finite at sweep {0} ({1} engine)".format(
                        it, engine.get_type()
                    )
                )
            trace.append(f_new)
            estimate = (step_u.estimate, step_v.estimate)
            inner_ok = step_u.ok and step_v.ok
            if f_new < best[0]:
                best = (f_new,) + estimate

            rel_f = abs(f_new - f) / max(1.0, abs(f))
            change = float(np.linalg.norm(u_new - u) + np.linalg.norm(v_new - v))
            rel_x = change / max(1.0, float(np.linalg.norm(u) + np.linalg.norm(v)))
            self.log_end(
                "objective {0:.10g}, factor change {1:.3e}".format(f_new, rel_x)
            )
            u, v, f = u_new, v_new, f_new
            if rel_f <= config.outer_tol and rel_x <= np.sqrt(config.outer_tol):
                converged = True
                break

        if not converged:
            self.warn(
                "{0} did not converge in {1} sweeps; reporting the best "
                "iterate".format(engine.get_type(), config.max_outer)
            )
            _, u, v = best
        else:
            u, v = estimate
            if not inner_ok:
                self.warn(
                    "{0} inner solves did not finish on the last sweep".format(
                        engine.get_type()
                    )
                )
                converged = False

        u = self._finalize(engine, side_u, u)
        v = self._finalize(engine, side_v, v)
        u, v = canonicalize(u, v)
        d = np.diag(u.T @ x @ v).copy()
        return BlockFit(
            u=u,
            v=v,
            d=d,
            objective_trace=trace,
            converged=converged,
            iterations=it,
            engine=engine.get_type(),
            engine_stats=self.stats,
            objective=self.minimized(u, v),
            feasibility_u=feasibility_residual(u, config.s_u),
            feasibility_v=feasibility_residual(v, config.s_v),
        )


def fit_manifold(x, config: ManConfig) -> BlockFit:
    return ManifoldFit(x, config).run()


def fit_amanpg(x, config: ManConfig) -> BlockFit:
    """Manifold SFPCA with one proximal gradient step per block per sweep."""
    return fit_manifold(x, dataclasses.replace(config, engine="amanpg"))
