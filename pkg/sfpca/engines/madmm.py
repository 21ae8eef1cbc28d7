# -*- coding: utf-8 -*-

# Manifold ADMM: the manifold constraint is split from the l1 penalty; the
# smooth block is a generalized unbalanced Procrustes problem, the sparse block
# an l1 prox in the same S metric.

from typing import Dict, List, NamedTuple, Optional

import numpy as np

from ..linalg_utils import as_dense, spectral_norm
from ..stats import EngineStats
from ..subsolvers import ProcrustesProblem, prox_l1_smoothed, solve_procrustes
from ..types.manifold import ManConfig
from .common import BlockSide, BlockUpdate, Engine, sides

# sparse-step accuracy relative to the primal tolerance
PROX_TOL_FACTOR = 1e-2


class WarmStart(NamedTuple):
    w: np.ndarray
    z: np.ndarray


class MadmmSolution(NamedTuple):
    w: np.ndarray
    u: np.ndarray
    warm: WarmStart
    converged: bool
    # W collapsed to the zero matrix
    degenerate: bool
    iterations: int
    residuals: List[float]


def run_madmm(
    side: BlockSide,
    grad: np.ndarray,
    current: np.ndarray,
    warm: Optional[WarmStart],
    rho: float,
    tol: float,
    max_iter: int,
    stats: Optional[EngineStats] = None,
) -> MadmmSolution:
    """
        Scaled ADMM on U = W with penalty (rho/2) ||U - W + Z||_S^2. Stops once
        ||U - W|| <= tol or W is zero. If max_iter runs out first, the iterate
        with the smallest primal residual is returned.
    """
    if warm is None:
        warm = WarmStart(np.array(current, dtype=float), np.zeros_like(current))
    w, z = warm
    u = w
    residuals: List[float] = []
    best = None
    best_r = np.inf
    converged = degenerate = False
    it = 0
    for it in range(1, max_iter + 1):
        u = solve_procrustes(ProcrustesProblem(side.s, grad, w - z, rho), stats)
        w = prox_l1_smoothed(
            u + z,
            side.s,
            side.lam / rho,
            start=w,
            tol=tol * PROX_TOL_FACTOR,
            stats=stats,
        )
        z = z + u - w
        r = float(np.linalg.norm(u - w))
        residuals.append(r)
        if r < best_r:
            best, best_r = (w, u, z), r
        if not np.any(w):
            degenerate = True
            break
        if r <= tol:
            converged = True
            break
    if not (converged or degenerate) and best is not None:
        w, u, z = best
    if stats is not None:
        stats.inner_iterations += it
        if not converged:
            stats.inner_failures += 1
    return MadmmSolution(w, u, WarmStart(w, z), converged, degenerate, it, residuals)


class MadmmEngine(Engine):
    """Reports W, the sparse iterate; keeps (W, Z) warm across outer sweeps."""

    def __init__(self, config: ManConfig, stats: EngineStats, scale: float):
        super().__init__(config, stats, scale)
        self.rho = config.rho * self.scale
        self.warm: Dict[str, WarmStart] = {}

    @classmethod
    def get_type(cls):
        return "madmm"

    def update(
        self, side: BlockSide, grad: np.ndarray, current: np.ndarray
    ) -> BlockUpdate:
        sol = run_madmm(
            side,
            grad,
            current,
            self.warm.get(side.name),
            self.rho,
            self.config.inner_tol,
            self.config.max_inner,
            self.stats,
        )
        self.warm[side.name] = sol.warm
        self._exact[side.name] = sol.u
        if sol.degenerate:
            self.warn(
                "MADMM shrank the whole {0} block to zero; "
                "lambda is too large".format(side.name)
            )
        elif not sol.converged:
            self.warn(
                "MADMM on the {0} block stopped after {1} iterations "
                "(primal residual {2:.3e})".format(
                    side.name, sol.iterations, min(sol.residuals)
                )
            )
        elif not np.all(np.any(sol.w, axis=0)):
            self.warn(
                "MADMM shrank a column of the {0} block to zero; "
                "lambda is too large".format(side.name)
            )
        ok = sol.converged and not sol.degenerate
        return BlockUpdate(sol.w, sol.w, ok)


def subproblem_madmm(
    x,
    v_fixed,
    config: ManConfig,
    warm: Optional[WarmStart] = None,
    side: str = "u",
    current=None,
) -> MadmmSolution:
    """
        One MADMM block solve with the other factor held fixed. For side "v"
        pass the U block as `v_fixed`; X is transposed internally. The penalty
        is config.rho * sigma_1(X). Returns the solution record: the sparse
        iterate W, the manifold iterate U, the warm state (W, Z) and the
        convergence and degeneracy flags.
    """
    x = as_dense(x, "X")
    block_u, block_v = sides(config)
    block = block_u if side == "u" else block_v
    if side == "v":
        x = x.T
    fixed = np.asarray(v_fixed, dtype=float)
    grad = (x @ fixed) * config.order_weights()
    if current is None:
        current = grad / max(float(np.linalg.norm(grad)), np.finfo(float).tiny)
    rho = config.rho * max(spectral_norm(x), np.finfo(float).tiny)
    return run_madmm(
        block, grad, current, warm, rho, config.inner_tol, config.max_inner
    )
