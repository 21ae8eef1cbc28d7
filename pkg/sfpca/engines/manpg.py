# -*- coding: utf-8 -*-

# Manifold proximal gradient: tangent-space descent direction, Armijo
# back-tracking, Cholesky retraction. The alternating variant (A-ManPG) takes a
# single step per block per outer sweep.

from typing import List, NamedTuple, Optional

import numpy as np

from ..errors import RankDeficiencyError
from ..linalg_utils import as_dense, spectral_norm
from ..manifold import StiefelPoint, retract
from ..stats import EngineStats
from ..subsolvers import DescentProblem, armijo_search, solve_descent_direction
from ..types.manifold import ManConfig
from .common import BlockSide, BlockUpdate, Engine, block_objective, sides


class ManpgSolution(NamedTuple):
    u: np.ndarray
    # sparse prox point U + D of the last descent solve
    prox: np.ndarray
    converged: bool
    stalled: bool
    steps: int
    trace: List[float]


def _on_manifold(side: BlockSide, current: np.ndarray) -> StiefelPoint:
    point = StiefelPoint(current, side.s, strict=False)
    if point.is_feasible:
        return point
    # the SVD initializer and sparse warm starts are off the manifold
    return retract(point, np.zeros_like(point.u))


def run_manpg(
    side: BlockSide,
    grad: np.ndarray,
    current: np.ndarray,
    trust: float,
    tol: float,
    max_steps: int,
    max_inner: int,
    stats: Optional[EngineStats] = None,
) -> ManpgSolution:
    """
        Repeat {descent direction; Armijo search; retraction} until the
        direction is below `tol` or the objective stagnates. One stalled line
        search ends the run, since the point has not moved.
    """
    point = _on_manifold(side, current)

    def evaluate(w: np.ndarray) -> float:
        return block_objective(w, grad, side.lam)

    f = evaluate(point.u)
    trace = [f]
    prox = point.u
    converged = stalled = False
    steps = 0
    for steps in range(1, max_steps + 1):
        sol = solve_descent_direction(
            DescentProblem(grad, point, side.lam, trust), tol=tol, max_iter=max_inner
        )
        prox = sol.prox
        if stats is not None:
            stats.descent_solves += 1
            stats.inner_iterations += sol.iterations
            if not sol.converged:
                stats.inner_failures += 1
        if float(np.linalg.norm(sol.direction)) <= tol:
            converged = True
            break

        search = armijo_search(point, sol.direction, evaluate, stats)
        if search.alpha == 0:
            stalled = True
            break
        point = search.point
        f_new = evaluate(point.u)
        trace.append(f_new)
        if abs(f - f_new) <= tol * max(1.0, abs(f)):
            converged = True
            break
        f = f_new
    return ManpgSolution(point.u.copy(), prox, converged, stalled, steps, trace)


class ManpgEngine(Engine):
    """
        Seeds the next sweep with the manifold iterate and reports the sparse
        prox point, which carries the exact zeros of the l1 step.
    """

    @classmethod
    def get_type(cls):
        return "manpg"

    def update(
        self, side: BlockSide, grad: np.ndarray, current: np.ndarray
    ) -> BlockUpdate:
        max_steps = 1 if self.one_step_per_sweep else self.config.max_inner
        try:
            sol = run_manpg(
                side,
                grad,
                current,
                self.trust,
                self.config.inner_tol,
                max_steps,
                self.config.max_inner,
                self.stats,
            )
        except RankDeficiencyError as e:
            self.warn("cannot move the {0} block: {1}".format(side.name, e))
            return BlockUpdate(current, current, False)
        if sol.stalled:
            self.warn("line search on the {0} block stalled".format(side.name))
        elif not (sol.converged or self.one_step_per_sweep):
            self.warn(
                "ManPG on the {0} block stopped after {1} steps".format(
                    side.name, sol.steps
                )
            )
        self._exact[side.name] = sol.u
        ok = not sol.stalled and (sol.converged or self.one_step_per_sweep)
        return BlockUpdate(sol.u, sol.prox, ok)


class AmanpgEngine(ManpgEngine):
    one_step_per_sweep = True

    @classmethod
    def get_type(cls):
        return "amanpg"


def subproblem_manpg(
    x, v_fixed, config: ManConfig, current, side: str = "u"
) -> ManpgSolution:
    """
        Full ManPG solve of one block with the other factor held fixed, started
        at `current`. For side "v" pass the U block as `v_fixed`.
    """
    x = as_dense(x, "X")
    block_u, block_v = sides(config)
    block = block_u if side == "u" else block_v
    if side == "v":
        x = x.T
    grad = (x @ np.asarray(v_fixed, dtype=float)) * config.order_weights()
    trust = config.trust
    if trust is None:
        trust = 1.0 / max(spectral_norm(x), np.finfo(float).tiny)
    return run_manpg(
        block,
        grad,
        current,
        trust,
        config.inner_tol,
        config.max_inner,
        config.max_inner,
    )
