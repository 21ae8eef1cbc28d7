# -*- coding: utf-8 -*-

# Adaptive BIC tuning of the rank-one SFPCA parameters: coordinate-wise
# search over (lambda_u, lambda_v, alpha_u, alpha_v), two sweeps.

import logging
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import TuningDegenerateError
from ..linalg_utils import SmoothingOperator, as_dense, smoother_for, thin_svd
from ..rank1 import Rank1Fit, fit_rank1
from ..types.rank1 import Rank1Config
from ..types.tuning import TuningGrid

logger = logging.getLogger(__name__)

LAMBDA_FRACTIONS = np.geomspace(1e-2, 1.0, 8)
PARAMS = ("lambda_u", "lambda_v", "alpha_u", "alpha_v")


def bic_score(x: np.ndarray, fit: Rank1Fit) -> float:
    """
        log(|X - d u v^T|_F^2 / (n p)) + log(n p) / (n p) * (df_u + df_v), with
        u, v Euclidean-normalized, d = u^T X v and df the nonzero counts.
        Lower is better.
    """
    n, p = x.shape
    u = fit.u / np.linalg.norm(fit.u)
    v = fit.v / np.linalg.norm(fit.v)
    d = float(u @ x @ v)
    rss = float(np.sum((x - d * np.outer(u, v)) ** 2))
    df = int(np.count_nonzero(fit.u)) + int(np.count_nonzero(fit.v))
    np_ = n * p
    return float(np.log(max(rss, np.finfo(float).tiny) / np_) + np.log(np_) / np_ * df)


@dataclass(frozen=True)
class TuningResult:
    config: Rank1Config
    lambda_u: float
    lambda_v: float
    alpha_u: float
    alpha_v: float
    bic: float
    fit: Rank1Fit

    def params(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in PARAMS}


def default_grid(x: np.ndarray, grid: TuningGrid) -> TuningGrid:
    """Fill unset lambda grids from the leading singular pair of X."""
    if grid.lambda_u is not None and grid.lambda_v is not None:
        return grid
    left, _, right = thin_svd(x)
    lam_u = LAMBDA_FRACTIONS * float(np.max(np.abs(x @ right[:, 0])))
    lam_v = LAMBDA_FRACTIONS * float(np.max(np.abs(x.T @ left[:, 0])))
    return replace(
        grid,
        lambda_u=grid.lambda_u if grid.lambda_u is not None else tuple(lam_u),
        lambda_v=grid.lambda_v if grid.lambda_v is not None else tuple(lam_v),
    )


def bic_tune(
    x, grid: Optional[TuningGrid] = None, base: Optional[Rank1Config] = None
) -> TuningResult:
    """
        Starting from the first value of every grid, scan one parameter at a
        time with the others held fixed and keep the lowest-BIC value; repeat
        for `grid.sweeps` sweeps. Fits that collapse to zero are not scored.
    """
    x = as_dense(x, "X")
    n, p = x.shape
    grid = default_grid(x, grid or TuningGrid())
    smoothers: Dict[Tuple[int, float], SmoothingOperator] = {}

    def smoother(dim: int, alpha: float) -> SmoothingOperator:
        key = (dim, alpha)
        if key not in smoothers:
            smoothers[key] = smoother_for(dim, alpha, grid.penalty_order)
        return smoothers[key]

    def config_for(point: Dict[str, float]) -> Rank1Config:
        options = {}
        if base is not None:
            options = dict(
                max_outer=base.max_outer, tol=base.tol, step_rule=base.step_rule
            )
        return Rank1Config(
            lambda_u=point["lambda_u"],
            lambda_v=point["lambda_v"],
            s_u=smoother(n, point["alpha_u"]),
            s_v=smoother(p, point["alpha_v"]),
            **options
        )

    cache: Dict[Tuple[float, ...], Tuple[float, Rank1Fit]] = {}

    def score(point: Dict[str, float]) -> Tuple[float, Rank1Fit]:
        key = tuple(point[name] for name in PARAMS)
        if key not in cache:
            fit = fit_rank1(x, config_for(point))
            bic = np.inf if fit.collapsed else bic_score(x, fit)
            cache[key] = (bic, fit)
        return cache[key]

    point = {name: getattr(grid, name)[0] for name in PARAMS}
    for sweep in range(grid.sweeps):
        for name in PARAMS:
            best_value, best_bic = point[name], score(point)[0]
            for value in getattr(grid, name):
                bic = score(dict(point, **{name: value}))[0]
                if bic < best_bic:
                    best_value, best_bic = value, bic
            point[name] = best_value
        logger.debug("BIC sweep %d: %s -> %.6g", sweep + 1, point, score(point)[0])

    bic, fit = score(point)
    if not np.isfinite(bic):
        finite = [(b, key) for key, (b, _) in cache.items() if np.isfinite(b)]
        if finite:
            bic, key = min(finite)
            point = dict(zip(PARAMS, key))
            fit = cache[key][1]
    if not np.isfinite(bic):
        raise TuningDegenerateError(
            "every tuning candidate ({0} fits) collapsed to zero".format(len(cache))
        )
    return TuningResult(
        config=config_for(point),
        bic=bic,
        fit=fit,
        **point
    )
