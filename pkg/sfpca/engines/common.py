# -*- coding: utf-8 -*-

# Base class shared by the Manifold SFPCA subproblem engines.

from typing import Dict, NamedTuple, Optional

import numpy as np

from ..linalg_utils import SmoothingOperator, l1_norm
from ..logger import LogMixin
from ..stats import EngineStats
from ..types.manifold import ManConfig


class BlockSide(NamedTuple):
    """One block of the alternating scheme: the U side or the V side."""

    name: str
    s: SmoothingOperator
    lam: float


def sides(config: ManConfig):
    return (
        BlockSide("u", config.s_u, config.lambda_u),
        BlockSide("v", config.s_v, config.lambda_v),
    )


def block_objective(w: np.ndarray, grad: np.ndarray, lam: float) -> float:
    """Minimization form -Tr(W^T G) + lambda ||W||_1 of one block subproblem."""
    return float(-np.sum(w * grad) + lam * l1_norm(w))


class BlockUpdate(NamedTuple):
    """
        Result of one block update. `iterate` seeds the next sweep, `estimate`
        is the sparse factor the fit reports. `ok` is false when the inner
        solver did not finish cleanly.
    """

    iterate: np.ndarray
    estimate: np.ndarray
    ok: bool


class Engine(LogMixin):
    """
        A subproblem engine updates one factor block with the other held fixed.

        `grad` is the fixed linear term G of the block objective
        -Tr(W^T G) + lambda ||W||_1, i.e. X V D_eps for the U side and
        X^T U D_eps for the V side. `scale` is sigma_1(X); the default trust
        region 1/scale and the MADMM penalty rho * scale are relative to it.
    """

    one_step_per_sweep = False

    def __init__(self, config: ManConfig, stats: EngineStats, scale: float):
        self.config = config
        self.stats = stats
        self.scale = max(float(scale), np.finfo(float).tiny)
        self.trust = config.trust if config.trust is not None else 1.0 / self.scale
        # last manifold-exact iterate per side
        self._exact: Dict[str, np.ndarray] = {}

    @classmethod
    def get_type(cls) -> str:
        raise NotImplementedError

    def update(
        self, side: BlockSide, grad: np.ndarray, current: np.ndarray
    ) -> BlockUpdate:
        raise NotImplementedError

    def manifold_iterate(self, side_name: str) -> Optional[np.ndarray]:
        return self._exact.get(side_name)

    def __repr__(self):
        return "{0}(k={1})".format(type(self).__name__, self.config.k)
