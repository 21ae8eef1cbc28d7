# -*- coding: utf-8 -*-

# Iterative rank-one SFPCA: fit one component, deflate, repeat.

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .deflation import DeflationState, deflate_vector
from .errors import DimensionError
from .linalg_utils import as_dense
from .logger import LogMixin
from .rank1 import Rank1Fit, fit_rank1
from .simbench.tuning import TuningResult, bic_tune
from .types.deflation import DeflationScheme
from .types.rank1 import Rank1Config
from .types.tuning import TuningGrid


@dataclass
class PipelineFit:
    u: np.ndarray
    v: np.ndarray
    d: np.ndarray
    scheme: DeflationScheme
    components: List[Rank1Fit] = field(default_factory=list)
    tuning: List[Optional[TuningResult]] = field(default_factory=list)
    state: Optional[DeflationState] = None

    @property
    def converged(self) -> bool:
        return all(c.converged for c in self.components)

    @property
    def rank(self) -> int:
        return self.u.shape[1]

    def to_dict(self):
        return {
            "deflation": self.scheme.kind,
            "normalize": self.scheme.normalize,
            "converged": self.converged,
            "components": [
                dict(
                    c.to_dict(),
                    tuned=None if t is None else t.params(),
                    bic=None if t is None else t.bic,
                )
                for c, t in zip(self.components, self.tuning)
            ],
        }


class RankOnePipeline(LogMixin):
    """
        Fits `rank` rank-one components, deflating the data with `scheme` after
        each one. With a tuning grid every component is BIC-tuned on the
        current deflate. A collapsed component ends the pipeline and leaves the
        remaining columns zero.
    """

    def __init__(
        self,
        config: Rank1Config,
        rank: int,
        scheme: DeflationScheme,
        grid: Optional[TuningGrid] = None,
    ):
        if rank < 1:
            raise DimensionError("please ask for at least one component")
        self.config = config
        self.rank = rank
        self.scheme = scheme
        self.grid = grid

    def fit(self, x) -> PipelineFit:
        x = as_dense(x, "X")
        n, p = x.shape
        if self.rank > min(n, p):
            raise DimensionError(
                "cannot extract {0} components from a {1}x{2} matrix".format(
                    self.rank, n, p
                )
            )
        u = np.zeros((n, self.rank))
        v = np.zeros((p, self.rank))
        d = np.zeros(self.rank)
        state = DeflationState.start(x)
        components: List[Rank1Fit] = []
        tuning: List[Optional[TuningResult]] = []

        for j in range(self.rank):
            config = self.config
            tuned = None
            if self.grid is not None:
                tuned = bic_tune(state.x_current, self.grid, self.config)
                config = tuned.config
                self.log(
                    "component {0}: BIC picked {1}".format(j + 1, tuned.params())
                )
            comp = fit_rank1(state.x_current, config)
            components.append(comp)
            tuning.append(tuned)
            if comp.collapsed:
                self.warn(
                    "component {0} collapsed to zero; stopping after {1} "
                    "components".format(j + 1, j)
                )
                break
            u[:, j], v[:, j], d[j] = comp.u, comp.v, comp.d
            if j + 1 < self.rank:
                state = deflate_vector(state, comp.u, comp.v, self.scheme)

        return PipelineFit(
            u=u,
            v=v,
            d=d,
            scheme=self.scheme,
            components=components,
            tuning=tuning,
            state=state,
        )


def fit_pipeline(
    x,
    config: Rank1Config,
    rank: int,
    scheme: DeflationScheme,
    grid: Optional[TuningGrid] = None,
) -> PipelineFit:
    return RankOnePipeline(config, rank, scheme, grid).fit(x)
