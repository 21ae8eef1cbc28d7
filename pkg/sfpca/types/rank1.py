from dataclasses import dataclass

from typing_extensions import Literal

from ..errors import ConfigError
from ..linalg_utils import SmoothingOperator
from .penalty import PenaltySpec


@dataclass(frozen=True)
class Rank1Config:
    lambda_u: float
    lambda_v: float
    s_u: SmoothingOperator
    s_v: SmoothingOperator
    max_outer: int = 500
    tol: float = 1e-6
    step_rule: Literal["fixed-by-spectral-norm", "backtracking"] = (
        "fixed-by-spectral-norm"
    )
    # where iterates are rescaled to ||w||_S = 1; "at-convergence" keeps them in
    # the unit S-ball while iterating
    boundary: Literal["every-step", "at-convergence"] = "every-step"

    def __post_init__(self):
        PenaltySpec("l1", self.lambda_u)
        PenaltySpec("l1", self.lambda_v)
        if not self.tol > 0:
            raise ConfigError("please set ‘tol’ to a positive value")
        if self.max_outer < 1:
            raise ConfigError("please set ‘max_outer’ to at least 1")
        if self.step_rule not in ("fixed-by-spectral-norm", "backtracking"):
            raise ConfigError("unknown step rule ‘{0}’".format(self.step_rule))
        if self.boundary not in ("every-step", "at-convergence"):
            raise ConfigError(
                "unknown boundary handling ‘{0}’".format(self.boundary)
            )

    @property
    def penalty_u(self) -> PenaltySpec:
        return PenaltySpec("l1", self.lambda_u)

    @property
    def penalty_v(self) -> PenaltySpec:
        return PenaltySpec("l1", self.lambda_v)
