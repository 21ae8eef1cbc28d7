from dataclasses import dataclass
from typing import Optional

import numpy as np
from typing_extensions import Literal

from ..errors import ConfigError
from ..linalg_utils import SmoothingOperator
from .penalty import PenaltySpec

EngineName = Literal["madmm", "manpg", "amanpg"]
ENGINES = ("madmm", "manpg", "amanpg")


@dataclass(frozen=True)
class ManConfig:
    k: int
    lambda_u: float
    lambda_v: float
    s_u: SmoothingOperator
    s_v: SmoothingOperator
    engine: EngineName = "madmm"
    # MADMM penalty in units of sigma_1(X)
    rho: float = 1.0
    outer_tol: float = 1e-5
    max_outer: int = 100
    inner_tol: float = 1e-7
    max_inner: int = 1000
    order_weight_epsilon: float = 0.0
    # quadratic weight 1/(2t) of the descent-direction subproblem; None → 1/σ₁(X)
    trust: Optional[float] = None

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("please set ‘k’ to at least 1")
        PenaltySpec("l1", self.lambda_u)
        PenaltySpec("l1", self.lambda_v)
        if self.engine not in ENGINES:
            raise ConfigError(
                "unknown engine ‘{0}’, expected one of {1}".format(
                    self.engine, ", ".join(ENGINES)
                )
            )
        if not self.rho > 0:
            raise ConfigError("please set ‘rho’ to a positive value")
        if not (self.outer_tol > 0 and self.inner_tol > 0):
            raise ConfigError("tolerances must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ConfigError("iteration limits must be at least 1")
        if not self.order_weight_epsilon >= 0:
            raise ConfigError(
                "please set ‘order_weight_epsilon’ to a nonnegative value"
            )
        if self.trust is not None and not self.trust > 0:
            raise ConfigError("please set ‘trust’ to a positive value")

    def order_weights(self) -> np.ndarray:
        """Diagonal (1+ε)^{k−1}, …, 1 of the order-weighted trace."""
        return (1.0 + self.order_weight_epsilon) ** np.arange(self.k - 1, -1, -1)
