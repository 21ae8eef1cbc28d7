from dataclasses import dataclass

import numpy as np
from typing_extensions import Literal

from ..errors import ConfigError
from ..linalg_utils import l1_norm, soft_threshold


@dataclass(frozen=True)
class PenaltySpec:
    kind: Literal["l1"] = "l1"
    lam: float = 0.0

    def __post_init__(self):
        if self.kind != "l1":
            raise ConfigError("unsupported penalty kind ‘{0}’".format(self.kind))
        if not self.lam >= 0:
            raise ConfigError(
                "please set ‘lambda’ to a nonnegative value, "
                "got {0}".format(self.lam)
            )

    def value(self, w: np.ndarray) -> float:
        if self.lam == 0:
            return 0.0
        return self.lam * l1_norm(w)

    def prox(self, z: np.ndarray, step: float) -> np.ndarray:
        return soft_threshold(z, step * self.lam)
