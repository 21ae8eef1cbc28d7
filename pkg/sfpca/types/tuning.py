from dataclasses import dataclass
from typing import Optional, Tuple

from typing_extensions import Literal

from ..errors import ConfigError

DEFAULT_ALPHAS = (0.0, 0.1, 1.0, 10.0)


@dataclass(frozen=True)
class TuningGrid:
    """
        Candidate values for the adaptive BIC search. A lambda grid left as None
        is derived from the data: 8 log-spaced multiples in [0.01, 1] of the
        largest absolute entry of X v_1 (U side) or X^T u_1 (V side).
    """

    lambda_u: Optional[Tuple[float, ...]] = None
    lambda_v: Optional[Tuple[float, ...]] = None
    alpha_u: Tuple[float, ...] = DEFAULT_ALPHAS
    alpha_v: Tuple[float, ...] = DEFAULT_ALPHAS
    sweeps: int = 2
    penalty_order: Literal[2, 4] = 2

    def __post_init__(self):
        for name in ("lambda_u", "lambda_v", "alpha_u", "alpha_v"):
            values = getattr(self, name)
            if values is None:
                continue
            if len(values) == 0:
                raise ConfigError(
                    "please give at least one value for ‘{0}’".format(name)
                )
            if any(not (w >= 0) for w in values):
                raise ConfigError("‘{0}’ must hold nonnegative values".format(name))
        if self.sweeps < 1:
            raise ConfigError("please set ‘sweeps’ to at least 1")
        if self.penalty_order not in (2, 4):
            raise ConfigError("please set ‘penalty_order’ to 2 or 4")

    @classmethod
    def single(cls, lambda_u: float, lambda_v: float, alpha_u: float, alpha_v: float):
        return cls(
            lambda_u=(lambda_u,),
            lambda_v=(lambda_v,),
            alpha_u=(alpha_u,),
            alpha_v=(alpha_v,),
        )
