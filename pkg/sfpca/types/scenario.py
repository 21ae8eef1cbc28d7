from dataclasses import dataclass, replace
from typing import Optional

from typing_extensions import Literal

from ..errors import ConfigError

ScenarioId = Literal[1, 2]

# (n, p, target SNR) of the two published scenarios
DEFAULTS = {1: (250, 100, 1.2), 2: (100, 100, 1.7)}
GRAM_BAND = (0.3, 0.45)


@dataclass(frozen=True)
class ScenarioSpec:
    id: ScenarioId
    n: int
    p: int
    target_snr: float
    seed: int = 0
    k: int = 3
    # scenario 2 support widening; None means n/12 on U and p/12 on V
    overlap_shift: Optional[int] = None

    def __post_init__(self):
        if self.id not in DEFAULTS:
            raise ConfigError(
                "unknown scenario ‘{0}’, expected 1 or 2".format(self.id)
            )
        if self.k != 3:
            raise ConfigError("scenarios are defined for exactly 3 components")
        if self.n < 3 * self.k or self.p < 3 * self.k:
            raise ConfigError(
                "a {0}x{1} scenario is too small for {2} support windows".format(
                    self.n, self.p, self.k
                )
            )
        if not self.target_snr > 0:
            raise ConfigError("please set ‘target_snr’ to a positive value")
        if self.overlap_shift is not None and self.overlap_shift < 0:
            raise ConfigError("please set ‘overlap_shift’ to a nonnegative value")

    @classmethod
    def default(cls, id: int, seed: int = 0) -> "ScenarioSpec":
        if id not in DEFAULTS:
            raise ConfigError("unknown scenario ‘{0}’, expected 1 or 2".format(id))
        n, p, snr = DEFAULTS[id]
        return cls(id=id, n=n, p=p, target_snr=snr, seed=seed)  # type: ignore

    def with_seed(self, seed: int) -> "ScenarioSpec":
        return replace(self, seed=seed)
