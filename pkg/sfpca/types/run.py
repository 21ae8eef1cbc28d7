from dataclasses import dataclass
from typing import Optional, Tuple

from typing_extensions import Literal

from ..errors import ConfigError
from .deflation import KINDS

Command = Literal["simulate", "fit", "deflate", "bench"]
MethodName = Literal["rank1", "madmm", "manpg", "amanpg"]
DeflationName = Literal["hotelling", "projection", "schur", "none"]

METHODS = ("rank1", "madmm", "manpg", "amanpg")
BENCH_METHODS = ("svd", "hd", "pd", "sd", "madmm", "manpg", "amanpg")


@dataclass(frozen=True)
class RunConfig:
    command: Command
    output: str = "."
    input: Optional[str] = None
    method: MethodName = "rank1"
    deflation: DeflationName = "none"
    rank: int = 1
    lambda_u: float = 0.0
    lambda_v: float = 0.0
    alpha_u: float = 0.0
    alpha_v: float = 0.0
    penalty_order: Literal[2, 4] = 2
    seed: int = 0
    tune: bool = False
    scenario: int = 1
    replicates: int = 1
    methods: Tuple[str, ...] = ("hd", "pd", "sd", "madmm")
    workers: int = 1
    record_timings: bool = False
    dump_factors: bool = False
    overlap_shift: Optional[int] = None
    # deflate: factor files, block or sequential vector mode, HD/PD normalization
    u_input: Optional[str] = None
    v_input: Optional[str] = None
    block: bool = True
    normalize: bool = True
    # manifold engines
    rho: float = 1.0
    max_outer: Optional[int] = None
    order_weight_epsilon: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError("unknown method ‘{0}’".format(self.method))
        if self.deflation != "none" and self.deflation not in KINDS:
            raise ConfigError(
                "unknown deflation scheme ‘{0}’".format(self.deflation)
            )
        if self.deflation != "none" and self.method != "rank1":
            raise ConfigError(
                "deflation ‘{0}’ only applies to --method rank1, "
                "not ‘{1}’".format(self.deflation, self.method)
            )
        if self.command == "fit" and self.method == "rank1":
            if self.rank > 1 and self.deflation == "none":
                raise ConfigError(
                    "please choose a --deflation scheme to fit {0} rank-one "
                    "components".format(self.rank)
                )
        if self.command == "deflate" and self.deflation == "none":
            raise ConfigError("please choose a --scheme to deflate with")
        if self.rank < 1:
            raise ConfigError("please set ‘rank’ to at least 1")
        for name in ("lambda_u", "lambda_v", "alpha_u", "alpha_v"):
            if not getattr(self, name) >= 0:
                raise ConfigError(
                    "please set ‘{0}’ to a nonnegative value".format(name)
                )
        if self.penalty_order not in (2, 4):
            raise ConfigError("please set ‘penalty_order’ to 2 or 4")
        if self.replicates < 1:
            raise ConfigError("please set ‘replicates’ to at least 1")
        if self.workers < 1:
            raise ConfigError("please set ‘workers’ to at least 1")
        unknown = [m for m in self.methods if m not in BENCH_METHODS]
        if unknown:
            raise ConfigError(
                "unknown benchmark method(s) {0}; valid tokens are {1}".format(
                    ", ".join(unknown), ", ".join(BENCH_METHODS)
                )
            )
