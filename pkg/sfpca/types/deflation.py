from dataclasses import dataclass

from typing_extensions import Literal

from ..errors import ConfigError

DeflationKind = Literal["hotelling", "projection", "schur"]
KINDS = ("hotelling", "projection", "schur")


@dataclass(frozen=True)
class DeflationScheme:
    kind: DeflationKind
    # Euclidean-normalize the PCs first; schur ignores it
    normalize: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(
                "unknown deflation scheme ‘{0}’, expected one of {1}".format(
                    self.kind, ", ".join(KINDS)
                )
            )
