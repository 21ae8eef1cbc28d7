# -*- coding: utf-8 -*-

# Portable effort counters reported with every manifold fit.

from dataclasses import asdict, dataclass
from typing import Dict


@dataclass
class EngineStats:
    """Effort counters for one fit. Local to the fit, never shared."""

    svd_calls: int = 0
    retraction_calls: int = 0
    descent_solves: int = 0
    inner_iterations: int = 0
    inner_failures: int = 0
    stalled_searches: int = 0
    # accelerated proximal-gradient steps of the MADMM sparse update (S != I)
    prox_iterations: int = 0

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)
