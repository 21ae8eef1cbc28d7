__all__ = (
    "deflation",
    "manifold",
    "penalty",
    "rank1",
    "run",
    "scenario",
    "tuning",
)

from . import deflation
from . import manifold
from . import penalty
from . import rank1
from . import run
from . import scenario
from . import tuning
