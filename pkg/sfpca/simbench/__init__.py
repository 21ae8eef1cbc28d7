__all__ = (
    "metrics",
    "runner",
    "scenarios",
    "tuning",
)

from . import metrics
from . import runner
from . import scenarios
from . import tuning
