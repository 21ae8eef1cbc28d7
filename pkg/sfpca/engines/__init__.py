__all__ = (
    "common",
    "madmm",
    "manpg",
)

from typing import Dict, Type

from . import common
from . import madmm
from . import manpg
from ..errors import ConfigError


def _subclasses(cls):
    for sub in cls.__subclasses__():
        yield sub
        yield from _subclasses(sub)


def engine_types() -> Dict[str, Type[common.Engine]]:
    return {cls.get_type(): cls for cls in _subclasses(common.Engine)}


def get_engine(name: str) -> Type[common.Engine]:
    types = engine_types()
    try:
        return types[name]
    except KeyError:
        raise ConfigError(
            "unknown engine ‘{0}’, expected one of {1}".format(
                name, ", ".join(sorted(types))
            )
        )
