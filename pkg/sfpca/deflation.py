# -*- coding: utf-8 -*-

# Hotelling, two-way projection and Schur complement deflation of a data
# matrix by estimated left/right principal components, in vector and
# normalized block form, with an orthogonality report over the history.

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import scipy.linalg

from .errors import (
    ConditioningError,
    DegenerateInputError,
    DimensionError,
    SingularPivotError,
)
from .linalg_utils import as_dense, projector
from .types.deflation import KINDS, DeflationScheme

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-12
CONDITION_LIMIT = 1e10


def _column(w, name: str) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise DimensionError(
            "‘{0}’ must be a vector, got shape {1}".format(name, w.shape)
        )
    if not np.any(w):
        raise DegenerateInputError("‘{0}’ is the zero vector".format(name))
    return w


def _block(w, name: str) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    if w.ndim != 2:
        raise DimensionError(
            "‘{0}’ must be a matrix, got shape {1}".format(name, w.shape)
        )
    return w


class Deflation:
    """Base of the three deflation schemes."""

    def __init__(self, normalize: bool = True):
        self.normalize = normalize

    @classmethod
    def get_type(cls) -> str:
        raise NotImplementedError

    def deflate(self, x: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def deflate_block(self, x: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def prepare(self, u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """The vectors actually used: unit Euclidean norm when normalizing."""
        if self.normalize:
            return u / np.linalg.norm(u), v / np.linalg.norm(v)
        return u, v


class HotellingDeflation(Deflation):
    @classmethod
    def get_type(cls):
        return "hotelling"

    def deflate(self, x, u, v):
        d = float(u @ x @ v)
        return x - d * np.outer(u, v)

    def deflate_block(self, x, u, v):
        if self.normalize:
            return x - projector(u, "U") @ x @ projector(v, "V")
        return x - u @ (u.T @ x @ v) @ v.T


class ProjectionDeflation(Deflation):
    @classmethod
    def get_type(cls):
        return "projection"

    def deflate(self, x, u, v):
        ux = u @ x
        xv = x @ v
        return x - np.outer(u, ux) - np.outer(xv, v) + float(ux @ v) * np.outer(u, v)

    def deflate_block(self, x, u, v):
        if self.normalize:
            left, right = projector(u, "U"), projector(v, "V")
        else:
            left, right = u @ u.T, v @ v.T
        y = x - left @ x
        return y - y @ right


class SchurDeflation(Deflation):
    """Scale invariant, so `normalize` has no effect."""

    @classmethod
    def get_type(cls):
        return "schur"

    def prepare(self, u, v):
        return u, v

    def deflate(self, x, u, v):
        pivot = float(u @ x @ v)
        scale = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(x)
        if abs(pivot) < PIVOT_TOL * scale or pivot == 0:
            raise SingularPivotError(
                "Schur pivot u^T X v = {0:.3e} is numerically zero".format(pivot)
            )
        return x - np.outer(x @ v, u @ x) / pivot

    def deflate_block(self, x, u, v):
        ux = u.T @ x
        xv = x @ v
        pivot = ux @ v
        cond = np.linalg.cond(pivot)
        if not np.isfinite(cond) or cond > CONDITION_LIMIT:
            raise ConditioningError("U^T X V", float(cond))
        return x - xv @ scipy.linalg.lu_solve(scipy.linalg.lu_factor(pivot), ux)


def _scheme_types() -> Dict[str, type]:
    return {cls.get_type(): cls for cls in Deflation.__subclasses__()}


def get_deflation(scheme: DeflationScheme) -> Deflation:
    return _scheme_types()[scheme.kind](normalize=scheme.normalize)


@dataclass(frozen=True)
class DeflationStep:
    u: np.ndarray
    v: np.ndarray
    scheme: DeflationScheme
    x_after: np.ndarray


@dataclass(frozen=True)
class DeflationState:
    """X_0, the current deflate X_t, and the steps that produced it."""

    x_original: np.ndarray
    x_current: np.ndarray
    history: Tuple[DeflationStep, ...] = field(default_factory=tuple)

    @classmethod
    def start(cls, x) -> "DeflationState":
        x = as_dense(x, "X").copy()
        x.flags.writeable = False
        return cls(x_original=x, x_current=x, history=())

    def push(
        self, u, v, scheme: DeflationScheme, x_next: np.ndarray
    ) -> "DeflationState":
        x_next = as_dense(x_next, "deflated X").copy()
        x_next.flags.writeable = False
        step = DeflationStep(u=u, v=v, scheme=scheme, x_after=x_next)
        return DeflationState(
            x_original=self.x_original,
            x_current=x_next,
            history=self.history + (step,),
        )

    @property
    def steps(self) -> int:
        return len(self.history)


def _as_state(state) -> DeflationState:
    if isinstance(state, DeflationState):
        return state
    return DeflationState.start(state)


def deflate_vector(state, u, v, scheme: DeflationScheme) -> DeflationState:
    """Remove one rank-one component (u, v) from the current matrix."""
    state = _as_state(state)
    x = state.x_current
    u, v = _column(u, "u"), _column(v, "v")
    if u.shape[0] != x.shape[0] or v.shape[0] != x.shape[1]:
        raise DimensionError(
            "vectors of length {0} and {1} do not match a {2}x{3} matrix".format(
                u.shape[0], v.shape[0], *x.shape
            )
        )
    impl = get_deflation(scheme)
    u, v = impl.prepare(u, v)
    x_next = impl.deflate(x, u, v)
    logger.debug(
        "%s deflation step %d: |X|_F %.6g -> %.6g",
        scheme.kind,
        state.steps + 1,
        np.linalg.norm(x),
        np.linalg.norm(x_next),
    )
    return state.push(u[:, None], v[:, None], scheme, x_next)


def deflate_block(state, u_block, v_block, scheme: DeflationScheme) -> DeflationState:
    """Remove k components at once using the normalized block formulas."""
    state = _as_state(state)
    x = state.x_current
    u, v = _block(u_block, "U"), _block(v_block, "V")
    if u.shape[0] != x.shape[0] or v.shape[0] != x.shape[1] or u.shape[1] != v.shape[1]:
        raise DimensionError(
            "blocks of shape {0} and {1} do not match a {2}x{3} matrix".format(
                u.shape, v.shape, *x.shape
            )
        )
    x_next = get_deflation(scheme).deflate_block(x, u, v)
    return state.push(u.copy(), v.copy(), scheme, x_next)


@dataclass(frozen=True)
class OrthogonalityRow:
    step: int
    later_step: int
    two_way: float
    left: float
    right: float

    @property
    def subsequent(self) -> bool:
        return self.later_step > self.step


@dataclass(frozen=True)
class OrthogonalityReport:
    """
        Residuals |U_t^T X_s V_t|_F (two-way), |U_t^T X_s|_F (left) and
        |X_s V_t|_F (right) for every step t and every deflate X_s with s >= t.
        Rows with s = t measure one-way orthogonality; s > t subsequent.
    """

    rows: Tuple[OrthogonalityRow, ...]
    x_norm: float
    schemes: Tuple[str, ...]

    def _max(self, values) -> float:
        values = list(values)
        return max(values) if values else 0.0

    @property
    def max_two_way(self) -> float:
        return self._max(r.two_way for r in self.rows)

    @property
    def max_one_way(self) -> float:
        return self._max(
            max(r.left, r.right) for r in self.rows if not r.subsequent
        )

    @property
    def max_subsequent(self) -> float:
        return self._max(max(r.left, r.right) for r in self.rows if r.subsequent)

    def summary(self) -> Dict[str, float]:
        return {
            "x_norm": self.x_norm,
            "max_two_way": self.max_two_way,
            "max_one_way": self.max_one_way,
            "max_subsequent": self.max_subsequent,
        }

    def to_dict(self):
        return {
            "schemes": list(self.schemes),
            "summary": self.summary(),
            "rows": [
                {
                    "step": r.step,
                    "later_step": r.later_step,
                    "two_way": r.two_way,
                    "left": r.left,
                    "right": r.right,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def table(self) -> str:
        lines = ["{0:>4} {1:>5} {2:>12} {3:>12} {4:>12}".format(
            "step", "later", "two-way", "left", "right"
        )]
        for r in self.rows:
            lines.append(
                "{0:>4} {1:>5} {2:>12.3e} {3:>12.3e} {4:>12.3e}".format(
                    r.step, r.later_step, r.two_way, r.left, r.right
                )
            )
        return "\n".join(lines)


def orthogonality_report(state: DeflationState) -> OrthogonalityReport:
    if not state.history:
        raise ValueError("orthogonality report needs at least one deflation step")
    rows: List[OrthogonalityRow] = []
    for t, step in enumerate(state.history, start=1):
        for s in range(t, state.steps + 1):
            x = state.history[s - 1].x_after
            left = step.u.T @ x
            rows.append(
                OrthogonalityRow(
                    step=t,
                    later_step=s,
                    two_way=float(np.linalg.norm(left @ step.v)),
                    left=float(np.linalg.norm(left)),
                    right=float(np.linalg.norm(x @ step.v)),
                )
            )
    return OrthogonalityReport(
        rows=tuple(rows),
        x_norm=float(np.linalg.norm(state.x_original)),
        schemes=tuple(step.scheme.kind for step in state.history),
    )


__all__ = (
    "KINDS",
    "DeflationScheme",
    "DeflationState",
    "deflate_vector",
    "deflate_block",
    "orthogonality_report",
)
