# -*- coding: utf-8 -*-

# Generalized Stiefel manifold {U : U^T S U = I_k}: feasibility, tangency and
# the Cholesky retraction.

import logging
from typing import Tuple

import numpy as np
import scipy.linalg

from .errors import DimensionError, FeasibilityError, RankDeficiencyError
from .linalg_utils import SmoothingOperator, as_dense, thin_svd

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-8


def feasibility_residual(u: np.ndarray, smoother: SmoothingOperator) -> float:
    """Frobenius norm of U^T S U - I."""
    k = u.shape[1]
    return float(np.linalg.norm(smoother.gram(u) - np.eye(k)))


class StiefelPoint:
    """
        A point U on the generalized Stiefel manifold of a smoothing operator.

        Feasibility is checked at construction. With strict=False an infeasible
        U is accepted with a warning; solvers use this for the iterates they
        hold transiently (e.g. the SVD initializer when alpha > 0).
    """

    __slots__ = ("_u", "smoother", "residual")

    def __init__(self, u, smoother: SmoothingOperator, strict: bool = True):
        u = as_dense(u, "U")
        if u.shape[0] != smoother.dim:
            raise DimensionError(
                "point has {0} rows but the smoother has dimension {1}".format(
                    u.shape[0], smoother.dim
                )
            )
        residual = feasibility_residual(u, smoother)
        if residual > FEASIBILITY_TOL:
            if strict:
                raise FeasibilityError(
                    "U^T S U deviates from the identity by {0:.3e}".format(residual)
                )
            logger.debug("holding infeasible iterate (residual %.3e)", residual)
        u = u.copy()
        u.flags.writeable = False
        self._u = u
        self.smoother = smoother
        self.residual = residual

    @property
    def u(self) -> np.ndarray:
        return self._u

    @property
    def shape(self) -> Tuple[int, int]:
        return self._u.shape  # type: ignore

    @property
    def k(self) -> int:
        return self._u.shape[1]

    @property
    def is_feasible(self) -> bool:
        return self.residual <= FEASIBILITY_TOL

    def __repr__(self):
        return "StiefelPoint(n={0}, k={1}, residual={2:.2e})".format(
            self._u.shape[0], self.k, self.residual
        )


def _check_conformable(base: StiefelPoint, d: np.ndarray, what: str) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim == 1:
        d = d[:, None]
    if d.shape != base.shape:
        raise DimensionError(
            "{0} has shape {1}, expected {2}".format(what, d.shape, base.shape)
        )
    return d


def retract(base: StiefelPoint, step) -> StiefelPoint:
    """
        Cholesky retraction: Y = U + step is mapped to Y L^{-T} where
        L L^T = Y^T S Y.
    """
    step = _check_conformable(base, step, "step")
    y = base.u + step
    g = base.smoother.gram(y)
    g = (g + g.T) / 2.0
    try:
        chol = scipy.linalg.cholesky(g, lower=True)
    except scipy.linalg.LinAlgError:
        raise RankDeficiencyError(
            "Y^T S Y is not positive definite; the step is too large or degenerate"
        )
    if not np.all(np.isfinite(chol)) or np.min(np.abs(np.diag(chol))) == 0:
        raise RankDeficiencyError("Y^T S Y is singular")
    out = scipy.linalg.solve_triangular(chol, y.T, lower=True).T
    return StiefelPoint(out, base.smoother, strict=False)


def retract_on_support(y, smoother: SmoothingOperator) -> StiefelPoint:
    """
        Map Y onto the manifold without filling in its zeros. Column j is
        restricted to its own support P_j, projected (least squares, two
        passes) onto the complement of (S Q_{<j})[P_j] so it is S-orthogonal to
        the columns already placed, then S-normalized. With S = I and a dense Y
        this is Gram-Schmidt, i.e. the Cholesky retraction of Y.
    """
    y = as_dense(y, "Y")
    if y.ndim != 2 or y.shape[0] != smoother.dim:
        raise DimensionError(
            "block of shape {0} does not match a smoother of dimension {1}".format(
                y.shape, smoother.dim
            )
        )
    n, k = y.shape
    q = np.zeros((n, k))
    sq = np.zeros((n, k))
    for j in range(k):
        support = np.flatnonzero(y[:, j])
        col = y[support, j].copy()
        scale = float(np.linalg.norm(col))
        if j > 0 and support.size:
            b = sq[support, :j]
            for _ in range(2):
                coef = np.linalg.lstsq(b, col, rcond=None)[0]
                col = col - b @ coef
        full = np.zeros(n)
        full[support] = col
        applied = smoother.apply(full)
        norm2 = float(full @ applied)
        if scale == 0 or not norm2 > (1e-12 * scale) ** 2:
            raise RankDeficiencyError(
                "column {0} has no room on its support of {1} entries".format(
                    j, support.size
                )
            )
        norm = np.sqrt(norm2)
        q[:, j] = full / norm
        sq[:, j] = applied / norm
    return StiefelPoint(q, smoother, strict=False)


def tangency_residual(base: StiefelPoint, d) -> float:
    """Frobenius norm of D^T S U + U^T S D; zero iff D is tangent at U."""
    d = _check_conformable(base, d, "direction")
    m = d.T @ base.smoother.apply(base.u)
    return float(np.linalg.norm(m + m.T))


class TangentProjector:
    """
        Euclidean projection onto the tangent space {D : sym(B^T D) = 0} at U,
        with B = S U. The multiplier L is the symmetric solution of the k x k
        Sylvester system (B^T B) L + L (B^T B) = B^T Y + Y^T B, solved in the
        eigenbasis of B^T B, which is factored once per base point.
    """

    def __init__(self, base: StiefelPoint):
        self.base = base
        self.b = base.smoother.apply(base.u)
        w, q = scipy.linalg.eigh(self.b.T @ self.b)
        if np.min(w) <= 0:
            raise RankDeficiencyError("S U does not have full column rank")
        self._q = q
        self._denom = w[:, None] + w[None, :]

    def __call__(self, y) -> np.ndarray:
        y = _check_conformable(self.base, y, "direction")
        c = self.b.T @ y
        c = self._q.T @ (c + c.T) @ self._q
        lam = self._q @ (c / self._denom) @ self._q.T
        return y - self.b @ ((lam + lam.T) / 2.0)


def project_tangent(base: StiefelPoint, y) -> np.ndarray:
    return TangentProjector(base)(y)


def init_leading_svd(
    x, k: int, s_u: SmoothingOperator, s_v: SmoothingOperator
) -> Tuple[np.ndarray, np.ndarray]:
    """
        Leading k left and right singular vectors of X. They are not retracted
        onto the generalized manifolds, so they are infeasible whenever a
        smoother is not the identity.
    """
    x = as_dense(x, "X")
    n, p = x.shape
    if k < 1 or k > min(n, p):
        raise DimensionError(
            "cannot take {0} singular vectors of a {1}x{2} matrix".format(k, n, p)
        )
    if s_u.dim != n or s_v.dim != p:
        raise DimensionError(
            "smoothers of dimension ({0}, {1}) do not match a {2}x{3} matrix".format(
                s_u.dim, s_v.dim, n, p
            )
        )
    u, _, v = thin_svd(x)
    return u[:, :k].copy(), v[:, :k].copy()
