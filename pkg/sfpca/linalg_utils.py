# -*- coding: utf-8 -*-

# Dense matrix kernels, roughness penalties, smoothing operators and the l1
# proximal operator shared by every solver.

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from .errors import ConditioningError, DimensionError, NumericError

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10


def as_dense(m, name: str = "matrix") -> np.ndarray:
    """Return `m` as a finite 2-D float64 array."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise DimensionError(
            "‘{0}’ must be two-dimensional, got shape {1}".format(name, a.shape)
        )
    if not np.all(np.isfinite(a)):
        raise NumericError("‘{0}’ contains NaN or infinite entries".format(name))
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DifferencePenalty:
    """Roughness penalty Omega = D^T D for an interior finite-difference operator D."""

    dim: int
    order: int
    omega: np.ndarray

    def __post_init__(self):
        omega = self.omega
        if omega.shape != (self.dim, self.dim):
            raise DimensionError(
                "penalty matrix has shape {0}, expected {1}".format(
                    omega.shape, (self.dim, self.dim)
                )
            )
        scale = max(1.0, float(np.max(np.abs(omega))))
        if np.max(np.abs(omega - omega.T)) > SYMMETRY_TOL * scale:
            raise NumericError("penalty matrix is not symmetric")
        if np.min(scipy.linalg.eigvalsh(omega)) < -PSD_TOL * scale:
            raise NumericError("penalty matrix is not positive semi-definite")


def build_difference_penalty(dim: int, order: int) -> DifferencePenalty:
    if order not in (2, 4):
        raise DimensionError("difference order must be 2 or 4, got {0}".format(order))
    if dim < order + 1:
        raise DimensionError(
            "dimension {0} is too small for a difference penalty of order {1}".format(
                dim, order
            )
        )
    # interior rows only: (dim - order) x dim, no wraparound
    d = np.diff(np.eye(dim), n=order, axis=0)
    return DifferencePenalty(dim=dim, order=order, omega=_frozen(d.T @ d))


@dataclass(frozen=True)
class SmoothingOperator:
    """
        S = I + alpha * Omega together with the factorizations the solvers need:
        the lower Cholesky factor and the symmetric square root and inverse
        square root (from one eigendecomposition of S).
    """

    dim: int
    alpha: float
    s: np.ndarray
    chol_s: np.ndarray
    s_inv_sqrt: np.ndarray
    s_sqrt: np.ndarray
    min_eig: float
    max_eig: float

    @property
    def is_identity(self) -> bool:
        return self.alpha == 0.0

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Return S^{-1} b."""
        if self.is_identity:
            return np.array(b, dtype=float)
        return scipy.linalg.cho_solve((self.chol_s, True), b)

    def apply(self, b: np.ndarray) -> np.ndarray:
        if self.is_identity:
            return np.array(b, dtype=float)
        return self.s @ b

    def gram(self, u: np.ndarray) -> np.ndarray:
        """Return U^T S U."""
        return u.T @ self.apply(u)

    def norm(self, x: np.ndarray) -> float:
        return s_norm(x, self)


def identity_smoother(dim: int) -> SmoothingOperator:
    eye = _frozen(np.eye(dim))
    return SmoothingOperator(
        dim=dim,
        alpha=0.0,
        s=eye,
        chol_s=eye,
        s_inv_sqrt=eye,
        s_sqrt=eye,
        min_eig=1.0,
        max_eig=1.0,
    )


def build_smoother(omega: DifferencePenalty, alpha: float) -> SmoothingOperator:
    if alpha < 0 or not np.isfinite(alpha):
        raise DimensionError(
            "smoothing level must be a nonnegative real, got {0}".format(alpha)
        )
    if alpha == 0:
        return identity_smoother(omega.dim)

    s = np.eye(omega.dim) + alpha * omega.omega
    s = (s + s.T) / 2.0
    try:
        chol = scipy.linalg.cholesky(s, lower=True)
    except scipy.linalg.LinAlgError as e:
        raise NumericError(
            "Cholesky factorization of the smoothing matrix failed "
            "(alpha = {0}): {1}".format(alpha, e)
        )
    w, q = scipy.linalg.eigh(s)
    if np.min(w) <= 0:
        raise NumericError(
            "smoothing matrix is not positive definite (min eigenvalue {0})".format(
                np.min(w)
            )
        )
    root = np.sqrt(w)
    return SmoothingOperator(
        dim=omega.dim,
        alpha=float(alpha),
        s=_frozen(s),
        chol_s=_frozen(chol),
        s_inv_sqrt=_frozen((q / root) @ q.T),
        s_sqrt=_frozen((q * root) @ q.T),
        min_eig=float(w[0]),
        max_eig=float(w[-1]),
    )


def smoother_for(dim: int, alpha: float, order: int = 2) -> SmoothingOperator:
    """Build S = I + alpha * Omega for a difference penalty of the given order."""
    if alpha == 0:
        return identity_smoother(dim)
    return build_smoother(build_difference_penalty(dim, order), alpha)


def soft_threshold(z, tau: float) -> np.ndarray:
    """
        Proximal operator of tau * ||.||_1: sign(z) * max(|z| - tau, 0).
        Entries inside the dead zone come out as exact zeros.
    """
    if tau < 0:
        raise ValueError("threshold must be nonnegative, got {0}".format(tau))
    z = np.asarray(z, dtype=float)
    if tau == 0:
        return z.copy()
    return np.sign(z) * np.maximum(np.abs(z) - tau, 0.0)


def thin_svd(m) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
        Economical SVD m = U diag(d) V^T with d nonincreasing. Falls back from
        the divide-and-conquer driver to the QR-iteration driver before giving up.
    """
    a = as_dense(m)
    errors = []
    for driver in ("gesdd", "gesvd"):
        try:
            u, d, vt = scipy.linalg.svd(a, full_matrices=False, lapack_driver=driver)
            return u, d, vt.T
        except (scipy.linalg.LinAlgError, ValueError) as e:
            logger.warning(
                "SVD driver ‘%s’ failed on %s matrix: %s", driver, a.shape, e
            )
            errors.append("{0}: {1}".format(driver, e))
    raise NumericError(
        "SVD did not converge for a {0} matrix ({1})".format(
            a.shape, "; ".join(errors)
        )
    )


def s_norm(x, s: SmoothingOperator) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape[0] != s.dim:
        raise DimensionError(
            "vector of length {0} does not match smoother of dimension {1}".format(
                x.shape[0], s.dim
            )
        )
    return float(np.sqrt(max(float(x @ s.apply(x)), 0.0)))


def l1_norm(w: np.ndarray) -> float:
    return float(np.sum(np.abs(w)))


def spectral_norm(x: np.ndarray) -> float:
    return float(scipy.linalg.svdvals(x)[0]) if x.size else 0.0


def projector(b: np.ndarray, name: str = "block") -> np.ndarray:
    """Orthogonal projector B (B^T B)^{-1} B^T onto the column space of B."""
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        b = b[:, None]
    g = b.T @ b
    cond = np.linalg.cond(g) if g.size else np.inf
    if not np.isfinite(cond) or cond > 1e10:
        raise ConditioningError(name, float(cond))
    c = scipy.linalg.cho_factor(g)
    return b @ scipy.linalg.cho_solve(c, b.T)
