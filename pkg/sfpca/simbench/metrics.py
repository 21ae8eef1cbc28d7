# -*- coding: utf-8 -*-

# Evaluation metrics for estimated factor blocks: cumulative proportion of
# variance explained, relative subspace recovery error and support recovery.

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..deflation import DeflationScheme, DeflationState, deflate_block
from ..errors import DegenerateInputError, DimensionError
from ..linalg_utils import as_dense, projector

SUPPORT_THRESHOLD = 1e-8


def _nonzero_columns(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    return w[:, np.any(w != 0, axis=0)]


def metric_cpve(x0, u, v) -> List[float]:
    """
        CPVE_r = 1 - |X_r|_F^2 / |X_0|_F^2, X_r the two-way projection deflate of
        X_0 by the first r column pairs. All-zero columns are skipped.
    """
    x0 = as_dense(x0, "X")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim == 1:
        u, v = u[:, None], v[:, None]
    if (
        u.shape[0] != x0.shape[0]
        or v.shape[0] != x0.shape[1]
        or u.shape[1] != v.shape[1]
    ):
        raise DimensionError(
            "blocks of shape {0} and {1} do not match a {2}x{3} matrix".format(
                u.shape, v.shape, *x0.shape
            )
        )
    total = float(np.sum(x0 * x0))
    if total == 0:
        raise DegenerateInputError("X_0 is the zero matrix")
    scheme = DeflationScheme("projection", normalize=True)
    out = []
    for r in range(1, u.shape[1] + 1):
        keep = np.any(u[:, :r] != 0, axis=0) & np.any(v[:, :r] != 0, axis=0)
        if not np.any(keep):
            out.append(0.0)
            continue
        state = deflate_block(
            DeflationState.start(x0), u[:, :r][:, keep], v[:, :r][:, keep], scheme
        )
        rest = float(np.sum(state.x_current ** 2))
        out.append(1.0 - rest / total)
    return out


def _block_projector(w: np.ndarray, dim: int, name: str) -> np.ndarray:
    w = _nonzero_columns(w)
    if w.shape[1] == 0:
        return np.zeros((dim, dim))
    return projector(w, name)


def metric_rss_error(u_hat, u_star, u_svd) -> float:
    """|P_hat - P_star|_F / |P_svd - P_star|_F with column-space projectors."""
    u_star = np.asarray(u_star, dtype=float)
    dim = u_star.shape[0]
    p_star = projector(u_star, "U*")
    p_svd = projector(u_svd, "U_svd")
    denom = float(np.linalg.norm(p_svd - p_star))
    if denom == 0:
        raise DegenerateInputError(
            "the SVD reference recovers the true subspace exactly; the relative "
            "error is undefined"
        )
    p_hat = _block_projector(u_hat, dim, "U_hat")
    return float(np.linalg.norm(p_hat - p_star)) / denom


def match_columns(u_hat: np.ndarray, u_star: np.ndarray) -> np.ndarray:
    """Column of u_hat assigned to each truth column, maximizing total |cosine|."""
    norms_hat = np.linalg.norm(u_hat, axis=0)
    norms_hat[norms_hat == 0] = 1.0
    norms_star = np.linalg.norm(u_star, axis=0)
    norms_star[norms_star == 0] = 1.0
    cos = np.abs((u_hat / norms_hat).T @ (u_star / norms_star))
    rows, cols = linear_sum_assignment(-cos)
    match = np.empty(u_star.shape[1], dtype=int)
    match[cols] = rows
    return match


def metric_support(
    u_hat, u_star, threshold: float = SUPPORT_THRESHOLD
) -> Tuple[float, float]:
    """(TPR, FPR) of the entrywise support after matching columns to the truth."""
    u_hat = np.asarray(u_hat, dtype=float)
    u_star = np.asarray(u_star, dtype=float)
    if u_hat.ndim == 1:
        u_hat, u_star = u_hat[:, None], u_star[:, None]
    if u_hat.shape != u_star.shape:
        raise DimensionError(
            "estimate of shape {0} does not match truth of shape {1}".format(
                u_hat.shape, u_star.shape
            )
        )
    est = np.abs(u_hat[:, match_columns(u_hat, u_star)]) > threshold
    truth = np.abs(u_star) > threshold
    positives, negatives = int(truth.sum()), int((~truth).sum())
    tpr = float((est & truth).sum()) / positives if positives else 0.0
    fpr = float((est & ~truth).sum()) / negatives if negatives else 0.0
    return tpr, fpr


@dataclass
class MetricsReport:
    method: str
    replicate: int
    seed: int
    failed: bool = False
    error: Optional[str] = None
    cpve: List[float] = field(default_factory=list)
    rss_error_u: Optional[float] = None
    rss_error_v: Optional[float] = None
    tpr_u: Optional[float] = None
    fpr_u: Optional[float] = None
    tpr_v: Optional[float] = None
    fpr_v: Optional[float] = None
    objective: Optional[float] = None
    suboptimality: Optional[float] = None
    converged: Optional[bool] = None
    wall_time: Optional[float] = None
    engine_stats: Dict[str, int] = field(default_factory=dict)

    def to_dict(self, record_timings: bool = False) -> Dict:
        out = asdict(self)
        if not record_timings:
            del out["wall_time"]
        return out
