# -*- coding: utf-8 -*-

# Sparse and Functional PCA: rank-one and manifold solvers, deflation schemes
# and a simulation benchmark.

__version__ = "1.0"

from .deflation import (
    DeflationScheme,
    DeflationState,
    deflate_block,
    deflate_vector,
    orthogonality_report,
)
from .linalg_utils import (
    build_difference_penalty,
    build_smoother,
    s_norm,
    smoother_for,
    soft_threshold,
    thin_svd,
)
from .man_sfpca import canonicalize, fit_amanpg, fit_manifold, objective_manifold
from .pipeline import fit_pipeline
from .rank1 import fit_rank1, objective_rank1
from .types.manifold import ManConfig
from .types.rank1 import Rank1Config

__all__ = (
    "DeflationScheme",
    "DeflationState",
    "ManConfig",
    "Rank1Config",
    "build_difference_penalty",
    "build_smoother",
    "canonicalize",
    "deflate_block",
    "deflate_vector",
    "fit_amanpg",
    "fit_manifold",
    "fit_pipeline",
    "fit_rank1",
    "objective_manifold",
    "objective_rank1",
    "orthogonality_report",
    "s_norm",
    "smoother_for",
    "soft_threshold",
    "thin_svd",
)
