# -*- coding: utf-8 -*-
import numpy as np
import scipy.linalg

from sfpca.simbench.scenarios import make_rng


def rng(seed=0):
    return make_rng(seed)


def orthonormal(gen, n, k):
    q, r = np.linalg.qr(gen.standard_normal((n, k)))
    return q * np.sign(np.diag(r))


def matrix_with_gap(gen, n, p, gap=1.25, top=10.0):
    """Random n x p matrix whose consecutive singular values shrink by `gap`."""
    m = min(n, p)
    d = top * gap ** -np.arange(m)
    return (orthonormal(gen, n, m) * d) @ orthonormal(gen, p, m).T


def max_angle(a, b):
    """Largest principal angle between the column spaces of a and b."""
    return float(np.max(scipy.linalg.subspace_angles(a, b)))
