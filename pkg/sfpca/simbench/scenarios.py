# -*- coding: utf-8 -*-

# Simulated low-rank signal plus Gaussian noise: localized sinusoids as left
# factors, sawtooth ramps as right factors, on contiguous support windows.

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..errors import GenerationError
from ..types.scenario import GRAM_BAND, ScenarioSpec

logger = logging.getLogger(__name__)

BASE_SCALES = (20.0, 15.0, 10.0)


def make_rng(seed: int) -> np.random.Generator:
    """The one PRNG used for every simulated quantity: PCG64 seeded by `seed`."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class GroundTruth:
    spec: ScenarioSpec
    u_star: np.ndarray
    v_star: np.ndarray
    d_star: np.ndarray
    x_clean: np.ndarray
    x_noisy: np.ndarray
    snr_realized: float
    gram_deviation_u: float
    gram_deviation_v: float
    shift_u: int
    shift_v: int

    def to_meta(self) -> Dict:
        return {
            "scenario": self.spec.id,
            "n": self.spec.n,
            "p": self.spec.p,
            "seed": self.spec.seed,
            "target_snr": self.spec.target_snr,
            "snr_realized": self.snr_realized,
            "gram_deviation_u": self.gram_deviation_u,
            "gram_deviation_v": self.gram_deviation_v,
            "shift_u": self.shift_u,
            "shift_v": self.shift_v,
            "d_star": [float(w) for w in self.d_star],
            "prng": "numpy PCG64",
        }


def support_windows(dim: int, k: int, shift: int) -> List[Tuple[int, int]]:
    """k contiguous thirds [a, b) of range(dim), each widened by `shift` per side."""
    windows = []
    for j in range(k):
        a, b = j * dim // k, (j + 1) * dim // k
        windows.append((max(0, a - shift), min(dim, b + shift)))
    return windows


def sinusoid_block(dim: int, k: int, shift: int) -> np.ndarray:
    """Column j carries j+1 sine cycles over its window."""
    out = np.zeros((dim, k))
    for j, (a, b) in enumerate(support_windows(dim, k, shift)):
        length = b - a
        tau = np.arange(1, length + 1) / (length + 1)
        out[a:b, j] = np.sin(2 * np.pi * (j + 1) * tau)
    return out / np.linalg.norm(out, axis=0)


def sawtooth_block(dim: int, k: int, shift: int) -> np.ndarray:
    """Column j is a single rising ramp over its window."""
    out = np.zeros((dim, k))
    for j, (a, b) in enumerate(support_windows(dim, k, shift)):
        length = b - a
        out[a:b, j] = np.arange(1, length + 1) / length
    return out / np.linalg.norm(out, axis=0)


def gram_deviation(w: np.ndarray) -> float:
    return float(np.linalg.norm(w.T @ w - np.eye(w.shape[1])))


def _banded(
    build, dim: int, k: int, shift: int, side: str
) -> Tuple[np.ndarray, int, float]:
    lo, hi = GRAM_BAND
    block = build(dim, k, shift)
    dev = gram_deviation(block)
    if lo <= dev <= hi:
        return block, shift, dev
    step = max(1, shift // 4)
    adjusted = shift - step if dev > hi else shift + step
    logger.debug(
        "%s-side Gram deviation %.4f outside [%.2f, %.2f] at shift %d; retrying "
        "with shift %d",
        side,
        dev,
        lo,
        hi,
        shift,
        adjusted,
    )
    block = build(dim, k, adjusted)
    dev = gram_deviation(block)
    if not lo <= dev <= hi:
        raise GenerationError(
            "cannot place the {0}-side Gram deviation in [{1}, {2}]: got {3:.4f} "
            "at shift {4}".format(side, lo, hi, dev, adjusted)
        )
    return block, adjusted, dev


def generate_scenario(spec: ScenarioSpec) -> GroundTruth:
    n, p, k = spec.n, spec.p, spec.k
    if spec.id == 1:
        u_star, shift_u = sinusoid_block(n, k, 0), 0
        v_star, shift_v = sawtooth_block(p, k, 0), 0
        dev_u, dev_v = gram_deviation(u_star), gram_deviation(v_star)
    else:
        shift_u = spec.overlap_shift if spec.overlap_shift is not None else n // 12
        shift_v = spec.overlap_shift if spec.overlap_shift is not None else p // 12
        u_star, shift_u, dev_u = _banded(sinusoid_block, n, k, shift_u, "U")
        v_star, shift_v, dev_v = _banded(sawtooth_block, p, k, shift_v, "V")

    rng = make_rng(spec.seed)
    noise = rng.standard_normal((n, p))
    base = np.asarray(BASE_SCALES[:k])
    signal = (u_star * base) @ v_star.T
    scale = spec.target_snr * np.linalg.norm(noise) / np.linalg.norm(signal)
    d_star = scale * base
    x_clean = (u_star * d_star) @ v_star.T
    snr = float(np.linalg.norm(x_clean) / np.linalg.norm(noise))
    logger.debug(
        "scenario %d seed %d: SNR %.4f, Gram deviation (%.4f, %.4f)",
        spec.id,
        spec.seed,
        snr,
        dev_u,
        dev_v,
    )
    return GroundTruth(
        spec=spec,
        u_star=u_star,
        v_star=v_star,
        d_star=d_star,
        x_clean=x_clean,
        x_noisy=x_clean + noise,
        snr_realized=snr,
        gram_deviation_u=dev_u,
        gram_deviation_v=dev_v,
        shift_u=shift_u,
        shift_v=shift_v,
    )
