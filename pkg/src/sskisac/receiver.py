"""
Ground-station SSK receiver: power weighting, ML antenna detection,
bit-error accounting and the pairwise error probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, FramingError
from .numerics import q_function

__all__ = [
    "DetectionResult",
    "adaptive_weights",
    "ml_detect",
    "ml_detect_batch",
    "pairwise_ep_theoretical",
    "count_bit_errors",
]


@dataclass(frozen=True)
class DetectionResult:
    detected_index: int
    metric_values: np.ndarray
    weighted_input: np.ndarray


def adaptive_weights(p_r) -> np.ndarray:
    """Diagonal weight matrix ``diag(P_r / max(P_r))``."""
    p = np.asarray(p_r, dtype=float)
    if np.any(p < 0):
        raise DomainError("received powers must be non-negative")
    peak = p.max(initial=0.0)
    if peak <= 0:
        raise DomainError("all received powers are zero")
    return np.diag(p / peak)


def ml_detect(y_weighted, H, E_s: float = 1.0, pl_linear: float = 1.0) -> DetectionResult:
    """Pick the antenna whose noiseless image ``sqrt(Es PL) H e_k`` is nearest ``y_weighted``.

    Ties resolve to the lowest index.
    """
    y = np.asarray(y_weighted)
    H = np.asarray(H)
    if H.ndim != 2 or y.shape != (H.shape[0],):
        raise DomainError(f"observation of shape {y.shape} does not match H {H.shape}")
    images = math.sqrt(E_s * pl_linear) * H
    metric = np.sum(np.abs(y[:, None] - images) ** 2, axis=0)
    return DetectionResult(int(np.argmin(metric)), metric, y)


def ml_detect_batch(y, H, gain: float = 1.0, weighted: bool = False) -> np.ndarray:
    """Vectorized detection over a leading trial axis.

    ``y`` has shape ``(n, N_r)`` and ``H`` shape ``(n, N_r, N_t)``. With
    ``weighted`` the instantaneous per-antenna powers ``|y_i|²`` weight the
    observation before the distance is taken.
    """
    if weighted:
        p = np.abs(y) ** 2
        peak = p.max(axis=1, keepdims=True)
        y = np.where(peak > 0, p / np.where(peak > 0, peak, 1.0), 1.0) * y
    metric = np.sum(np.abs(y[:, :, None] - gain * H) ** 2, axis=1)
    return np.argmin(metric, axis=1)


def pairwise_ep_theoretical(channel_sampler: Callable[[int], np.ndarray], v, v_hat,
                            E_s: float, pl_linear: float = 1.0,
                            n_samples: int = 10_000, return_se: bool = False):
    """Average of ``Q(sqrt(Es PL / 2 * ||H (v - v_hat)||²))`` over sampled channels.

    ``channel_sampler(n)`` returns ``n`` channel matrices, shape
    ``(n, N_r, N_t)``. The noise variance is taken as 1, so ``E_s`` plays
    the role of the SNR. With ``return_se`` the Monte Carlo standard error
    of the average is returned as well.
    """
    v = np.asarray(v, dtype=float)
    v_hat = np.asarray(v_hat, dtype=float)
    if np.array_equal(v, v_hat):
        raise DomainError("pairwise error needs two distinct symbols")
    if n_samples < 1000:
        raise DomainError("n_samples must be at least 1000")
    H = np.asarray(channel_sampler(n_samples))
    dist = np.sum(np.abs(H @ (v - v_hat)) ** 2, axis=-1)
    q = q_function(np.sqrt(E_s * pl_linear / 2 * dist))
    pep = float(np.mean(q))
    if return_se:
        return pep, float(np.std(q, ddof=1) / math.sqrt(q.size))
    return pep


def count_bit_errors(true_bits, detected_bits) -> int:
    a, b = str(true_bits), str(detected_bits)
    if not isinstance(true_bits, str):
        a = "".join(str(int(x)) for x in true_bits)
    if not isinstance(detected_bits, str):
        b = "".join(str(int(x)) for x in detected_bits)
    if len(a) != len(b):
        raise FramingError("bit sequences differ in length")
    return sum(x != y for x, y in zip(a, b))
