"""
Shared numerical primitives.

Gaussian tail function and its inverse, seeded random streams and the
fading-magnitude samplers, and single/few tone frequency estimators
(interpolated FFT peak and Root-MUSIC).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import special

from .errors import DomainError, EstimationError

__all__ = [
    "RngStream",
    "SpectralEstimate",
    "as_generator",
    "q_function",
    "inv_q_function",
    "sample_nakagami",
    "sample_rayleigh",
    "fft_peak_frequency",
    "root_music_frequencies",
]


@dataclass
class RngStream:
    """Reproducible random stream keyed by ``(seed, stream_id)``.

    Streams with different ``stream_id`` come from independent children of
    the same ``SeedSequence``, so Monte Carlo blocks can be generated in any
    order (or in parallel) and still reduce to identical results.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.seed < 0 or self.stream_id < 0:
            raise DomainError("seed and stream_id must be non-negative")

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
            self._gen = np.random.Generator(np.random.PCG64(ss))
        return self._gen

    def child(self, *keys: int) -> "RngStream":
        """Derive a sub-stream; ``keys`` are folded into the stream id."""
        sid = self.stream_id
        for k in keys:
            sid = (sid * 1_000_003 + int(k) + 1) % (2**63)
        return RngStream(self.seed, sid)


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a numpy Generator, an int seed or None."""
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class SpectralEstimate:
    frequency_hz: float
    power: float
    method: Literal["fft-peak", "root-music"]


def q_function(x):
    """Gaussian tail probability P(N(0, 1) > x)."""
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise DomainError("q_function requires finite input")
    out = 0.5 * special.erfc(xa / np.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def inv_q_function(p):
    """Inverse of :func:`q_function` on the open interval (0, 1)."""
    pa = np.asarray(p, dtype=float)
    if not np.all((pa > 0.0) & (pa < 1.0)):
        raise DomainError("inv_q_function requires 0 < p < 1")
    # -ndtri(p) keeps full relative precision for small tail probabilities
    out = -special.ndtri(pa)
    return float(out) if out.ndim == 0 else out


def sample_nakagami(m: float, omega: float, rng, size=None):
    """Nakagami-m magnitudes as the square root of Gamma(m, omega/m) draws."""
    if not (m > 0 and omega > 0):
        raise DomainError("Nakagami parameters must be positive")
    g = as_generator(rng)
    return np.sqrt(g.gamma(shape=m, scale=omega / m, size=size))


def sample_rayleigh(sigma_r: float, rng, size=None):
    if not sigma_r > 0:
        raise DomainError("Rayleigh scale must be positive")
    return as_generator(rng).rayleigh(scale=sigma_r, size=size)


def fft_peak_frequency(samples, fs: float, zero_pad_factor: int = 1) -> SpectralEstimate:
    """Frequency of the largest spectral line, refined by parabolic interpolation.

    Parameters
    ----------
    samples : array_like of complex
        At least 16 samples.
    fs : float
        Sample rate in Hz.
    zero_pad_factor : int
        FFT length is ``len(samples) * zero_pad_factor``.

    Returns
    -------
    SpectralEstimate
        Signed frequency in ``[-fs/2, fs/2)`` and the tone power
        (squared amplitude) read from the peak.
    """
    x = np.asarray(samples, dtype=complex)
    n = x.size
    if n < 16:
        raise DomainError("fft_peak_frequency needs at least 16 samples")
    if int(zero_pad_factor) < 1:
        raise DomainError("zero_pad_factor must be >= 1")
    if not np.any(x):
        raise EstimationError("no spectral peak in an all-zero signal")

    nfft = n * int(zero_pad_factor)
    mag = np.abs(np.fft.fft(x, nfft))
    k = int(np.argmax(mag))
    a, b, c = mag[(k - 1) % nfft], mag[k], mag[(k + 1) % nfft]
    denom = a - 2.0 * b + c
    delta = 0.0 if denom == 0 else 0.5 * (a - c) / denom
    delta = float(np.clip(delta, -0.5, 0.5))
    peak = b - 0.25 * (a - c) * delta

    kf = k + delta
    if kf >= nfft / 2:
        kf -= nfft
    freq = kf * fs / nfft
    return SpectralEstimate(float(freq), float((peak / n) ** 2), "fft-peak")


def _autocorrelation(x: np.ndarray, order: int) -> np.ndarray:
    # forward-averaged sample covariance over sliding length-`order` snapshots
    snaps = np.lib.stride_tricks.sliding_window_view(x, order)
    return snaps.T @ snaps.conj() / snaps.shape[0]


def root_music_frequencies(samples, model_order: int, fs: float,
                           corr_order: int | None = None) -> list[SpectralEstimate]:
    """Root-MUSIC estimates of ``model_order`` complex tones.

    The noise subspace of a forward-averaged autocorrelation matrix of
    size ``corr_order`` defines a polynomial whose roots nearest the unit
    circle give the tone frequencies. ``corr_order`` defaults to
    ``max(2*model_order, min(len(samples)//4, 64))``.
    """
    x = np.asarray(samples, dtype=complex)
    p = int(model_order)
    if p < 1:
        raise DomainError("model_order must be >= 1")
    if x.size < 4 * p:
        raise DomainError("need at least 4*model_order samples")
    m = corr_order if corr_order is not None else max(2 * p, min(x.size // 4, 64))
    m = int(m)
    if m < 2 * p or m > x.size:
        raise DomainError("corr_order must lie in [2*model_order, len(samples)]")

    r = _autocorrelation(x, m)
    evals, evecs = np.linalg.eigh(r)
    if evals[-1] <= 0 or not np.all(np.isfinite(evals)):
        raise EstimationError("autocorrelation matrix is degenerate")

    noise = evecs[:, : m - p]
    c = noise @ noise.conj().T
    coeffs = np.array([np.trace(c, offset=k) for k in range(m - 1, -m, -1)])
    roots = np.roots(coeffs)
    # roots come in conjugate-reciprocal pairs; fold them inside the circle
    # and keep one per angle
    radius = np.abs(roots)
    folded = np.where(radius > 1.0, 1.0 / roots.conj(), roots)
    chosen = []
    for z in folded[np.argsort(1.0 - np.abs(folded))]:
        if all(abs(np.angle(z / prev)) > 1e-6 for prev in chosen):
            chosen.append(z)
        if len(chosen) == p:
            break
    if len(chosen) < p:
        raise EstimationError("could not isolate model_order distinct roots")

    n = np.arange(x.size)
    out = []
    for z in chosen:
        w = float(np.angle(z))
        amp = np.mean(x * np.exp(-1j * w * n))
        out.append(SpectralEstimate(w * fs / (2 * np.pi), float(abs(amp) ** 2), "root-music"))
    return sorted(out, key=lambda e: e.frequency_hz)
