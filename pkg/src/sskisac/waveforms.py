"""
Transmit waveform generation and the ambiguity function.

All waveforms are complex baseband (I/Q) sequences. Chirps sweep
symmetrically about 0 Hz: the up-chirp runs from -ΔF/2 to +ΔF/2. The
triangle LFM is an up-chirp followed by a down-chirp, each of duration
``T``, scaled to unit energy; the V-LFM is its complex conjugate.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import AliasingError, DomainError

__all__ = [
    "SampledWaveform",
    "AmbiguitySurface",
    "gen_up_chirp",
    "gen_down_chirp",
    "gen_sinusoid",
    "gen_triangle_lfm",
    "gen_v_lfm",
    "ambiguity",
    "write_waveform_csv",
]

WaveformKind = Literal["up_chirp", "down_chirp", "triangle_lfm", "v_lfm", "sinusoid"]

# direction of each half-segment for the composite pulses
SEGMENTS = {
    "triangle_lfm": ("up", "down"),
    "v_lfm": ("down", "up"),
}


@dataclass(frozen=True)
class SampledWaveform:
    samples: np.ndarray
    fs: float
    duration: float
    kind: WaveformKind
    f0: float = 0.0
    bandwidth: float = 0.0
    amplitude: float = 1.0

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.n) / self.fs

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) / self.fs)

    @property
    def sweep_time(self) -> float:
        """Duration of one linear sweep (half the pulse for composite kinds)."""
        return self.duration / 2 if self.kind in SEGMENTS else self.duration

    @property
    def chirp_rate(self) -> float:
        return self.bandwidth / self.sweep_time

    @property
    def segments(self) -> tuple[str, ...]:
        return SEGMENTS.get(self.kind, ())


@dataclass(frozen=True)
class AmbiguitySurface:
    delays: np.ndarray
    dopplers: np.ndarray
    values: np.ndarray  # shape (len(delays), len(dopplers))

    def at(self, tau: float, fd: float) -> float:
        i = int(np.argmin(np.abs(self.delays - tau)))
        j = int(np.argmin(np.abs(self.dopplers - fd)))
        return float(self.values[i, j])


def _check(bandwidth: float, T: float, fs: float) -> int:
    if not T > 0:
        raise DomainError("pulse duration must be positive")
    if not fs > 0:
        raise DomainError("sample rate must be positive")
    if bandwidth < 0:
        raise DomainError("bandwidth must be non-negative")
    if bandwidth >= fs:
        raise AliasingError(f"bandwidth {bandwidth:g} Hz is not below fs={fs:g} Hz")
    n = int(round(fs * T))
    if n < 1:
        raise DomainError("pulse shorter than one sample")
    return n


def _sweep(bandwidth: float, T: float, fs: float, direction: int, f0: float = 0.0) -> np.ndarray:
    n = _check(bandwidth, T, fs)
    t = np.arange(n) / fs
    mu = bandwidth / T
    phase = 2 * np.pi * (f0 * t + direction * (-0.5 * bandwidth * t + 0.5 * mu * t * t))
    return np.exp(1j * phase)


def gen_up_chirp(bandwidth: float, T: float, fs: float, A: float = 1.0,
                 f0: float = 0.0) -> SampledWaveform:
    """Linear sweep from ``f0 - ΔF/2`` up to ``f0 + ΔF/2`` over ``[0, T)``."""
    x = A * _sweep(bandwidth, T, fs, +1, f0)
    return SampledWaveform(x, fs, T, "up_chirp", f0, bandwidth, A)


def gen_down_chirp(bandwidth: float, T: float, fs: float, A: float = 1.0,
                   f0: float = 0.0) -> SampledWaveform:
    """Linear sweep from ``f0 + ΔF/2`` down to ``f0 - ΔF/2`` over ``[0, T)``."""
    x = A * _sweep(bandwidth, T, fs, -1, f0)
    return SampledWaveform(x, fs, T, "down_chirp", f0, bandwidth, A)


def gen_sinusoid(f: float, A: float, T: float, fs: float) -> SampledWaveform:
    """Analytic tone ``A exp(j 2π f t)``."""
    if abs(f) >= fs / 2:
        raise AliasingError(f"tone {f:g} Hz is not below fs/2={fs / 2:g} Hz")
    n = _check(0.0, T, fs)
    t = np.arange(n) / fs
    return SampledWaveform(A * np.exp(2j * np.pi * f * t), fs, T, "sinusoid", f, 0.0, A)


def _composite(bandwidth: float, T: float, fs: float, kind: WaveformKind) -> SampledWaveform:
    amp = np.sqrt(1.0 / (2 * T))
    up = _sweep(bandwidth, T, fs, +1)
    halves = [up if d == "up" else up.conj() for d in SEGMENTS[kind]]
    return SampledWaveform(amp * np.concatenate(halves), fs, 2 * T, kind, 0.0, bandwidth, amp)


def gen_triangle_lfm(bandwidth: float, T: float, fs: float) -> SampledWaveform:
    """Unit-energy up-sweep then down-sweep, total duration ``2T``."""
    return _composite(bandwidth, T, fs, "triangle_lfm")


def gen_v_lfm(bandwidth: float, T: float, fs: float) -> SampledWaveform:
    """Unit-energy down-sweep then up-sweep, total duration ``2T``."""
    return _composite(bandwidth, T, fs, "v_lfm")


def ambiguity(waveform: SampledWaveform, tau_grid, fd_grid) -> AmbiguitySurface:
    """Normalized ambiguity surface ``|χ(τ, f_d)|²``.

    The integral is a Riemann sum at spacing ``1/fs`` with delays rounded
    to whole samples. Values are divided by the squared waveform energy, so
    the origin evaluates to 1.
    """
    taus = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    fds = np.atleast_1d(np.asarray(fd_grid, dtype=float))
    if taus.size == 0 or fds.size == 0:
        raise DomainError("ambiguity grids must be non-empty")
    fs = waveform.fs
    if np.any(np.abs(taus) > waveform.duration) or np.any(np.abs(fds) > fs / 2):
        raise DomainError("grid exceeds ±duration or ±fs/2")
    x = waveform.samples
    n = x.size
    energy = waveform.energy
    if energy <= 0:
        raise DomainError("zero-energy waveform")

    shifts = np.rint(taus * fs).astype(int)
    out = np.zeros((taus.size, fds.size))
    for i, s in enumerate(shifts):
        lo, hi = max(0, s), min(n, n + s)
        if hi <= lo:
            continue
        idx = np.arange(lo, hi)
        prod = x[lo:hi] * np.conj(x[lo - s:hi - s])
        kernel = np.exp(-2j * np.pi * np.outer(idx / fs, fds))
        chi = prod @ kernel / fs
        out[i] = np.abs(chi) ** 2 / energy**2
    return AmbiguitySurface(shifts / fs, fds, out)


def write_waveform_csv(waveform: SampledWaveform, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "re", "im"])
        for t, s in zip(waveform.t, waveform.samples):
            w.writerow([repr(float(t)), repr(float(s.real)), repr(float(s.imag))])
    return path
