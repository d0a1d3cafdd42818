"""
Co-located FMCW sensing chain.

A point target at range ``R`` closing at ``V_r`` returns a delayed,
Doppler-shifted copy of the periodically transmitted pulse. Dechirping each
sweep against the matching reference collapses the echo into a beat tone;
the up- and down-sweep beats combine into unambiguous range and velocity.
The sinusoid senses velocity only, through its Doppler tone.

Signal level convention: the echo has the transmit waveform's amplitude and
``snr_db`` is the per-sample echo-to-noise power ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SPEED_OF_LIGHT
from .errors import DomainError, EstimationError, FramingError
from .numerics import as_generator, fft_peak_frequency, inv_q_function, root_music_frequencies
from .waveforms import SampledWaveform

__all__ = [
    "RadarScene",
    "RadarEstimate",
    "DetectionThreshold",
    "RadarSettings",
    "round_trip_delay",
    "beat_frequencies",
    "synthesize_echo",
    "dechirp",
    "estimate_beats",
    "estimate_range",
    "estimate_velocity",
    "estimate_velocity_cw",
    "np_threshold",
    "peak_statistic",
    "accuracy_percent",
    "sense",
]


@dataclass(frozen=True)
class RadarScene:
    R: float
    V_r: float
    snr_db: float
    waveform: SampledWaveform
    wavelength: float = SPEED_OF_LIGHT / 5e9

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("target range must be positive")
        if round_trip_delay(self.R) >= self.waveform.sweep_time:
            raise DomainError(
                f"echo delay {round_trip_delay(self.R):.4g} s does not fit in the "
                f"{self.waveform.sweep_time:.4g} s sweep")

    @property
    def doppler(self) -> float:
        return 2.0 * self.V_r / self.wavelength

    @property
    def noise_power(self) -> float:
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 0.0
        return _ref_power(self.waveform) * 10.0 ** (-self.snr_db / 10.0)


@dataclass(frozen=True)
class RadarEstimate:
    f_beat_up: float | None
    f_beat_down: float | None
    R_hat: float | None
    V_hat: float
    detected: bool
    range_accuracy_pct: float | None
    velocity_accuracy_pct: float
    statistic: float = float("nan")


@dataclass(frozen=True)
class DetectionThreshold:
    P_FA: float
    P_n: float
    gamma_np: float
    threshold: float


@dataclass(frozen=True)
class RadarSettings:
    """Receiver processing choices shared by every scene of a sweep.

    ``window`` is the number of samples analyzed at the end of each sweep
    (``None`` analyzes whole sweeps).
    """

    window: int | None = 4096
    zero_pad: int = 16
    method: str = "fft"
    p_fa: float = 1e-3
    corr_order: int | None = None


def round_trip_delay(R: float) -> float:
    """Effective dechirp delay ``4R/c`` matching the beat-frequency convention."""
    return 4.0 * R / SPEED_OF_LIGHT


def beat_frequencies(R: float, V_r: float, bandwidth: float, T: float,
                     wavelength: float) -> tuple[float, float]:
    """Closed-form ``(f_up, f_down)`` for a point target."""
    range_term = bandwidth / T * round_trip_delay(R)
    doppler = 2.0 * V_r / wavelength
    return range_term - doppler, range_term + doppler


def _evaluate(wf: SampledWaveform, t: np.ndarray) -> np.ndarray:
    """Continuous-time value of the periodically repeated waveform."""
    if wf.kind == "sinusoid":
        return wf.amplitude * np.exp(2j * np.pi * wf.f0 * t)
    T = wf.sweep_time
    mu = wf.chirp_rate
    bw = wf.bandwidth
    tp = np.mod(t, wf.duration)
    if wf.kind in ("up_chirp", "down_chirp"):
        seg = np.zeros(t.shape, dtype=int)
        dirs = np.array([1.0 if wf.kind == "up_chirp" else -1.0])
    else:
        seg = np.minimum((tp // T).astype(int), 1)
        dirs = np.array([1.0 if d == "up" else -1.0 for d in wf.segments])
    u = tp - seg * T
    d = dirs[seg]
    phase = 2 * np.pi * (wf.f0 * u + d * (-0.5 * bw * u + 0.5 * mu * u * u))
    return wf.amplitude * np.exp(1j * phase)


def _segment_slices(wf: SampledWaveform, window: int | None) -> list[slice]:
    if wf.segments:
        half = wf.n // 2
        bounds = [(0, half), (half, wf.n)]
    else:
        bounds = [(0, wf.n)]
    out = []
    for lo, hi in bounds:
        if window is not None:
            if window > hi - lo:
                raise FramingError("analysis window longer than the sweep")
            lo = hi - window
        out.append(slice(lo, hi))
    return out


def synthesize_echo(scene: RadarScene, fs: float | None = None, rng=None,
                    window: int | None = None) -> np.ndarray:
    """Echo of a continuous transmission of ``scene.waveform`` plus white noise.

    With ``window`` set, only the last ``window`` samples of each sweep are
    produced (concatenated in sweep order); otherwise the whole pulse.
    """
    wf = scene.waveform
    if fs is not None and not math.isclose(fs, wf.fs):
        raise DomainError("fs does not match the scene waveform")
    idx = np.concatenate([np.arange(s.start, s.stop) for s in _segment_slices(wf, window)])
    t = idx / wf.fs
    tau = round_trip_delay(scene.R)
    phi = -2 * np.pi * 2.0 * scene.R / scene.wavelength
    echo = _evaluate(wf, t - tau) * np.exp(1j * (2 * np.pi * scene.doppler * t + phi))
    p_n = scene.noise_power
    if p_n > 0:
        g = as_generator(rng)
        echo = echo + math.sqrt(p_n / 2) * (g.standard_normal(t.size) + 1j * g.standard_normal(t.size))
    return echo


def dechirp(rx, reference: SampledWaveform, segment: str | None = None,
            window: int | None = None) -> np.ndarray:
    """Mix ``rx`` with the conjugate of the reference sweep it is aligned to.

    ``segment`` selects the ``"up"`` or ``"down"`` half of a composite pulse;
    ``window`` restricts the reference to the tail of that sweep.
    """
    rx = np.asarray(rx, dtype=complex)
    slices = _segment_slices(reference, window)
    if segment is None:
        if len(slices) != 1:
            raise DomainError("composite reference needs a segment")
        sl = slices[0]
    else:
        if segment not in reference.segments:
            raise DomainError(f"{reference.kind} has no {segment!r} segment")
        sl = slices[reference.segments.index(segment)]
    ref = reference.samples[sl]
    if rx.shape != ref.shape:
        raise FramingError(f"received {rx.size} samples, reference segment has {ref.size}")
    return rx * ref.conj()


def _tone(x: np.ndarray, fs: float, method: str, zero_pad: int, corr_order) -> float:
    if method == "fft":
        return fft_peak_frequency(x, fs, zero_pad).frequency_hz
    if method == "music":
        return root_music_frequencies(x, 1, fs, corr_order)[0].frequency_hz
    raise DomainError(f"unknown beat method {method!r}")


def _split(echo: np.ndarray, wf: SampledWaveform, window: int | None) -> list[np.ndarray]:
    slices = _segment_slices(wf, window)
    expected = sum(s.stop - s.start for s in slices)
    if echo.size != expected:
        raise FramingError(f"echo has {echo.size} samples, expected {expected}")
    out, pos = [], 0
    for s in slices:
        n = s.stop - s.start
        out.append(echo[pos:pos + n])
        pos += n
    return out


def estimate_beats(echo, waveform: SampledWaveform, fs: float | None = None,
                   method: str = "fft", window: int | None = None, zero_pad: int = 16,
                   corr_order: int | None = None,
                   threshold: DetectionThreshold | None = None) -> tuple[float, float]:
    """Beat-frequency magnitudes ``(f_up, f_down)`` from a composite-pulse echo.

    Each sweep is dechirped against its own reference and one tone is
    estimated per sweep. When ``threshold`` is given, an echo whose peak
    statistic does not clear it raises :class:`EstimationError`.
    """
    if not waveform.segments:
        raise DomainError("beat pairs need a triangle or V-LFM waveform")
    fs = waveform.fs if fs is None else fs
    echo = np.asarray(echo, dtype=complex)
    mixed = [dechirp(part, waveform, seg, window)
             for part, seg in zip(_split(echo, waveform, window), waveform.segments)]
    if threshold is not None and not _passes(mixed, threshold, _ref_power(waveform)):
        raise EstimationError("no beat tone above the detection threshold")
    beats = {seg: abs(_tone(m, fs, method, zero_pad, corr_order))
             for m, seg in zip(mixed, waveform.segments)}
    return beats["up"], beats["down"]


def estimate_range(f_up: float, f_down: float, T: float, bandwidth: float) -> float:
    if f_up < 0 or f_down < 0:
        raise DomainError("beat frequencies are magnitudes")
    return T * SPEED_OF_LIGHT / (8.0 * bandwidth) * (f_down + f_up)


def estimate_velocity(f_up: float, f_down: float, wavelength: float) -> float:
    """Radial velocity, positive for a closing target."""
    return wavelength / 4.0 * (f_down - f_up)


def estimate_velocity_cw(echo, f: float, fs: float, wavelength: float,
                         zero_pad: int = 16, method: str = "fft",
                         corr_order: int | None = None,
                         threshold: DetectionThreshold | None = None) -> float:
    """Velocity from the Doppler tone left after mixing with the transmit tone."""
    echo = np.asarray(echo, dtype=complex)
    ref = np.exp(2j * np.pi * f * np.arange(echo.size) / fs)
    mixed = echo * ref.conj()
    if threshold is not None and not _passes([mixed], threshold):
        raise EstimationError("no Doppler tone above the detection threshold")
    return _tone(mixed, fs, method, zero_pad, corr_order) * wavelength / 2.0


def np_threshold(P_n: float, P_FA: float) -> DetectionThreshold:
    """Neyman-Pearson threshold ``P_n * gamma`` with ``gamma = Q^-1(1 - P_FA)``.

    ``gamma`` is the lower ``P_FA`` quantile of a standard normal. It is
    compared against the negated peak statistic, see :func:`peak_statistic`.
    """
    if not P_n > 0:
        raise DomainError("noise power must be positive")
    if not 0 < P_FA < 1:
        raise DomainError("P_FA must lie in (0, 1)")
    gamma = inv_q_function(1.0 - P_FA)
    return DetectionThreshold(P_FA, P_n, gamma, P_n * gamma)


def peak_statistic(mixed_segments, noise_power: float) -> float:
    """Gaussianized score of the largest periodogram bin.

    Bins of the unpadded DFT are normalized by ``len * noise_power``; under
    noise only they are independent unit exponentials. The probability that
    the largest of them exceeds the observed peak is mapped through
    ``Q^-1``, so the score is standard normal without a target and grows
    with target strength.
    """
    if not noise_power > 0:
        raise DomainError("noise power must be positive")
    peak, nbins = 0.0, 0
    for seg in mixed_segments:
        seg = np.asarray(seg)
        spec = np.abs(np.fft.fft(seg)) ** 2 / (seg.size * noise_power)
        peak = max(peak, float(spec.max()))
        nbins += seg.size
    # P(max of nbins unit exponentials > peak)
    p = -math.expm1(nbins * math.log1p(-math.exp(-peak))) if peak > 0 else 1.0
    if p <= 0.0:
        return math.inf
    if p >= 1.0:
        return -math.inf
    return inv_q_function(p)


def _ref_power(wf: SampledWaveform) -> float:
    # every generated waveform is constant-modulus
    return float(wf.amplitude) ** 2


def _passes(mixed, threshold: DetectionThreshold, ref_power: float = 1.0) -> bool:
    # mixing scales the echo noise by the reference power
    z = peak_statistic(mixed, threshold.P_n * ref_power)
    # noise-only scores satisfy -z < gamma with probability P_FA
    return -z * threshold.P_n < threshold.threshold


def accuracy_percent(true_value: float, estimate: float) -> float:
    if true_value == 0:
        raise DomainError("accuracy is undefined for a zero true value")
    raw = 100.0 - abs(true_value - estimate) / abs(true_value) * 100.0
    return max(0.0, min(100.0, raw))


def sense(scene: RadarScene, settings: RadarSettings | None = None, rng=None) -> RadarEstimate:
    """Synthesize, dechirp, estimate, threshold and score one scene."""
    cfg = settings or RadarSettings()
    wf = scene.waveform
    echo = synthesize_echo(scene, rng=rng, window=cfg.window)
    p_n = scene.noise_power

    if wf.segments:
        parts = _split(echo, wf, cfg.window)
        mixed = [dechirp(p, wf, s, cfg.window) for p, s in zip(parts, wf.segments)]
    else:
        mixed = [echo * np.exp(2j * np.pi * wf.f0 * np.arange(echo.size) / wf.fs).conj()]

    if p_n > 0:
        ref_power = _ref_power(wf) if wf.segments else 1.0
        z = peak_statistic(mixed, p_n * ref_power)
        thr = np_threshold(p_n, cfg.p_fa)
        detected = -z * thr.P_n < thr.threshold
    else:
        z, detected = math.inf, bool(np.any(echo))

    if wf.segments:
        beats = {s: abs(_tone(m, wf.fs, cfg.method, cfg.zero_pad, cfg.corr_order))
                 for m, s in zip(mixed, wf.segments)}
        f_up, f_down = beats["up"], beats["down"]
        R_hat = estimate_range(f_up, f_down, wf.sweep_time, wf.bandwidth)
        V_hat = estimate_velocity(f_up, f_down, scene.wavelength)
        r_acc = accuracy_percent(scene.R, R_hat)
    else:
        f_up = f_down = R_hat = r_acc = None
        V_hat = _tone(mixed[0], wf.fs, cfg.method, cfg.zero_pad, cfg.corr_order) * scene.wavelength / 2
    return RadarEstimate(f_up, f_down, R_hat, V_hat, bool(detected), r_acc,
                         accuracy_percent(scene.V_r, V_hat), z)
