"""Experiment configuration: defaults, JSON loading and validation."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .channel import SPEED_OF_LIGHT, LinkGeometry
from .errors import ConfigError
from .radar import RadarSettings

__all__ = ["ExperimentConfig", "load_config"]

WAVEFORMS = ("chirp", "sinusoid")
PSEUDO_WAVEFORMS = WAVEFORMS + ("both",)


@dataclass(frozen=True)
class ExperimentConfig:
    # link and channel (Table 1)
    fs: float = 28.8e6
    n_t: tuple[int, ...] = (4, 8, 16, 32)
    snr_grid_db: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0)
    k_db: float = 10.0
    bandwidth: float = 10e6
    f_c: float = 5e9
    h0: float = 780e3
    theta_e_deg: float = 60.0
    sigma_sf_db: float = 1.0
    a_zenith_db: float = 0.22
    l_s_db: float = 0.13
    sigma_r: float = 1.0
    m: float = 0.8
    omega: float = 1.0
    v: float = 1e5
    alpha_deg: float = 30.0  # listed in Table 1, used by no model equation
    r_range: tuple[float, float] = (500e3, 2500e3)
    v_range: tuple[float, float] = (7000.0, 8500.0)

    # simulator choices absent from Table 1
    n_r: int = 4
    cl_db: float = 0.0
    r_earth: float = 6.371e6
    pulse_T: float = 0.05
    p_fa: float = 1e-3
    trials: int = 100_000
    sense_trials: int = 200
    block_size: int = 10_000
    seed: int = 0
    waveform: str = "both"
    chirp_kind: str = "triangle_lfm"
    beat_method: str = "fft"
    n_fft: int = 4096
    zero_pad: int = 16
    music_order: int | None = None
    samples_per_symbol: int = 16
    sinusoid_freq: float = 1e6
    adaptive_weighting: bool = False
    doppler_rotation: bool = True
    ambiguity_T: float = 1e-4
    ambiguity_delays: int = 101
    ambiguity_dopplers: int = 101
    ambiguity_max_doppler: float | None = None

    def __post_init__(self):
        self.validate()

    # ------------------------------------------------------------------
    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(self.fs > 0, "fs must be positive")
        need(len(self.n_t) > 0, "n_t must list at least one antenna count")
        for n in self.n_t:
            need(isinstance(n, int) and n >= 2 and n & (n - 1) == 0,
                 f"N_t={n} is not a power of two >= 2")
        need(isinstance(self.n_r, int) and self.n_r >= 1, "n_r must be a positive integer")
        need(len(self.snr_grid_db) > 0, "snr_grid_db is empty")
        need(all(math.isfinite(s) for s in self.snr_grid_db), "snr_grid_db must be finite")
        need(0 < self.bandwidth < self.fs, "bandwidth must lie in (0, fs)")
        need(self.f_c > 0 and self.h0 > 0, "f_c and h0 must be positive")
        need(0 < self.theta_e_deg <= 90, "theta_e_deg must lie in (0, 90]")
        need(self.sigma_sf_db >= 0, "sigma_sf_db must be non-negative")
        need(self.sigma_r > 0 and self.m > 0 and self.omega > 0, "fading parameters must be positive")
        need(len(self.r_range) == 2 and 0 < self.r_range[0] <= self.r_range[1], "bad r_range")
        need(len(self.v_range) == 2 and self.v_range[0] <= self.v_range[1], "bad v_range")
        need(self.v_range[0] > 0 or self.v_range[1] < 0,
             "v_range must exclude zero (accuracy is relative to the true velocity)")
        need(self.pulse_T > 0, "pulse_T must be positive")
        need(4 * self.r_range[1] / SPEED_OF_LIGHT < self.pulse_T,
             "pulse_T too short for the echo of the farthest target")
        need(0 < self.p_fa < 1, "p_fa must lie in (0, 1)")
        need(isinstance(self.trials, int) and self.trials >= 1, "trials must be a positive integer")
        need(isinstance(self.sense_trials, int) and self.sense_trials >= 1,
             "sense_trials must be a positive integer")
        need(isinstance(self.block_size, int) and self.block_size >= 1, "block_size must be positive")
        need(isinstance(self.seed, int) and 0 <= self.seed < 2**64, "seed must be a 64-bit unsigned integer")
        need(self.waveform in PSEUDO_WAVEFORMS, f"waveform must be one of {PSEUDO_WAVEFORMS}")
        need(self.chirp_kind in ("triangle_lfm", "v_lfm"), "chirp_kind must be triangle_lfm or v_lfm")
        need(self.beat_method in ("fft", "music"), "beat_method must be fft or music")
        need(isinstance(self.n_fft, int) and 16 <= self.n_fft <= round(self.fs * self.pulse_T),
             "n_fft must lie between 16 and the sweep length")
        need(isinstance(self.zero_pad, int) and self.zero_pad >= 1, "zero_pad must be >= 1")
        need(isinstance(self.samples_per_symbol, int) and self.samples_per_symbol >= 2
             and self.samples_per_symbol % 2 == 0, "samples_per_symbol must be an even integer >= 2")
        need(abs(self.sinusoid_freq) < self.fs / 2, "sinusoid_freq must be below fs/2")
        need(self.ambiguity_T > 0, "ambiguity_T must be positive")
        need(self.ambiguity_delays >= 1 and self.ambiguity_dopplers >= 1, "ambiguity grid is empty")

    # ------------------------------------------------------------------
    @property
    def k_linear(self) -> float:
        return 10.0 ** (self.k_db / 10.0)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.f_c

    @property
    def waveforms(self) -> tuple[str, ...]:
        return WAVEFORMS if self.waveform == "both" else (self.waveform,)

    def geometry(self) -> LinkGeometry:
        return LinkGeometry(self.h0, math.radians(self.theta_e_deg), self.f_c, self.v, self.r_earth)

    def radar_settings(self) -> RadarSettings:
        return RadarSettings(window=self.n_fft, zero_pad=self.zero_pad, method=self.beat_method,
                             p_fa=self.p_fa, corr_order=self.music_order)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def replace(self, **changes) -> "ExperimentConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        try:
            return dataclasses.replace(self, **changes)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for k, v in data.items():
            if isinstance(v, list):
                v = tuple(v)
            kwargs[k] = v
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return ExperimentConfig.from_dict(data)
