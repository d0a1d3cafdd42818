"""
Monte Carlo harness: BER sweeps, sensing-accuracy sweeps, link budget and
ambiguity reports, plus their CSV/JSON writers.

Every random draw comes from an :class:`~sskisac.numerics.RngStream` keyed by
the seed and the position of the work item (antenna count, SNR index, trial
block), so results do not depend on evaluation order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channel import (
    SPEED_OF_LIGHT,
    complex_noise,
    doppler_shift,
    sample_channel_matrix,
    slant_distance,
    time_varying_response,
    total_path_loss,
)
from .config import ExperimentConfig
from .numerics import RngStream
from .radar import RadarScene, sense
from .receiver import ml_detect_batch
from .ssk import bits_per_symbol
from .waveforms import (
    AmbiguitySurface,
    SampledWaveform,
    ambiguity,
    gen_sinusoid,
    gen_triangle_lfm,
    gen_v_lfm,
)

__all__ = [
    "BerPoint",
    "BerCurve",
    "AccuracyPoint",
    "AccuracyCurve",
    "SceneRecord",
    "symbol_waveform",
    "radar_waveform",
    "run_ber_point",
    "run_ber_sweep",
    "run_sensing_sweep",
    "run_link_budget",
    "run_ambiguity",
    "ber_csv",
    "sense_csv",
    "scenes_csv",
    "ambiguity_csv",
    "write_outputs",
]

_BER, _SENSE, _LINK = 1, 2, 3


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    ber: float
    trials: int
    std_err: float
    symbol_errors: int = 0
    bit_errors: int = 0

    @property
    def ser(self) -> float:
        return self.symbol_errors / self.trials


@dataclass(frozen=True)
class BerCurve:
    n_t: int
    waveform: str
    points: list[BerPoint]


@dataclass(frozen=True)
class AccuracyPoint:
    snr_db: float
    range_acc: float | None
    vel_acc: float
    det_rate: float
    trials: int
    range_acc_se: float | None = None
    vel_acc_se: float = 0.0


@dataclass(frozen=True)
class AccuracyCurve:
    waveform: str
    points: list[AccuracyPoint]
    scenes: list["SceneRecord"] = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class SceneRecord:
    R: float
    V_r: float
    snr_db: float
    R_hat: float | None
    V_hat: float
    detected: bool
    range_acc: float | None
    vel_acc: float
    method: str


# ----------------------------------------------------------------------------
# waveforms used by the sweeps

def symbol_waveform(cfg: ExperimentConfig, kind: str) -> np.ndarray:
    """Unit-energy per-symbol transmit samples for ``"chirp"`` or ``"sinusoid"``."""
    s = cfg.samples_per_symbol
    if kind == "chirp":
        gen = gen_triangle_lfm if cfg.chirp_kind == "triangle_lfm" else gen_v_lfm
        x = gen(cfg.bandwidth, s / (2 * cfg.fs), cfg.fs).samples
    elif kind == "sinusoid":
        x = gen_sinusoid(cfg.sinusoid_freq, 1.0, s / cfg.fs, cfg.fs).samples
    else:
        raise ValueError(f"unknown waveform {kind!r}")
    return x / np.sqrt(np.sum(np.abs(x) ** 2))


def radar_waveform(cfg: ExperimentConfig, kind: str, T: float | None = None) -> SampledWaveform:
    T = cfg.pulse_T if T is None else T
    if kind == "chirp":
        gen = gen_triangle_lfm if cfg.chirp_kind == "triangle_lfm" else gen_v_lfm
        return gen(cfg.bandwidth, T, cfg.fs)
    if kind == "sinusoid":
        return gen_sinusoid(cfg.sinusoid_freq, 1.0, T, cfg.fs)
    raise ValueError(f"unknown waveform {kind!r}")


# ----------------------------------------------------------------------------
# communication

def _ber_block(cfg: ExperimentConfig, n_t: int, x: np.ndarray, n0: float,
               stream: RngStream, first_trial: int, size: int) -> tuple[int, int]:
    g = stream.generator
    k = g.integers(0, n_t, size)
    H = sample_channel_matrix(n_t, cfg.n_r, cfg.k_linear, cfg.m, cfg.omega, cfg.sigma_r, g, size=size)
    if cfg.doppler_rotation:
        tau = slant_distance(cfg.geometry()) / SPEED_OF_LIGHT
        t_slot = (first_trial + np.arange(size)) * (x.size / cfg.fs)
        H = time_varying_response(H, cfg.f_c, tau, t_slot[:, None, None])
    # per-sample transmission of the active column, then matched filtering
    # against the unit-energy symbol waveform
    active = H[np.arange(size), :, k]
    rx = active[:, :, None] * x[None, None, :]
    if n0 > 0:
        rx = rx + complex_noise(n0, rx.shape, g)
    y = rx @ x.conj()
    k_hat = ml_detect_batch(y, H, 1.0, weighted=cfg.adaptive_weighting)
    diff = np.bitwise_xor(k, k_hat)
    bit_errors = int(np.bitwise_count(diff).sum())
    return bit_errors, int(np.count_nonzero(diff))


def run_ber_point(cfg: ExperimentConfig, n_t: int, waveform: str, snr_db: float,
                  snr_index: int = 0) -> BerPoint:
    """BER at one SNR with ``N0 = 10^(-SNR/10)`` and unit composite link gain."""
    bps = bits_per_symbol(n_t)
    x = symbol_waveform(cfg, waveform)
    n0 = 10.0 ** (-snr_db / 10.0)
    base = RngStream(cfg.seed)
    bit_err = sym_err = 0
    done, block = 0, 0
    while done < cfg.trials:
        size = min(cfg.block_size, cfg.trials - done)
        # waveform is deliberately not part of the key: both waveforms see
        # the same bits, channels and noise samples
        stream = base.child(_BER, n_t, snr_index, block)
        b, s = _ber_block(cfg, n_t, x, n0, stream, done, size)
        bit_err += b
        sym_err += s
        done += size
        block += 1
    ber = bit_err / (cfg.trials * bps)
    se = math.sqrt(ber * (1 - ber) / (cfg.trials * bps))
    return BerPoint(float(snr_db), ber, cfg.trials, se, sym_err, bit_err)


def run_ber_sweep(cfg: ExperimentConfig) -> list[BerCurve]:
    curves = []
    for n_t in cfg.n_t:
        for wf in cfg.waveforms:
            pts = [run_ber_point(cfg, n_t, wf, snr, i) for i, snr in enumerate(cfg.snr_grid_db)]
            curves.append(BerCurve(n_t, wf, pts))
    return curves


# ----------------------------------------------------------------------------
# sensing

def _mean_se(values: list[float]) -> tuple[float, float]:
    a = np.asarray(values, dtype=float)
    se = float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else 0.0
    return float(a.mean()), se


def run_sensing_sweep(cfg: ExperimentConfig, snr_grid_db=None) -> list[AccuracyCurve]:
    """Average range/velocity accuracy and detection rate per waveform and SNR.

    Each trial draws ``(R, V_r)`` uniformly from the configured ranges on its
    own stream; the same draws are reused for every waveform.
    """
    grid = cfg.snr_grid_db if snr_grid_db is None else tuple(snr_grid_db)
    settings = cfg.radar_settings()
    base = RngStream(cfg.seed)
    curves = []
    for wf_name in cfg.waveforms:
        wf = radar_waveform(cfg, wf_name)
        points, scenes = [], []
        for i, snr in enumerate(grid):
            r_acc, v_acc, det = [], [], []
            for j in range(cfg.sense_trials):
                g = base.child(_SENSE, i, j).generator
                R = float(g.uniform(*cfg.r_range))
                V = float(g.uniform(*cfg.v_range))
                est = sense(RadarScene(R, V, float(snr), wf, cfg.wavelength), settings, g)
                v_acc.append(est.velocity_accuracy_pct)
                det.append(est.detected)
                if est.range_accuracy_pct is not None:
                    r_acc.append(est.range_accuracy_pct)
                scenes.append(SceneRecord(R, V, float(snr), est.R_hat, est.V_hat, est.detected,
                                          est.range_accuracy_pct, est.velocity_accuracy_pct,
                                          cfg.beat_method))
            vm, vse = _mean_se(v_acc)
            rm, rse = _mean_se(r_acc) if r_acc else (None, None)
            points.append(AccuracyPoint(float(snr), rm, vm, float(np.mean(det)),
                                        cfg.sense_trials, rse, vse))
        curves.append(AccuracyCurve(wf_name, points, scenes))
    return curves


# ----------------------------------------------------------------------------
# reports

def run_link_budget(cfg: ExperimentConfig) -> dict:
    geom = cfg.geometry()
    rng = RngStream(cfg.seed).child(_LINK)
    budget = total_path_loss(geom, cfg.a_zenith_db, cfg.l_s_db, cfg.sigma_sf_db, cfg.cl_db, rng)
    report = budget.as_dict()
    report["d_m"] = slant_distance(geom)
    report["f_d_hz"] = doppler_shift(geom)
    return report


def run_ambiguity(cfg: ExperimentConfig, kind: str | None = None) -> AmbiguitySurface:
    """Ambiguity surface of the configured waveform over delay ``±T`` and Doppler ``±max``.

    The pulse is regenerated with sweep time ``ambiguity_T`` to keep the
    direct-sum evaluation tractable.
    """
    kind = kind or cfg.waveforms[0]
    wf = radar_waveform(cfg, kind, cfg.ambiguity_T)
    fd_max = cfg.ambiguity_max_doppler if cfg.ambiguity_max_doppler is not None else cfg.bandwidth
    fd_max = min(fd_max, cfg.fs / 2)
    taus = np.linspace(-wf.sweep_time, wf.sweep_time, cfg.ambiguity_delays)
    fds = np.linspace(-fd_max, fd_max, cfg.ambiguity_dopplers)
    return ambiguity(wf, taus, fds)


# ----------------------------------------------------------------------------
# writers

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _header(cfg: ExperimentConfig, **extra) -> str:
    lines = [f"# sskisac {__version__}", f"# config_hash: {cfg.digest()}", f"# seed: {cfg.seed}"]
    for k, v in extra.items():
        lines.append(f"# {k}: {v}")
    lines.append("# n_r is a simulator choice (no receive antenna count is given in Table 1)")
    lines.append("# config: " + json.dumps(cfg.to_dict(), sort_keys=True))
    return "\n".join(lines) + "\n"


def _table(cfg: ExperimentConfig, columns: list[str], rows, **extra) -> str:
    buf = io.StringIO()
    buf.write(_header(cfg, **extra))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def ber_csv(cfg: ExperimentConfig, curve: BerCurve) -> str:
    rows = [(p.snr_db, p.ber, p.trials, p.std_err) for p in curve.points]
    return _table(cfg, ["snr_db", "ber", "trials", "std_err"], rows,
                  n_t=curve.n_t, waveform=curve.waveform)


def sense_csv(cfg: ExperimentConfig, curve: AccuracyCurve) -> str:
    rows = [(p.snr_db, p.range_acc, p.vel_acc, p.det_rate) for p in curve.points]
    return _table(cfg, ["snr_db", "range_acc", "vel_acc", "det_rate"], rows,
                  waveform=curve.waveform, method=cfg.beat_method)


def scenes_csv(cfg: ExperimentConfig, curve: AccuracyCurve) -> str:
    rows = [(s.R, s.V_r, s.snr_db, s.R_hat, s.V_hat, s.detected, s.range_acc, s.vel_acc, s.method)
            for s in curve.scenes]
    return _table(cfg, ["R", "V_r", "snr_db", "R_hat", "V_hat", "detected",
                        "range_acc", "vel_acc", "method"], rows, waveform=curve.waveform)


def ambiguity_csv(cfg: ExperimentConfig, surface: AmbiguitySurface, kind: str) -> str:
    rows = ((t, f, surface.values[i, j])
            for i, t in enumerate(surface.delays) for j, f in enumerate(surface.dopplers))
    return _table(cfg, ["tau_s", "fd_hz", "chi2"], rows, waveform=kind)


def write_outputs(out_dir, files: dict[str, str]) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in files.items():
        p = out / name
        p.write_text(text)
        paths.append(p)
    return paths
