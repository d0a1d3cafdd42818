"""
Satellite-to-ground link model.

Geometry and the deterministic loss budget, shadowed-Rician small-scale
fading, Doppler, and the received-signal equation ``y = sqrt(Es PL) H v + n``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .numerics import as_generator, sample_nakagami, sample_rayleigh

SPEED_OF_LIGHT = 3e8
EARTH_RADIUS = 6.371e6

__all__ = [
    "SPEED_OF_LIGHT",
    "EARTH_RADIUS",
    "LinkGeometry",
    "LinkBudget",
    "ChannelRealization",
    "slant_distance",
    "fspl_db",
    "gaseous_loss_db",
    "total_path_loss",
    "doppler_shift",
    "sample_channel_matrix",
    "apply_channel",
    "symbol_energy",
    "instantaneous_snr",
    "time_varying_response",
    "db_to_linear",
]


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


@dataclass(frozen=True)
class LinkGeometry:
    h0: float
    theta_e: float  # radians
    f_c: float
    v: float = 0.0
    r_earth: float = EARTH_RADIUS

    def __post_init__(self):
        if not self.h0 > 0:
            raise DomainError("altitude must be positive")
        if not 0 < self.theta_e <= math.pi / 2 + 1e-12:
            raise DomainError("elevation must lie in (0, pi/2]")


@dataclass(frozen=True)
class LinkBudget:
    fspl_db: float
    sf_db: float
    cl_db: float
    l_b_db: float
    l_g_db: float
    l_s_db: float
    pl_sg_db: float
    pl_sg_linear: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ChannelRealization:
    H: np.ndarray  # (N_r, N_t)
    K: float
    m: float
    omega: float
    sigma_r: float
    f_d: float = 0.0
    tau: float = 0.0


def slant_distance(geom: LinkGeometry) -> float:
    re, h = geom.r_earth, geom.h0
    s = math.sin(geom.theta_e)
    return math.sqrt(re**2 * s**2 + h**2 + 2 * h * re) - re * s


def fspl_db(d: float, f_c: float) -> float:
    """Free-space loss with ``f_c`` in Hz (converted to GHz) and ``d`` in meters."""
    if not (d > 0 and f_c > 0):
        raise DomainError("distance and frequency must be positive")
    return 32.45 + 20 * math.log10(f_c / 1e9) + 20 * math.log10(d)


def gaseous_loss_db(a_zenith: float, theta_e: float) -> float:
    if not 0 < theta_e <= math.pi / 2 + 1e-12:
        raise DomainError("elevation must lie in (0, pi/2]; sin(theta_E) vanishes at 0")
    return a_zenith / math.sin(theta_e)


def total_path_loss(geom: LinkGeometry, a_zenith: float, l_s: float, sigma_sf: float,
                    cl: float = 0.0, rng=None) -> LinkBudget:
    """Assemble the dB budget; shadow fading is drawn from N(0, sigma_sf²) per call."""
    if sigma_sf < 0:
        raise DomainError("shadow-fading deviation must be non-negative")
    fspl = fspl_db(slant_distance(geom), geom.f_c)
    sf = float(as_generator(rng).normal(0.0, sigma_sf)) if sigma_sf > 0 else 0.0
    l_b = fspl + sf + cl
    l_g = gaseous_loss_db(a_zenith, geom.theta_e)
    pl = l_b + l_g + l_s
    return LinkBudget(fspl, sf, cl, l_b, l_g, l_s, pl, 10.0 ** (-pl / 10.0))


def doppler_shift(geom: LinkGeometry) -> float:
    ratio = geom.r_earth / (geom.r_earth + geom.h0)
    return geom.v / SPEED_OF_LIGHT * ratio * math.cos(geom.theta_e) * geom.f_c


def sample_channel_matrix(n_t: int, n_r: int, K: float, m: float, omega: float,
                          sigma_r: float, rng, size=None) -> ChannelRealization | np.ndarray:
    """Draw an ``N_r x N_t`` shadowed-Rician matrix.

    Each entry combines a Nakagami LoS magnitude and a Rayleigh NLoS
    magnitude, each carrying an independent uniform phase, weighted by
    ``sqrt(K/(K+1))`` and ``sqrt(1/(K+1))``.

    With ``size`` set, returns a raw array of shape ``(size, N_r, N_t)``
    instead of a single :class:`ChannelRealization`.
    """
    if K < 0:
        raise DomainError("Rician factor must be non-negative")
    g = as_generator(rng)
    shape = (n_r, n_t) if size is None else (size, n_r, n_t)
    los = sample_nakagami(m, omega, g, shape) * np.exp(2j * np.pi * g.random(shape))
    nlos = sample_rayleigh(sigma_r, g, shape) * np.exp(2j * np.pi * g.random(shape))
    H = math.sqrt(K / (K + 1)) * los + math.sqrt(1 / (K + 1)) * nlos
    if size is not None:
        return H
    return ChannelRealization(H, K, m, omega, sigma_r)


def complex_noise(n0: float, shape, rng) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples of variance ``n0``."""
    g = as_generator(rng)
    return math.sqrt(n0 / 2) * (g.standard_normal(shape) + 1j * g.standard_normal(shape))


def apply_channel(H, e_k, E_s: float, pl_linear: float, n0: float, rng=None) -> np.ndarray:
    H = np.asarray(H)
    e_k = np.asarray(e_k)
    if H.ndim != 2 or e_k.shape != (H.shape[1],):
        raise DomainError(f"selection vector of shape {e_k.shape} does not match H {H.shape}")
    if n0 < 0:
        raise DomainError("noise variance must be non-negative")
    y = math.sqrt(E_s * pl_linear) * (H @ e_k)
    if n0 > 0:
        y = y + complex_noise(n0, H.shape[0], rng)
    return y


def symbol_energy(symbol_set) -> float:
    vs = [np.asarray(v) for v in symbol_set]
    if not vs:
        raise DomainError("empty symbol set")
    n_t = vs[0].size
    return float(sum(np.sum(np.abs(v) ** 2) for v in vs) / n_t)


def instantaneous_snr(n_entry, h_v_entry, E_s: float, pl_linear: float, n0: float):
    """Per-antenna SNR ``|sqrt(Es PL) h + n|² / N0``.

    ``n_entry`` is the noise sample on that antenna and ``h_v_entry`` the
    matching entry of ``H v``. Both may be arrays.
    """
    if not n0 > 0:
        raise DomainError("N0 must be positive")
    y = math.sqrt(E_s * pl_linear) * np.asarray(h_v_entry) + np.asarray(n_entry)
    out = np.abs(y) ** 2 / n0
    return float(out) if np.ndim(out) == 0 else out


def time_varying_response(h, f_c: float, tau: float, t_slot: float):
    """Doppler-induced rotation ``h exp(-j 2π f_c τ t)``."""
    if tau < 0:
        raise DomainError("delay must be non-negative")
    return h * np.exp(-2j * np.pi * f_c * tau * t_slot)
