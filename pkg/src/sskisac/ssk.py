"""Space shift keying: bit groups select one active transmit antenna."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, FramingError

__all__ = ["SskSymbol", "bits_per_symbol", "map_bits", "demap_index", "selection_vector"]


@dataclass(frozen=True)
class SskSymbol:
    bits: str
    antenna_index: int
    selection_vector: np.ndarray


def bits_per_symbol(n_t: int) -> int:
    n_t = int(n_t)
    if n_t < 2 or n_t & (n_t - 1):
        raise ConfigError(f"N_t={n_t} is not a power of two >= 2")
    return n_t.bit_length() - 1


def selection_vector(k: int, n_t: int) -> np.ndarray:
    e = np.zeros(n_t)
    e[k] = 1.0
    return e


def _as_bitstring(bits) -> str:
    if isinstance(bits, str):
        s = bits
    else:
        s = "".join(str(int(b)) for b in bits)
    if set(s) - {"0", "1"}:
        raise FramingError(f"not a bit sequence: {bits!r}")
    return s


def map_bits(bits, n_t: int) -> SskSymbol:
    """Big-endian natural binary mapping of ``log2(N_t)`` bits to an antenna index."""
    nb = bits_per_symbol(n_t)
    s = _as_bitstring(bits)
    if len(s) != nb:
        raise FramingError(f"expected {nb} bits for N_t={n_t}, got {len(s)}")
    k = int(s, 2)
    return SskSymbol(s, k, selection_vector(k, n_t))


def demap_index(k: int, n_t: int) -> str:
    nb = bits_per_symbol(n_t)
    if not 0 <= int(k) < n_t:
        raise DomainError(f"antenna index {k} outside [0, {n_t})")
    return format(int(k), f"0{nb}b")


def index_to_bits(k: np.ndarray, n_t: int) -> np.ndarray:
    """Vectorized demapping to a ``(len(k), log2 N_t)`` 0/1 array, MSB first."""
    nb = bits_per_symbol(n_t)
    shifts = np.arange(nb - 1, -1, -1)
    return (np.asarray(k)[:, None] >> shifts) & 1
