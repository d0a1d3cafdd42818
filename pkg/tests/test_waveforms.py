import csv

import numpy as np
import pytest

from sskisac.errors import AliasingError, DomainError
from sskisac.waveforms import (
    ambiguity,
    gen_down_chirp,
    gen_sinusoid,
    gen_triangle_lfm,
    gen_up_chirp,
    gen_v_lfm,
    write_waveform_csv,
)

BW, T, FS = 10e6, 1e-4, 28.8e6


def _inst_freq(x, fs):
    # frequency between consecutive samples from the phase increment
    return np.angle(x[1:] * np.conj(x[:-1])) * fs / (2 * np.pi)


def test_up_chirp_sweeps_linearly():
    wf = gen_up_chirp(BW, T, FS)
    assert wf.n == round(FS * T)
    f = _inst_freq(wf.samples, FS)
    t_mid = (np.arange(f.size) + 0.5) / FS
    np.testing.assert_allclose(f, -BW / 2 + BW / T * t_mid, atol=1.0)
    assert np.all(np.diff(f) > 0)


def test_down_chirp_sweeps_down():
    f = _inst_freq(gen_down_chirp(BW, T, FS).samples, FS)
    step = BW / T / FS  # frequency change per sample
    assert f[0] == pytest.approx(BW / 2, abs=2 * step)
    assert f[-1] == pytest.approx(-BW / 2, abs=2 * step)
    assert np.all(np.diff(f) < 0)


def test_chirp_phase_second_difference():
    # a quadratic phase has constant second difference 2π μ / fs²
    fs, bw, dur = 1000.0, 100.0, 0.05
    ph = np.unwrap(np.angle(gen_up_chirp(bw, dur, fs).samples))
    np.testing.assert_allclose(np.diff(ph, 2), 2 * np.pi * bw / dur / fs**2, atol=1e-9)


def test_down_is_conjugate_of_up():
    up = gen_up_chirp(BW, T, FS, A=2.0)
    down = gen_down_chirp(BW, T, FS, A=2.0)
    np.testing.assert_allclose(down.samples, up.samples.conj(), atol=1e-12)
    assert np.allclose(np.abs(up.samples), 2.0)


def test_chirp_carrier_offset():
    f0 = 1e6
    f = _inst_freq(gen_up_chirp(BW, T, FS, f0=f0).samples, FS)
    assert np.mean(f) == pytest.approx(f0, abs=BW / T / FS)


def test_sinusoid():
    wf = gen_sinusoid(1e6, 0.5, T, FS)
    np.testing.assert_allclose(_inst_freq(wf.samples, FS), 1e6, atol=1e-6)
    np.testing.assert_allclose(np.abs(wf.samples), 0.5)
    with pytest.raises(AliasingError):
        gen_sinusoid(FS / 2, 1.0, T, FS)


def test_triangle_lfm_structure():
    tri = gen_triangle_lfm(BW, T, FS)
    up = gen_up_chirp(BW, T, FS)
    half = tri.n // 2
    amp = np.sqrt(1 / (2 * T))
    np.testing.assert_allclose(tri.samples[:half], amp * up.samples, atol=1e-12)
    np.testing.assert_allclose(tri.samples[half:], amp * up.samples.conj(), atol=1e-12)
    assert tri.duration == pytest.approx(2 * T)
    assert tri.sweep_time == pytest.approx(T)
    assert tri.chirp_rate == pytest.approx(BW / T)
    assert tri.energy == pytest.approx(1.0, rel=1e-9)
    assert tri.segments == ("up", "down")


def test_triangle_phase_continuous_at_apex():
    tri = gen_triangle_lfm(BW, T, FS)
    f = _inst_freq(tri.samples, FS)
    # largest frequency step across the whole pulse stays a single chirp step
    assert np.max(np.abs(np.diff(f))) < 2 * BW / T / FS + 1.0


def test_v_lfm_is_conjugate_triangle():
    tri = gen_triangle_lfm(BW, T, FS)
    v = gen_v_lfm(BW, T, FS)
    np.testing.assert_allclose(v.samples, tri.samples.conj(), atol=1e-12)
    assert v.segments == ("down", "up")
    assert v.energy == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("args", [(BW, 0.0, FS), (BW, T, 0.0), (-1.0, T, FS)])
def test_generator_domain_errors(args):
    with pytest.raises(DomainError):
        gen_up_chirp(*args)


def test_bandwidth_above_fs_aliases():
    with pytest.raises(AliasingError):
        gen_triangle_lfm(30e6, T, FS)


def test_ambiguity_origin_and_symmetry():
    for wf in (gen_up_chirp(BW, 2e-5, FS), gen_triangle_lfm(BW, 1e-5, FS),
               gen_v_lfm(BW, 1e-5, FS), gen_sinusoid(1e6, 1.0, 2e-5, FS)):
        taus = np.linspace(-wf.duration / 2, wf.duration / 2, 11)
        fds = np.linspace(-2e6, 2e6, 9)
        surf = ambiguity(wf, taus, fds)
        assert surf.at(0.0, 0.0) == pytest.approx(1.0, abs=1e-6)
        np.testing.assert_allclose(surf.values, surf.values[::-1, ::-1], atol=1e-9)
        assert np.all(surf.values <= 1.0 + 1e-9)


def test_ambiguity_sinusoid_zero_doppler_cut():
    # a constant-modulus tone has |χ(τ,0)|² = (1 - |τ|/T)²
    wf = gen_sinusoid(1e6, 1.0, 1e-5, FS)
    taus = np.arange(-wf.n + 1, wf.n) / FS
    surf = ambiguity(wf, taus, [0.0])
    expected = (1 - np.abs(np.arange(-wf.n + 1, wf.n)) / wf.n) ** 2
    np.testing.assert_allclose(surf.values[:, 0], expected, atol=1e-9)


def test_ambiguity_up_chirp_ridge():
    wf = gen_up_chirp(BW, 2e-5, FS)
    taus = np.linspace(-0.1, 0.1, 9) * wf.duration
    surf = ambiguity(wf, taus, [0.0])
    for tau in surf.delays:
        ridge = ambiguity(wf, [tau], [wf.chirp_rate * tau]).values[0, 0]
        assert ridge >= 0.8


def test_ambiguity_grid_errors():
    wf = gen_up_chirp(BW, 1e-5, FS)
    with pytest.raises(DomainError):
        ambiguity(wf, [], [0.0])
    with pytest.raises(DomainError):
        ambiguity(wf, [2 * wf.duration], [0.0])
    with pytest.raises(DomainError):
        ambiguity(wf, [0.0], [FS])


def test_waveform_csv(tmp_path):
    wf = gen_up_chirp(BW, 1e-6, FS)
    path = write_waveform_csv(wf, tmp_path / "wf.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "re", "im"]
    data = np.array(rows[1:], dtype=float)
    np.testing.assert_array_equal(data[:, 1] + 1j * data[:, 2], wf.samples)
    np.testing.assert_array_equal(data[:, 0], wf.t)
