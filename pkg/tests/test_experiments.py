import csv
import io
import json
import math

import numpy as np
import pytest

from sskisac import experiments as ex
from sskisac.config import ExperimentConfig, load_config
from sskisac.errors import ConfigError

SMALL = ExperimentConfig(n_t=(4,), trials=2000, block_size=500, sense_trials=20,
                         snr_grid_db=(0.0, 10.0))


def _rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(body))))


def test_config_defaults_and_validation():
    cfg = ExperimentConfig()
    assert cfg.n_t == (4, 8, 16, 32) and cfg.n_r == 4
    assert cfg.k_linear == pytest.approx(10.0)
    assert cfg.wavelength == pytest.approx(0.06)
    assert cfg.waveforms == ("chirp", "sinusoid")
    for bad in ({"n_t": (3,)}, {"p_fa": 0.0}, {"bandwidth": 40e6}, {"pulse_T": 0.01},
                {"waveform": "square"}, {"trials": 0}, {"seed": -1}):
        with pytest.raises(ConfigError):
            cfg.replace(**bad)


def test_config_json_round_trip(tmp_path):
    cfg = ExperimentConfig(seed=9, n_t=(2, 4))
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    again = load_config(path)
    assert again == cfg and again.digest() == cfg.digest()
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_symbol_waveforms_unit_energy():
    for kind in ("chirp", "sinusoid"):
        x = ex.symbol_waveform(SMALL, kind)
        assert x.size == SMALL.samples_per_symbol
        assert np.sum(np.abs(x) ** 2) == pytest.approx(1.0)


def test_noiseless_ber_is_zero():
    cfg = SMALL.replace(n_t=(2,), trials=1000)
    for wf in ("chirp", "sinusoid"):
        assert ex.run_ber_point(cfg, 2, wf, 100.0).ber == 0.0


def test_ber_point_fields():
    p = ex.run_ber_point(SMALL, 4, "chirp", 0.0)
    assert 0 < p.ber < 0.5
    assert p.trials == 2000
    assert p.std_err == pytest.approx(math.sqrt(p.ber * (1 - p.ber) / (2000 * 2)))
    assert p.symbol_errors <= p.bit_errors <= 2 * p.symbol_errors
    assert p.ser == p.symbol_errors / 2000


def test_ber_independent_of_block_size():
    a = ex.run_ber_point(SMALL, 4, "chirp", 5.0)
    b = ex.run_ber_point(SMALL.replace(block_size=500), 4, "chirp", 5.0)
    assert a == b


def test_ber_standard_error_matches_spread():
    cfg = SMALL.replace(trials=1000)
    # 40 seeds rather than 10: the sample spread of 10 values is itself ±25% noisy
    bers = [ex.run_ber_point(cfg.replace(seed=s), 4, "chirp", 0.0).ber for s in range(40)]
    se = ex.run_ber_point(cfg, 4, "chirp", 0.0).std_err
    spread = np.std(bers, ddof=1)
    assert se / 1.5 <= spread <= se * 1.5


def test_ber_sweep_structure():
    curves = ex.run_ber_sweep(SMALL)
    assert [(c.n_t, c.waveform) for c in curves] == [(4, "chirp"), (4, "sinusoid")]
    for c in curves:
        assert [p.snr_db for p in c.points] == [0.0, 10.0]
        assert c.points[1].ber < c.points[0].ber


def test_adaptive_weighting_switch():
    cfg = SMALL.replace(adaptive_weighting=True)
    assert ex.run_ber_point(cfg, 4, "chirp", 10.0).ber != ex.run_ber_point(SMALL, 4, "chirp", 10.0).ber


def test_sensing_sweep():
    curves = ex.run_sensing_sweep(SMALL, snr_grid_db=(-40.0, 25.0))
    chirp, sin = curves
    assert chirp.waveform == "chirp" and sin.waveform == "sinusoid"
    assert all(p.range_acc is None for p in sin.points)
    hi = chirp.points[1]
    assert hi.vel_acc >= 99.0 and hi.det_rate == 1.0
    assert chirp.points[0].det_rate <= 0.1
    for p in chirp.points + sin.points:
        assert 0 <= p.vel_acc <= 100 and p.trials == 20
    assert len(chirp.scenes) == 40
    # both waveforms see the same targets
    assert [(s.R, s.V_r) for s in chirp.scenes] == [(s.R, s.V_r) for s in sin.scenes]


def test_link_budget_report():
    rep = ex.run_link_budget(ExperimentConfig(sigma_sf_db=0.0))
    assert rep["d_m"] == pytest.approx(884.85e3, abs=500)
    assert rep["fspl_db"] == pytest.approx(165.4, abs=0.1)
    assert rep["f_d_hz"] == pytest.approx(742.5e3, abs=1e3)
    assert rep["l_g_db"] == pytest.approx(0.254, abs=1e-3)
    assert rep["sf_db"] == 0.0


def test_ambiguity_report():
    cfg = ExperimentConfig(ambiguity_T=5e-6, ambiguity_delays=21, ambiguity_dopplers=11)
    surf = ex.run_ambiguity(cfg, "chirp")
    assert surf.values.shape == (21, 11)
    assert surf.at(0.0, 0.0) == pytest.approx(1.0, abs=1e-6)
    zero = surf.values[:, 5]
    np.testing.assert_allclose(zero, zero[::-1], atol=1e-9)

    sin = ex.run_ambiguity(cfg, "sinusoid")
    n = round(cfg.fs * cfg.ambiguity_T)
    expected = (1 - np.abs(np.rint(sin.delays * cfg.fs)) / n) ** 2
    np.testing.assert_allclose(sin.values[:, 5], expected, atol=1e-9)

    rows = _rows(ex.ambiguity_csv(cfg, surf, "chirp"))
    assert rows[0] == ["tau_s", "fd_hz", "chi2"] and len(rows) == 1 + 21 * 11


def test_csv_outputs_and_metadata():
    curves = ex.run_ber_sweep(SMALL.replace(waveform="chirp"))
    text = ex.ber_csv(SMALL, curves[0])
    assert f"# config_hash: {SMALL.digest()}" in text
    meta = json.loads(next(l for l in text.splitlines() if l.startswith("# config: "))[10:])
    for key in ("fs", "k_db", "bandwidth", "f_c", "h0", "theta_e_deg", "sigma_sf_db", "a_zenith_db",
                "l_s_db", "sigma_r", "m", "omega", "v", "alpha_deg", "r_range", "v_range"):
        assert key in meta
    rows = _rows(text)
    assert rows[0] == ["snr_db", "ber", "trials", "std_err"]
    assert float(rows[1][1]) == curves[0].points[0].ber

    sense = ex.run_sensing_sweep(SMALL.replace(sense_trials=2), snr_grid_db=(10.0,))
    assert _rows(ex.sense_csv(SMALL, sense[0]))[0] == ["snr_db", "range_acc", "vel_acc", "det_rate"]
    scene_rows = _rows(ex.scenes_csv(SMALL, sense[1]))
    assert scene_rows[0][:3] == ["R", "V_r", "snr_db"]
    assert scene_rows[1][3] == ""  # no range estimate for the sinusoid


def test_write_outputs(tmp_path):
    paths = ex.write_outputs(tmp_path / "o", {"a.csv": "x\n"})
    assert paths[0].read_text() == "x\n"
