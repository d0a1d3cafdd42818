import json
import subprocess
import sys

import pytest

from sskisac.cli import main


def _cfg(tmp_path, **kw):
    base = {"n_t": [2], "snr_grid_db": [0.0, 10.0], "trials": 500, "sense_trials": 4,
            "ambiguity_T": 2e-6, "ambiguity_delays": 5, "ambiguity_dopplers": 5}
    base.update(kw)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(base))
    return str(p)


def test_ber_command(tmp_path):
    out = tmp_path / "out"
    assert main(["ber", "--config", _cfg(tmp_path), "--out", str(out), "--seed", "3"]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["ber_2_chirp.csv", "ber_2_sinusoid.csv"]
    assert "# seed: 3" in (out / "ber_2_chirp.csv").read_text()


def test_ber_deterministic(tmp_path):
    cfg = _cfg(tmp_path)
    for d in ("a", "b"):
        assert main(["ber", "--config", cfg, "--seed", "42", "--out", str(tmp_path / d),
                     "--waveform", "chirp"]) == 0
    assert (tmp_path / "a" / "ber_2_chirp.csv").read_bytes() == (tmp_path / "b" / "ber_2_chirp.csv").read_bytes()


def test_trials_flag(tmp_path):
    out = tmp_path / "o"
    assert main(["ber", "--config", _cfg(tmp_path), "--trials", "100", "--waveform", "sinusoid",
                 "--out", str(out)]) == 0
    assert ",100," in (out / "ber_2_sinusoid.csv").read_text()


def test_sense_command(tmp_path):
    out = tmp_path / "o"
    assert main(["sense", "--config", _cfg(tmp_path), "--trials", "3", "--waveform", "chirp",
                 "--method", "music", "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["sense_chirp.csv", "sense_chirp_scenes.csv"]
    assert "music" in (out / "sense_chirp_scenes.csv").read_text()


def test_ambiguity_and_linkbudget(tmp_path):
    cfg = _cfg(tmp_path)
    assert main(["ambiguity", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "ambiguity.csv").exists()
    assert main(["linkbudget", "--config", cfg, "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "linkbudget.json").read_text())
    assert rep["d_m"] == pytest.approx(884.85e3, abs=500)
    assert {"config_hash", "seed", "fspl_db", "f_d_hz"} <= set(rep)


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["ber", "--config", _cfg(tmp_path, n_t=[3]), "--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err
    assert main(["ber", "--config", str(tmp_path / "nope.json")]) == 2
    assert main(["ber", "--config", _cfg(tmp_path), "--trials", "0"]) == 2


def test_estimation_error_exit_code(tmp_path, monkeypatch):
    from sskisac import experiments
    from sskisac.errors import EstimationError

    def boom(cfg):
        raise EstimationError("no tone")

    monkeypatch.setattr(experiments, "run_sensing_sweep", boom)
    assert main(["sense", "--config", _cfg(tmp_path), "--out", str(tmp_path)]) == 3


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "sskisac", "linkbudget", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert (tmp_path / "linkbudget.json").exists()
