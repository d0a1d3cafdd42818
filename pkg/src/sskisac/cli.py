"""Command-line entry point: ``sskisac {ber,sense,ambiguity,linkbudget}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import experiments as ex
from .config import ExperimentConfig, load_config
from .errors import ConfigError, DomainError, EstimationError

log = logging.getLogger("sskisac")

EXIT_OK, EXIT_CONFIG, EXIT_ESTIMATION = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment configuration")
    common.add_argument("--seed", type=int, help="64-bit RNG seed")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    common.add_argument("--waveform", choices=["chirp", "sinusoid"])
    common.add_argument("--method", choices=["fft", "music"], help="beat-frequency estimator")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="sskisac", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("ber", parents=[common], help="BER vs SNR sweep")
    sub.add_parser("sense", parents=[common], help="range/velocity accuracy sweep")
    sub.add_parser("ambiguity", parents=[common], help="ambiguity surface")
    sub.add_parser("linkbudget", parents=[common], help="link budget report")
    return p


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    changes = {"seed": args.seed, "waveform": args.waveform, "beat_method": args.method}
    if args.trials is not None:
        key = "sense_trials" if args.command == "sense" else "trials"
        changes[key] = args.trials
    return cfg.replace(**changes)


def run(args) -> dict[str, str]:
    cfg = _config(args)
    if args.command == "ber":
        return {f"ber_{c.n_t}_{c.waveform}.csv": ex.ber_csv(cfg, c) for c in ex.run_ber_sweep(cfg)}
    if args.command == "sense":
        files = {}
        for c in ex.run_sensing_sweep(cfg):
            files[f"sense_{c.waveform}.csv"] = ex.sense_csv(cfg, c)
            files[f"sense_{c.waveform}_scenes.csv"] = ex.scenes_csv(cfg, c)
        return files
    if args.command == "ambiguity":
        kind = cfg.waveforms[0]
        return {"ambiguity.csv": ex.ambiguity_csv(cfg, ex.run_ambiguity(cfg, kind), kind)}
    if args.command == "linkbudget":
        report = ex.run_link_budget(cfg)
        report["config_hash"] = cfg.digest()
        report["seed"] = cfg.seed
        return {"linkbudget.json": json.dumps(report, indent=2, sort_keys=True) + "\n"}
    raise ConfigError(f"unknown command {args.command}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        files = run(args)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EstimationError as exc:
        print(f"estimation failure: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    for path in ex.write_outputs(args.out, files):
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
