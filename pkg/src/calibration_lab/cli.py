"""Command-line front end.

    calibration-lab run    --config cfg.json [--out DIR]  -> trace.csv, audit.csv, verdict.json
    calibration-lab game   --config cfg.json [--out DIR]  -> transcript.jsonl
    calibration-lab mc     --config cfg.json [--out DIR]  -> report.json, runs.csv
    calibration-lab audit  TRACE.csv --tolerance T        -> audit.csv, verdict.json
    calibration-lab sample --config cfg.json              -> sample.txt

Exit codes: 0 ok, 2 config/input error, 3 invalid forecast, 4 Player-2 turn
cap exceeded, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import rng
from .adversary import adversarial_stream
from .bayes_check import dawid_mc_check, predictive_sample
from .config import DEFAULT_RULES, ExperimentConfig, load_config
from .core import parse_prefix, render_prefix
from .errors import (
    ConfigError,
    InputError,
    InvalidForecastError,
    PriorContradicted,
    StrategyError,
    TerminationBoundViolated,
)
from .forecasters import ReplayForecaster
from .game import P1Fixed, play_game
from .selection import audit, fmt_float, rule_from_descriptor, verdict

EXIT_OK, EXIT_INPUT, EXIT_FORECAST, EXIT_CAP, EXIT_IO = 0, 2, 3, 4, 5


class _Output:
    def __init__(self, out: Path, quiet: bool):
        self.out = out
        self.quiet = quiet

    def write(self, name: str, text: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        if not self.quiet:
            print(f"wrote {path}")
        return path


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _outdir(args, cfg: ExperimentConfig | None) -> Path:
    if args.out:
        return Path(args.out)
    if cfg is not None and cfg.out is not None:
        return cfg.out
    return Path(".")


def _config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this command", "config")
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", "config") from None
    return cfg.with_overrides(seed=args.seed, horizon=args.horizon)


# -- natures ------------------------------------------------------------------------


def nature_bits(cfg: ExperimentConfig) -> tuple[int, ...]:
    nature, horizon = cfg.nature, cfg.horizon
    if nature.kind == "iid":
        us = rng.uniforms(cfg.seed, horizon)
        return tuple(int(u < nature.theta) for u in us)
    if nature.kind == "predictive":
        return predictive_sample(cfg.forecaster, horizon, cfg.seed)
    if nature.kind == "adversarial":
        return adversarial_stream(cfg.forecaster, horizon)
    text = "".join(nature.path.read_text(encoding="ascii").split())
    return parse_prefix(text)


def trace_csv(bits: Sequence[int], forecasts: Sequence[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["day", "bit", "forecast", "discrepancy"])
    for day, (a, p) in enumerate(zip(bits, forecasts), start=1):
        w.writerow([day, a, fmt_float(p), fmt_float(a - p)])
    return buf.getvalue()


# -- commands ---------------------------------------------------------------------------


def cmd_run(cfg: ExperimentConfig, out: _Output) -> dict[str, Path]:
    cfg.require("nature", "horizon", "tolerance")
    bits = nature_bits(cfg)
    result = audit(cfg.forecaster, bits, cfg.rules, cfg.horizon, cfg.checkpoints, keep_trace=True)
    v = verdict(result, cfg.tolerance, cfg.burn_in)
    return {
        "trace": out.write("trace.csv", trace_csv(result.outcomes, result.forecasts)),
        "audit": out.write("audit.csv", result.to_csv()),
        "verdict": out.write("verdict.json", _json(v.to_dict())),
    }


def cmd_game(cfg: ExperimentConfig, out: _Output, seed: int | None = None) -> dict[str, Path]:
    cfg.require("game")
    p1 = cfg.game.p1
    if seed is not None and not isinstance(p1, P1Fixed):
        p1 = replace(p1, seed=seed)
    t = play_game(cfg.forecaster, p1, cfg.game.rounds, cfg.game.cap_per_turn)
    return {"transcript": out.write("transcript.jsonl", t.to_jsonl())}


def cmd_mc(cfg: ExperimentConfig, out: _Output, workers: int | None = None) -> dict[str, Path]:
    cfg.require("horizon", "tolerance", "seed", "mc")
    report = dawid_mc_check(
        cfg.forecaster,
        cfg.rules,
        cfg.horizon,
        cfg.mc.runs,
        cfg.tolerance,
        cfg.seed,
        workers=workers if workers is not None else cfg.mc.workers,
    )
    return {
        "report": out.write("report.json", report.to_json()),
        "runs": out.write("runs.csv", report.runs_csv()),
    }


def cmd_sample(cfg: ExperimentConfig, out: _Output) -> dict[str, Path]:
    cfg.require("horizon", "seed")
    bits = predictive_sample(cfg.forecaster, cfg.horizon, cfg.seed)
    return {"sample": out.write("sample.txt", render_prefix(bits) + "\n")}


def read_trace(path: str | Path) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Parse an external trace CSV with columns day, forecast and outcome (or bit); other columns are ignored."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty trace file") from None
        cols = [h.strip() for h in header]
        outcome_col = "outcome" if "outcome" in cols else "bit"
        for needed in ("day", "forecast", outcome_col):
            if needed not in cols:
                raise InputError(f"{path}: header must contain day, forecast and outcome columns")
        i_day, i_p, i_a = cols.index("day"), cols.index("forecast"), cols.index(outcome_col)
        forecasts, outcomes = [], []
        for row_no, row in enumerate(reader, start=1):
            where = f"{path}: row {row_no}"
            if len(row) != len(cols):
                raise InputError(f"{where}: expected {len(cols)} fields, got {len(row)}")
            try:
                day = int(row[i_day])
                p = float(row[i_p])
            except ValueError:
                raise InputError(f"{where}: day must be an integer and forecast a number") from None
            if day != row_no:
                raise InputError(f"{where}: days must run 1, 2, 3, ...; got {day}")
            if not (math.isfinite(p) and 0.0 <= p <= 1.0):
                raise InputError(f"{where}: forecast {row[i_p]!r} is not in [0, 1]")
            if row[i_a].strip() not in ("0", "1"):
                raise InputError(f"{where}: outcome must be 0 or 1, got {row[i_a]!r}")
            forecasts.append(p)
            outcomes.append(int(row[i_a]))
    if not outcomes:
        raise InputError(f"{path}: trace has no rows")
    return tuple(forecasts), tuple(outcomes)


def cmd_audit(trace_path, rules, tolerance: float, out: _Output, burn_in: int = 100, checkpoints=None, horizon=None):
    forecasts, outcomes = read_trace(trace_path)
    horizon = horizon if horizon is not None else len(outcomes)
    if horizon > len(outcomes):
        raise InputError(f"trace has {len(outcomes)} rows, fewer than horizon {horizon}")
    result = audit(ReplayForecaster(forecasts), outcomes, rules, horizon, checkpoints)
    v = verdict(result, tolerance, burn_in)
    return {
        "audit": out.write("audit.csv", result.to_csv()),
        "verdict": out.write("verdict.json", _json(v.to_dict())),
    }


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="calibration-lab", description="Calibration audits, adversaries and Banach-Mazur games for binary forecasters.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config (JSON)")
    common.add_argument("--out", help="output directory (overrides config 'out')")
    common.add_argument("--seed", type=int, help="override the master seed")
    common.add_argument("--horizon", type=int, help="override the horizon")
    common.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="audit a forecaster against the configured nature")
    sub.add_parser("game", parents=[common], help="play a Banach-Mazur game against the forecaster")
    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo calibration check on prior-predictive samples")
    mc.add_argument("--workers", type=int, help="worker processes (results do not depend on this)")
    sub.add_parser("sample", parents=[common], help="draw one sequence from the forecaster's predictive")
    au = sub.add_parser("audit", parents=[common], help="audit an external day,forecast,outcome trace")
    au.add_argument("trace", help="CSV trace file")
    au.add_argument("--rules", help='JSON list of rules, e.g. \'["all","high","low"]\' (default: config rules or all,high,low)')
    au.add_argument("--tolerance", type=float, help="verdict tolerance (default: config tolerance)")
    au.add_argument("--burn-in", type=int, help="minimum selected days for a verdict (default 100)")
    au.add_argument("--checkpoints", help="comma-separated checkpoint days (default: powers of two plus the last day)")
    return parser


def _audit_args(args):
    cfg = _config(args) if args.config else None
    if args.rules:
        try:
            raw = json.loads(args.rules)
        except json.JSONDecodeError:
            raw = [r.strip() for r in args.rules.split(",")]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("must be a nonempty list", "--rules")
        rules = tuple(rule_from_descriptor(r, f"--rules[{i}]") for i, r in enumerate(raw))
    elif cfg is not None:
        rules = cfg.rules
    else:
        rules = tuple(rule_from_descriptor(r) for r in DEFAULT_RULES)
    tolerance = args.tolerance if args.tolerance is not None else (cfg.tolerance if cfg else None)
    if tolerance is None or not tolerance > 0:
        raise ConfigError("a tolerance > 0 is required (--tolerance or config)", "tolerance")
    burn_in = args.burn_in if args.burn_in is not None else (cfg.burn_in if cfg else 100)
    if args.checkpoints:
        try:
            checkpoints = [int(x) for x in args.checkpoints.split(",")]
        except ValueError:
            raise ConfigError("must be comma-separated integers", "--checkpoints") from None
    else:
        checkpoints = list(cfg.checkpoints) if cfg and cfg.checkpoints else None
    return cfg, rules, tolerance, burn_in, checkpoints


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "audit":
            cfg, rules, tolerance, burn_in, checkpoints = _audit_args(args)
            out = _Output(_outdir(args, cfg), args.quiet)
            cmd_audit(args.trace, rules, tolerance, out, burn_in, checkpoints, args.horizon)
            return EXIT_OK
        cfg = _config(args)
        out = _Output(_outdir(args, cfg), args.quiet)
        if args.command == "run":
            cmd_run(cfg, out)
        elif args.command == "game":
            cmd_game(cfg, out, seed=args.seed)
        elif args.command == "mc":
            cmd_mc(cfg, out, workers=args.workers)
        elif args.command == "sample":
            cmd_sample(cfg, out)
        return EXIT_OK
    except (ConfigError, InputError, StrategyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidForecastError, PriorContradicted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORECAST
    except TerminationBoundViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
