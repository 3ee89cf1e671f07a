"""Monte Carlo check that a Bayesian forecaster is calibrated on its own prior.

Sampling a_k ~ Bernoulli(pi_k) one day at a time draws a sequence from the
forecaster's prior.  Calibration should hold with prior probability one, so
at a long horizon nearly every sampled run should show small mean
discrepancy on every selection rule.  Only a finite rule family is checked.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

from . import rng
from .adversary import checked_forecast
from .core import Prefix
from .errors import ConfigError
from .forecasters import Forecaster
from .selection import SelectionRule, audit, fmt_float, rule_descriptor

MIN_SELECTED = 100


def predictive_sample(forecaster: Forecaster, horizon: int, seed: int, stream: int = 0) -> Prefix:
    """Draw a sequence from the forecaster's own predictive: a_k = 1 iff u_k < pi_k.

    u_k is the k-th variate of the ``(seed, stream)`` Philox stream.
    """
    if horizon < 1:
        raise ConfigError("horizon must be >= 1", "horizon")
    us = rng.uniforms(seed, horizon, stream).tolist()
    ev = forecaster.evaluator()
    bits = []
    for day in range(1, horizon + 1):
        a = 1 if us[day - 1] < checked_forecast(ev, day) else 0
        bits.append(a)
        ev.update(a)
    return tuple(bits)


@dataclass(frozen=True)
class RunResult:
    run: int
    counts: tuple[int, ...]
    final_means: tuple[float | None, ...]


@dataclass(frozen=True)
class RuleSummary:
    evaluated_runs: int
    insufficient_runs: int
    fraction_within_tolerance: float | None
    worst_abs_mean: float | None
    mean_abs_mean: float | None


@dataclass(frozen=True)
class McReport:
    runs: int
    horizon: int
    tolerance: float
    seed: int
    forecaster: dict[str, Any]
    rules: tuple[Any, ...]
    per_rule: dict[str, RuleSummary]
    run_results: tuple[RunResult, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "runs": self.runs,
            "horizon": self.horizon,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "min_selected": MIN_SELECTED,
            "forecaster": self.forecaster,
            "rules": list(self.rules),
            "per_rule": {
                name: {
                    "evaluated_runs": s.evaluated_runs,
                    "insufficient_runs": s.insufficient_runs,
                    "fraction_within_tolerance": s.fraction_within_tolerance,
                    "worst_abs_mean": s.worst_abs_mean,
                    "mean_abs_mean": s.mean_abs_mean,
                }
                for name, s in self.per_rule.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def runs_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["run", "rule", "count", "final_mean"])
        names = list(self.per_rule)
        for r in self.run_results:
            for name, c, m in zip(names, r.counts, r.final_means):
                w.writerow([r.run, name, c, fmt_float(m)])
        return buf.getvalue()


def _one_run(args: tuple[Forecaster, Sequence[SelectionRule], int, int, int]) -> RunResult:
    forecaster, rules, horizon, master_seed, j = args
    bits = predictive_sample(forecaster, horizon, master_seed, stream=j)
    result = audit(forecaster, bits, rules, horizon, checkpoints=[horizon])
    stats = [result.stats[r.name] for r in rules]
    return RunResult(j, tuple(s.count for s in stats), tuple(s.mean for s in stats))


def dawid_mc_check(
    forecaster: Forecaster,
    rules: Sequence[SelectionRule],
    horizon: int,
    runs: int,
    tolerance: float,
    master_seed: int,
    workers: int = 1,
) -> McReport:
    """Sample ``runs`` sequences from the forecaster's prior and audit each against ``rules``.

    Run j draws from stream ``(master_seed, j)``.  A rule that selected fewer
    than 100 days in a run is tallied as insufficient for that run and left
    out of its pass-fraction denominator.  The report is identical for any
    ``workers`` count.
    """
    if runs < 1:
        raise ConfigError("runs must be >= 1", "runs")
    if not tolerance > 0:
        raise ConfigError("tolerance must be > 0", "tolerance")
    jobs = [(forecaster, tuple(rules), horizon, master_seed, j) for j in range(runs)]
    if workers > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_run, jobs, chunksize=max(1, runs // (4 * workers))))
    else:
        results = [_one_run(job) for job in jobs]

    per_rule = {}
    for i, rule in enumerate(rules):
        absmeans = []
        insufficient = 0
        for r in results:
            if r.counts[i] < MIN_SELECTED:
                insufficient += 1
            else:
                absmeans.append(abs(r.final_means[i]))
        if absmeans:
            summary = RuleSummary(
                len(absmeans),
                insufficient,
                sum(1 for m in absmeans if m <= tolerance) / len(absmeans),
                max(absmeans),
                sum(absmeans) / len(absmeans),
            )
        else:
            summary = RuleSummary(0, insufficient, None, None, None)
        per_rule[rule.name] = summary

    return McReport(
        runs=runs,
        horizon=horizon,
        tolerance=tolerance,
        seed=master_seed,
        forecaster=forecaster.descriptor(),
        rules=tuple(rule_descriptor(r) for r in rules),
        per_rule=per_rule,
        run_results=tuple(results),
    )
