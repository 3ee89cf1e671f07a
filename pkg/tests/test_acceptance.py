"""Exit criteria.  Each test records one PASS/FAIL line, printed in the pytest summary."""

import itertools
import json
import time

import numpy as np
import pytest
from scipy.integrate import simpson

from calibration_lab import (
    adversarial_stream,
    all_days_rule,
    audit,
    beta_bernoulli_forecaster,
    constant_forecaster,
    dawid_mc_check,
    high_rule,
    low_rule,
    mixed_strategy_forecaster,
    p1_fixed,
    p1_predictive_sampler,
    p1_random,
    play_game,
    termination_bound,
    transcript_to_sequence,
)
from calibration_lab.adversary import fired_condition
from calibration_lab.cli import main
from calibration_lab.core import BucketStats
from calibration_lab.rng import uniforms

from conftest import ACCEPTANCE_LINES, builtin_forecasters

FLOAT_SLACK = 1e-12


def record(n, desc, ok, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {desc}" + (f" ({detail})" if detail else ""))
    assert ok, detail


def _margins(forecaster, horizon):
    t0 = time.perf_counter()
    bits = adversarial_stream(forecaster, horizon)
    elapsed = time.perf_counter() - t0
    result = audit(forecaster, bits, [all_days_rule(), high_rule(), low_rule()], horizon)
    hi, lo, al = result.stats["high"], result.stats["low"], result.stats["all"]
    ok = (lo.count == 0 or lo.mean > 0.5 - FLOAT_SLACK) and (hi.count == 0 or hi.mean <= -0.5 + FLOAT_SLACK)
    return ok, elapsed, hi, lo, al


def test_1_adversary_margin():
    details, ok_all = [], True
    for name, f in builtin_forecasters().items():
        ok, elapsed, hi, lo, _ = _margins(f, 10_000)
        ok = ok and elapsed < 1.0
        ok_all &= ok
        details.append(f"{name}: low={lo.mean}, high={hi.mean}, {elapsed:.2f}s")
    record(1, "adversarial stream margins, horizon 1e4, all built-in forecasters", ok_all, "; ".join(details) if not ok_all else "")


def test_2_proposition_strategy():
    failures = []
    slowest = 0.0
    for f in (beta_bernoulli_forecaster(1, 1), constant_forecaster(0.7)):
        for p1 in (p1_fixed("1"), p1_random(100, seed=1), p1_predictive_sampler(100, seed=1)):
            t0 = time.perf_counter()
            t = play_game(f, p1, rounds=50)
            slowest = max(slowest, time.perf_counter() - t0)
            seq = transcript_to_sequence(t)
            # independent check: recompute both buckets with the auditor
            day = 0
            for m in t.moves:
                start = day
                day += len(m.string)
                if m.player != 2:
                    continue
                if len(m.string) > termination_bound(start):
                    failures.append(f"{p1}: turn of {len(m.string)} bits from k0={start}")
                res = audit(f, seq, [high_rule(), low_rule()], day, checkpoints=[day])
                if fired_condition(res.stats["high"], res.stats["low"]) != m.condition:
                    failures.append(f"{p1}: condition not satisfied at day {day}")
                for cut in range(start + 1, day):
                    res = audit(f, seq, [high_rule(), low_rule()], cut, checkpoints=[cut])
                    if fired_condition(res.stats["high"], res.stats["low"]) is not None:
                        failures.append(f"{p1}: turn did not stop at first qualifying bit (day {cut})")
    ok = not failures and slowest < 10.0
    record(2, "Player-2 strategy: 3*k0+1 bound and sharp stopping in 50-round games", ok,
           f"slowest game {slowest:.2f}s; " + "; ".join(failures[:5]))


def test_3_dawid_monte_carlo():
    t0 = time.perf_counter()
    report = dawid_mc_check(
        beta_bernoulli_forecaster(1, 1),
        [all_days_rule(), high_rule(), low_rule()],
        horizon=100_000,
        runs=200,
        tolerance=0.02,
        master_seed=2013,
    )
    elapsed = time.perf_counter() - t0
    fractions = {name: s.fraction_within_tolerance for name, s in report.per_rule.items()}
    evaluated = {name: s.evaluated_runs for name, s in report.per_rule.items()}
    ok = all(fr is not None and fr >= 0.95 for fr in fractions.values()) and elapsed < 120
    record(3, "prior-predictive calibration, 200 runs x 1e5 days, tol 0.02", ok,
           f"fractions {fractions}, evaluated runs {evaluated}, {elapsed:.1f}s")


def test_4_calibrated_oracle():
    details, ok_all = [], True
    for theta in (0.3, 0.5):
        f = constant_forecaster(theta)
        passed = 0
        for seed in range(100):
            bits = (uniforms(seed, 100_000) < theta).astype(int).tolist()
            m = audit(f, bits, [all_days_rule()], 100_000, checkpoints=[100_000]).stats["all"].mean
            passed += abs(m) <= 0.01
        ok_all &= passed >= 99
        details.append(f"theta={theta}: {passed}/100")
    record(4, "constant theta vs iid(theta), |mean| <= 0.01 in >= 99% of 100 runs", ok_all, "; ".join(details))


def test_5_conjugacy_oracle():
    grid = np.linspace(0.0, 1.0, 20001)
    worst = 0.0
    for alpha, beta in ((1, 1), (2, 3), (3.5, 1.5)):
        f = beta_bernoulli_forecaster(alpha, beta)
        for n in range(9):
            for w in itertools.product((0, 1), repeat=n):
                ones = sum(w)
                lik = grid ** (alpha - 1 + ones) * (1 - grid) ** (beta - 1 + n - ones)
                oracle = simpson(grid * lik, x=grid) / simpson(lik, x=grid)
                worst = max(worst, abs(f.forecast(w) - oracle))
    record(5, "Beta-Bernoulli predictive vs grid integration, all prefixes of length <= 8", worst < 1e-6, f"max error {worst:.2e}")


def test_6_mixed_strategy_footnote():
    f = mixed_strategy_forecaster([constant_forecaster(0.2), constant_forecaster(0.8)], [0.5, 0.5], seed=6)
    ok, elapsed, hi, lo, _ = _margins(f, 10_000)
    record(6, "adversary margins unchanged against a mixed strategy over {0.2, 0.8}", ok and elapsed < 1.0,
           f"low={lo.mean}, high={hi.mean}, low days {lo.count}, high days {hi.count}")


def test_7_reproducibility(tmp_path):
    base = {
        "schema_version": 1,
        "forecaster": {"type": "beta_bernoulli", "alpha": 1, "beta": 1},
        "nature": {"predictive": {}},
        "rules": ["all", "high", "low", {"type": "parity", "m": 2, "r": 0}],
        "horizon": 5000,
        "tolerance": 0.05,
        "seed": 99,
        "game": {"p1": {"type": "predictive_sampler", "n": 50, "seed": 3}, "rounds": 20},
        "mc": {"runs": 6, "workers": 1},
    }
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(base))
    outputs = {}
    for tag in ("a", "b"):
        out = tmp_path / tag
        for cmd in ("run", "game", "mc"):
            assert main([cmd, "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
        outputs[tag] = {name: (out / name).read_bytes() for name in ("trace.csv", "audit.csv", "transcript.jsonl", "report.json")}
    assert main(["mc", "--config", str(cfg), "--out", str(tmp_path / "w"), "--workers", "3", "--quiet"]) == 0
    same_runs = outputs["a"] == outputs["b"]
    same_workers = (tmp_path / "w" / "report.json").read_bytes() == outputs["a"]["report.json"]
    record(7, "byte-identical outputs on rerun and across worker counts", same_runs and same_workers,
           f"rerun identical={same_runs}, workers identical={same_workers}")


def test_8_audit_partition():
    worst = 0.0
    counts_ok = True
    for f in builtin_forecasters().values():
        _, _, hi, lo, al = _margins(f, 10_000)
        counts_ok &= hi.count + lo.count == 10_000
        worst = max(worst, abs(hi.sum + lo.sum - al.sum))
    record(8, "high/low partition: counts add to horizon, sums add to all-days sum", counts_ok and worst <= 1e-12,
           f"max sum gap {worst:.1e}")
