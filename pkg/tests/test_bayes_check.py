import statistics

import numpy as np
import pytest

from calibration_lab import (
    adversarial_stream,
    all_days_rule,
    audit,
    beta_bernoulli_forecaster,
    constant_forecaster,
    dawid_mc_check,
    high_rule,
    low_rule,
    parity_rule,
    predictive_sample,
    prev_bit_rule,
    verdict,
)
from calibration_lab.rng import uniforms

STANDARD = [all_days_rule(), high_rule(), low_rule()]


def test_degenerate_priors():
    assert predictive_sample(constant_forecaster(1.0), 50, seed=3) == (1,) * 50
    assert predictive_sample(constant_forecaster(0.0), 50, seed=3) == (0,) * 50


def test_sample_uses_the_kth_variate():
    f = beta_bernoulli_forecaster(1, 1)
    bits = predictive_sample(f, 200, seed=5, stream=2)
    us = uniforms(5, 200, stream=2)
    for k, a in enumerate(bits):
        assert a == int(us[k] < f.forecast(bits[:k]))


def test_sample_is_deterministic():
    f = beta_bernoulli_forecaster(1, 1)
    assert predictive_sample(f, 500, seed=1) == predictive_sample(f, 500, seed=1)
    assert predictive_sample(f, 500, seed=1) != predictive_sample(f, 500, seed=2)


@pytest.mark.slow
def test_laplace_sampler_fraction_is_uniform():
    # Beta(1,1) predictive sampling mixes i.i.d. coins over theta ~ U(0,1),
    # so the long-run fraction of ones has mean 1/2 and sd 1/sqrt(12)
    f = beta_bernoulli_forecaster(1, 1)
    fracs = np.array([sum(predictive_sample(f, 10_000, seed=s)) / 10_000 for s in range(500)])
    assert abs(fracs.mean() - 0.5) <= 0.05
    assert abs(fracs.std() - 1 / np.sqrt(12)) <= 0.05


@pytest.mark.slow
def test_fair_coin_is_calibrated_on_itself():
    report = dawid_mc_check(constant_forecaster(0.5), [all_days_rule()], 100_000, 100, 0.02, master_seed=1)
    assert report.per_rule["all"].fraction_within_tolerance == 1.0
    assert report.per_rule["all"].evaluated_runs == 100


def test_tiny_report_is_well_formed():
    report = dawid_mc_check(beta_bernoulli_forecaster(1, 1), STANDARD + [prev_bit_rule(1)], 1, 1, 0.02, master_seed=0)
    assert report.runs == 1
    for s in report.per_rule.values():
        assert s.insufficient_runs == 1 and s.evaluated_runs == 0 and s.fraction_within_tolerance is None
    d = report.to_dict()
    assert set(d["per_rule"]) == {"all", "high", "low", "prev_bit[1]"}


def test_report_invariants_and_csv():
    report = dawid_mc_check(beta_bernoulli_forecaster(1, 1), STANDARD, 2000, 8, 0.05, master_seed=3)
    for s in report.per_rule.values():
        if s.evaluated_runs:
            assert 0.0 <= s.fraction_within_tolerance <= 1.0
            assert s.worst_abs_mean >= s.mean_abs_mean >= 0.0
        assert s.evaluated_runs + s.insufficient_runs == 8
    lines = report.runs_csv().splitlines()
    assert lines[0] == "run,rule,count,final_mean"
    assert len(lines) == 1 + 8 * 3


def test_run_j_depends_only_on_master_seed_and_j():
    f = beta_bernoulli_forecaster(1, 1)
    full = dawid_mc_check(f, STANDARD, 1000, 5, 0.05, master_seed=9)
    alone = audit(f, predictive_sample(f, 1000, 9, stream=3), STANDARD, 1000)
    r3 = full.run_results[3]
    assert r3.counts == tuple(alone.stats[r.name].count for r in STANDARD)
    assert r3.final_means == tuple(alone.stats[r.name].mean for r in STANDARD)


def test_determinism_and_worker_independence():
    f = beta_bernoulli_forecaster(1, 1)
    a = dawid_mc_check(f, STANDARD, 1500, 6, 0.05, master_seed=4)
    b = dawid_mc_check(f, STANDARD, 1500, 6, 0.05, master_seed=4, workers=2)
    assert a.to_json() == b.to_json()
    assert a.runs_csv() == b.runs_csv()


def test_contrast_with_adversarial_data():
    f = beta_bernoulli_forecaster(1, 1)
    bits = adversarial_stream(f, 10_000)
    v = verdict(audit(f, bits, STANDARD, 10_000), tolerance=0.25)
    assert v.rules["high"].status == "violation"
    assert v.rules["low"].status == "violation"


@pytest.mark.slow
def test_self_sampled_trend():
    f = beta_bernoulli_forecaster(1, 1)
    rules = STANDARD + [parity_rule(2, 0), prev_bit_rule(1)]
    days = [2**10, 2**13, 2**16]
    per_day = {(r.name, d): [] for r in rules for d in days}
    for run in range(50):
        result = audit(f, predictive_sample(f, days[-1], seed=77, stream=run), rules, days[-1], checkpoints=days)
        for c in result.checkpoints:
            if c.mean is not None:
                per_day[(c.rule, c.day)].append(abs(c.mean))
    for r in rules:
        series = [statistics.median(per_day[(r.name, d)]) for d in days]
        inversions = sum(b > a for a, b in zip(series, series[1:]))
        assert inversions <= 1, (r.name, series)
