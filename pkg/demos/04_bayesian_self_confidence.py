"""
Bayesian forecasters expect to be calibrated
============================================

Sampling each bit from the forecaster's own predictive draws a sequence from
its prior.  On such sequences the forecaster is calibrated with probability
one, and a Monte Carlo check at a finite horizon shows it.  The same
forecaster fed adversarial data fails badly: the sequences on which it
succeeds have prior probability one, yet they are topologically rare.
"""

from calibration_lab import (
    adversarial_stream,
    all_days_rule,
    audit,
    beta_bernoulli_forecaster,
    dawid_mc_check,
    high_rule,
    low_rule,
    verdict,
)

f = beta_bernoulli_forecaster(1, 1)
rules = [all_days_rule(), high_rule(), low_rule()]

report = dawid_mc_check(f, rules, horizon=20_000, runs=40, tolerance=0.02, master_seed=2013)
for name, s in report.per_rule.items():
    print(f"{name:5s} evaluated {s.evaluated_runs:3d} runs, within 0.02: {s.fraction_within_tolerance:.2f}, "
          f"worst |mean| {s.worst_abs_mean:.4f}")

###############################################################################
# Contrast: the adversarial stream for the very same forecaster.

bits = adversarial_stream(f, 20_000)
v = verdict(audit(f, bits, rules, 20_000), tolerance=0.25)
for name, r in v.rules.items():
    print(f"{name:5s} final mean {r.final_mean:+.3f}  {r.status}")
