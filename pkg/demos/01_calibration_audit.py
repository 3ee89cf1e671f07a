"""
Auditing a forecaster for calibration
=====================================

A forecaster is calibrated along a selection rule when its mean discrepancy
(outcome minus forecast) over the selected days goes to zero.  Here we audit
three forecasters on data from an i.i.d. coin with bias 0.3.
"""

from calibration_lab import (
    all_days_rule,
    audit,
    beta_bernoulli_forecaster,
    constant_forecaster,
    high_rule,
    low_rule,
    parity_rule,
    prev_bit_rule,
    verdict,
)
from calibration_lab.rng import uniforms

horizon = 50_000
bits = (uniforms(seed=1, n=horizon) < 0.3).astype(int).tolist()
rules = [all_days_rule(), high_rule(), low_rule(), parity_rule(2, 0), prev_bit_rule(1)]

###############################################################################
# The true chance, a wrong constant, and Laplace's rule of succession.

candidates = {
    "constant 0.3 (truth)": constant_forecaster(0.3),
    "constant 0.5 (wrong)": constant_forecaster(0.5),
    "Laplace rule": beta_bernoulli_forecaster(1, 1),
}

for label, f in candidates.items():
    result = audit(f, bits, rules, horizon)
    v = verdict(result, tolerance=0.02)
    print(f"\n{label}")
    for name, r in v.rules.items():
        mean = "  n/a " if r.final_mean is None else f"{r.final_mean:+.4f}"
        print(f"  {name:14s} days={r.count:6d} mean={mean}  {r.status}")

###############################################################################
# The checkpoint log records how each rule's mean evolved (powers of two).

result = audit(candidates["Laplace rule"], bits, [all_days_rule()], horizon)
for c in result.checkpoints[-6:]:
    print(c.day, c.rule, c.count, round(c.mean, 5))
