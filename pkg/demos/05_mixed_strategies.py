"""
Randomizing does not help against a Nature that sees the forecast
=================================================================

A forecaster that flips a coin each day to choose between 0.2 and 0.8 still
announces a concrete probability every day, and the adversary only needs
that number.
"""

from calibration_lab import (
    adversarial_stream,
    audit,
    constant_forecaster,
    high_rule,
    low_rule,
    mixed_strategy_forecaster,
)

f = mixed_strategy_forecaster([constant_forecaster(0.2), constant_forecaster(0.8)], [0.5, 0.5], seed=6)
bits = adversarial_stream(f, 10_000)
result = audit(f, bits, [high_rule(), low_rule()], 10_000)
for name in ("high", "low"):
    st = result.stats[name]
    print(f"{name:4s}: {st.count} days, mean discrepancy {st.mean:+.3f}")

# the daily draw is a pure function of (seed, day), so the run replays exactly
assert adversarial_stream(f, 10_000) == bits
