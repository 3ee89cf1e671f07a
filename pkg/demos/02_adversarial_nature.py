"""
An adversarial Nature defeats every forecaster
==============================================

Make it snow exactly on the days the forecast is below one half.  Then every
low-forecast day has discrepancy above 0.5 and every high-forecast day at
most -0.5, whatever the forecaster does, so high-low calibration fails.
"""

from calibration_lab import (
    adversarial_stream,
    audit,
    beta_bernoulli_forecaster,
    constant_forecaster,
    high_rule,
    low_rule,
    markov_forecaster,
    mixture_forecaster,
    render_prefix,
)

forecasters = {
    "constant 0.3": constant_forecaster(0.3),
    "constant 0.7": constant_forecaster(0.7),
    "Laplace rule": beta_bernoulli_forecaster(1, 1),
    "Markov(1,1)": markov_forecaster(1, 1),
    "mixture": mixture_forecaster([(beta_bernoulli_forecaster(1, 1), 0.5), (markov_forecaster(1, 1), 0.5)]),
}

horizon = 10_000
for label, f in forecasters.items():
    bits = adversarial_stream(f, horizon)
    result = audit(f, bits, [high_rule(), low_rule()], horizon)
    hi, lo = result.stats["high"], result.stats["low"]
    print(f"{label:14s} first bits {render_prefix(bits[:16])}  "
          f"high: {hi.count:5d} days mean {hi.mean if hi.mean is None else round(hi.mean, 3)}  "
          f"low: {lo.count:5d} days mean {lo.mean if lo.mean is None else round(lo.mean, 3)}")

###############################################################################
# Against Laplace's rule the adversary alternates, and the forecast hovers
# around one half without ever being right on average.

f = beta_bernoulli_forecaster(1, 1)
bits = adversarial_stream(f, 8)
print(render_prefix(bits), [round(f.forecast(bits[:k]), 3) for k in range(8)])
