"""
The Banach-Mazur game on Cantor space
=====================================

Players alternately extend a binary prefix.  Player 1 wins if the infinite
sequence they build is one on which the forecaster is high-low calibrated.
Player 2 answers every move with adversarial bits until the low bucket's
mean is at least 0.25 or the high bucket's mean is at most -0.25.  Since that
happens once per round, forever, the limit sequence is never calibrated: the
set of calibrated sequences is meagre, so failure of calibration is the
typical case in the topological sense.
"""

from calibration_lab import (
    beta_bernoulli_forecaster,
    p1_predictive_sampler,
    play_game,
    render_prefix,
    termination_bound,
)

f = beta_bernoulli_forecaster(1, 1)
# Player 1 is as friendly to the forecaster as possible: it samples from the
# forecaster's own predictive distribution.
p1 = p1_predictive_sampler(100, seed=7)
t = play_game(f, p1, rounds=10)

day = 0
for m in t.moves:
    start, day = day, day + len(m.string)
    if m.player == 1:
        print(f"P1 plays {len(m.string):3d} bits  -> low mean {m.low.mean:+.3f}, high mean {m.high.mean:+.3f}")
    else:
        print(f"P2 plays {len(m.string):3d} bits (bound {termination_bound(start)}) -> {m.condition}"
              f"  low {m.low.mean:+.3f}, high {m.high.mean:+.3f}   e.g. {render_prefix(m.string[:12])}")

###############################################################################
# The transcript serializes to JSON lines, one record per move.

print(t.to_jsonl().splitlines()[1])
