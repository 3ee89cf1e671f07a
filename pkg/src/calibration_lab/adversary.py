"""Nature strategies that defeat high-low calibration.

``adversarial_stream`` makes each day snowy exactly when the forecast is
below one half, so every low day has discrepancy above 0.5 and every high
day at most -0.5.  ``player2_turn`` is the same bit-by-bit rule used as a
Banach-Mazur move: keep playing against the forecast until one of the two
buckets has been pushed at least a quarter away from zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import BucketStats, Prefix, is_valid_forecast
from .errors import InvalidForecastError, PriorContradicted, TerminationBoundViolated
from .forecasters import Evaluator, Forecaster

LOW_FIRED = "low-mean>=0.25"
HIGH_FIRED = "high-mean<=-0.25"
MARGIN = 0.25


def oakes_dawid_bit(forecast: float) -> int:
    return 1 if forecast < 0.5 else 0


def checked_forecast(ev: Evaluator, day: int) -> float:
    try:
        p = ev.forecast()
    except (ArithmeticError, IndexError, PriorContradicted) as exc:
        raise InvalidForecastError(day, reason=str(exc)) from exc
    if not is_valid_forecast(p):
        raise InvalidForecastError(day, p)
    return p


def adversarial_stream(forecaster: Forecaster, horizon: int) -> Prefix:
    """The sequence a with a_k = 1 iff the forecaster, having seen a_1..a_{k-1}, says below 0.5."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    ev = forecaster.evaluator()
    bits = []
    for day in range(1, horizon + 1):
        a = oakes_dawid_bit(checked_forecast(ev, day))
        bits.append(a)
        ev.update(a)
    return tuple(bits)


def high_low_stats(forecaster: Forecaster, prefix: Sequence[int]) -> tuple[BucketStats, BucketStats]:
    """(high, low) bucket statistics of ``forecaster`` along ``prefix``, computed from scratch."""
    ev = forecaster.evaluator()
    high, low = BucketStats(), BucketStats()
    for day, a in enumerate(prefix, start=1):
        p = checked_forecast(ev, day)
        if p >= 0.5:
            high = high.update(a - p)
        else:
            low = low.update(a - p)
        ev.update(a)
    return high, low


def fired_condition(high: BucketStats, low: BucketStats) -> str | None:
    """Which stopping condition holds for these stats, low side checked first; None if neither."""
    if low.count > 0 and low.sum / low.count >= MARGIN:
        return LOW_FIRED
    if high.count > 0 and high.sum / high.count <= -MARGIN:
        return HIGH_FIRED
    return None


@dataclass(frozen=True)
class TurnOutcome:
    extension: Prefix
    condition: str
    high: BucketStats
    low: BucketStats

    @property
    def bits_used(self) -> int:
        return len(self.extension)


def termination_bound(prefix_length: int) -> int:
    # a low day adds > 0.5 and old low days are > -0.5, so 3*L0 new low days
    # lift the low mean to 0.25; symmetrically 3*H0 new high days for the
    # high mean.  L0 + H0 = prefix_length, pigeonhole does the rest.
    return 3 * prefix_length + 1


def player2_turn(
    forecaster: Forecaster,
    current_prefix: Sequence[int],
    high: BucketStats,
    low: BucketStats,
    cap: int | None = None,
    evaluator: Evaluator | None = None,
    debug: bool = False,
) -> TurnOutcome:
    """Play bits against the forecast until low-mean >= 0.25 or high-mean <= -0.25.

    ``high`` and ``low`` must be the true bucket statistics along
    ``current_prefix``.  Pass an ``evaluator`` already positioned at the end
    of the prefix to avoid replaying it; it is advanced in place.  The turn
    always plays at least one bit and stops at the first bit after which a
    condition holds.  With ``debug`` the passed statistics are recomputed
    and compared first.
    """
    k0 = len(current_prefix)
    if cap is None:
        cap = termination_bound(k0)
    if debug:
        actual = high_low_stats(forecaster, current_prefix)
        if actual != (high, low):
            raise AssertionError(f"stale bucket stats: given {(high, low)}, recomputed {actual}")
    ev = evaluator if evaluator is not None else forecaster.evaluator_at(current_prefix)

    ext = []
    day = k0
    while True:
        if len(ext) >= cap:
            raise TerminationBoundViolated(
                f"no stopping condition after {len(ext)} bits from a prefix of length {k0} (cap {cap})"
            )
        day += 1
        p = checked_forecast(ev, day)
        if p < 0.5:
            a = 1
            low = low.update(a - p)
        else:
            a = 0
            high = high.update(a - p)
        ext.append(a)
        ev.update(a)
        cond = fired_condition(high, low)
        if cond is not None:
            return TurnOutcome(tuple(ext), cond, high, low)
