"""Bits, prefixes, forecasts and running discrepancy statistics.

A prefix is the record of data seen so far, stored as a tuple of 0/1 ints.
Days are 1-indexed: the next forecast made after a prefix of length n is for
day n + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConfigError, InputError, PrefixFormatError

Prefix = tuple  # tuple[int, ...]

# Largest admissible upper band edge; lets a half-open band include 1.0.
ONE_PLUS_ULP = math.nextafter(1.0, 2.0)


def check_bit(value: object) -> int:
    if value not in (0, 1):
        raise InputError(f"bit must be 0 or 1, got {value!r}")
    return int(value)


def is_valid_forecast(p: object) -> bool:
    return isinstance(p, (int, float)) and not isinstance(p, bool) and math.isfinite(p) and 0.0 <= p <= 1.0


def check_forecast(p: object, what: str = "forecast") -> float:
    if not is_valid_forecast(p):
        raise ConfigError(f"{what} must be a finite number in [0, 1], got {p!r}")
    return float(p)


def discrepancy(outcome: int, forecast: float) -> float:
    """Signed error ``outcome - forecast`` of a single day's forecast."""
    return outcome - forecast


def parse_prefix(text: str) -> Prefix:
    for i, ch in enumerate(text):
        if ch != "0" and ch != "1":
            raise PrefixFormatError(text, i)
    return tuple(1 if ch == "1" else 0 for ch in text)


def render_prefix(bits: Iterable[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


def as_prefix(bits: str | Sequence[int]) -> Prefix:
    """Accept either the text form or a sequence of bits."""
    if isinstance(bits, str):
        return parse_prefix(bits)
    return tuple(check_bit(b) for b in bits)


def compensated_add(raw: float, comp: float, d: float) -> tuple[float, float]:
    """Add ``d`` to a compensated sum; ``raw + comp`` tracks the exact sum to rounding level.

    TwoSum recovers the rounding error of each addition exactly.
    """
    t = raw + d
    bp = t - raw
    comp += (raw - (t - bp)) + (d - bp)
    return t, comp


@dataclass(frozen=True)
class BucketStats:
    """Count and discrepancy sum for the days a selection rule picked out.

    The sum is carried as a running float plus a compensation term so that
    sums over different groupings of the same days agree to rounding level.
    """

    count: int = 0
    raw: float = 0.0
    comp: float = 0.0

    @property
    def sum(self) -> float:
        return self.raw + self.comp

    @property
    def mean(self) -> float | None:
        if self.count == 0:
            return None
        return self.sum / self.count

    def update(self, d: float) -> BucketStats:
        return BucketStats(self.count + 1, *compensated_add(self.raw, self.comp, d))


def bucket_update(stats: BucketStats, d: float) -> BucketStats:
    return stats.update(d)


def fold_discrepancies(ds: Iterable[float], start: BucketStats | None = None) -> BucketStats:
    stats = start if start is not None else BucketStats()
    for d in ds:
        stats = stats.update(d)
    return stats
