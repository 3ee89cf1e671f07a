"""Selection rules and the calibration auditor.

A selection rule decides whether day k belongs to a subsequence using only
the bits before day k and the forecast for day k.  The auditor runs a
forecaster over an outcome stream and keeps, for every rule, the count and
discrepancy sum of the days it selected.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .core import ONE_PLUS_ULP, BucketStats, Prefix, check_bit, is_valid_forecast
from .errors import ConfigError, InputError, InvalidForecastError, PriorContradicted
from .forecasters import Forecaster


class SelectionRule:
    """Base class.  ``selects`` receives the prefix before the day and that day's forecast, nothing else."""

    name = "rule"

    def selects(self, prefix: Sequence[int], forecast: float) -> bool:
        raise NotImplementedError

    def descriptor(self) -> Any:
        raise NotImplementedError

    def __call__(self, prefix: Sequence[int], forecast: float) -> bool:
        return self.selects(prefix, forecast)


@dataclass(frozen=True)
class HighRule(SelectionRule):
    name = "high"

    def selects(self, prefix, forecast):
        return forecast >= 0.5

    def descriptor(self):
        return "high"


@dataclass(frozen=True)
class LowRule(SelectionRule):
    name = "low"

    def selects(self, prefix, forecast):
        return forecast < 0.5

    def descriptor(self):
        return "low"


@dataclass(frozen=True)
class AllDaysRule(SelectionRule):
    name = "all"

    def selects(self, prefix, forecast):
        return True

    def descriptor(self):
        return "all"


@dataclass(frozen=True)
class BandRule(SelectionRule):
    """Days with lo <= forecast < hi.  Pass ``hi=ONE_PLUS_ULP`` to include forecasts of exactly 1."""

    lo: float
    hi: float

    def __post_init__(self):
        for key in ("lo", "hi"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"must be a finite number, got {v!r}", key)
        if not (0.0 <= self.lo < self.hi <= ONE_PLUS_ULP):
            raise ConfigError(f"need 0 <= lo < hi <= 1 + ulp, got lo={self.lo!r}, hi={self.hi!r}", "band")

    @property
    def name(self):
        hi = "1+ulp" if self.hi == ONE_PLUS_ULP else repr(self.hi)
        return f"band[{self.lo!r},{hi})"

    def selects(self, prefix, forecast):
        return self.lo <= forecast < self.hi

    def descriptor(self):
        return {"type": "band", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class ParityRule(SelectionRule):
    """Days k with k = r (mod m); the day index is len(prefix) + 1."""

    m: int
    r: int

    def __post_init__(self):
        for key in ("m", "r"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"must be an integer, got {v!r}", key)
        if self.m < 1 or not 0 <= self.r < self.m:
            raise ConfigError(f"need m >= 1 and 0 <= r < m, got m={self.m}, r={self.r}", "parity")

    @property
    def name(self):
        return f"parity[{self.r}mod{self.m}]"

    def selects(self, prefix, forecast):
        return (len(prefix) + 1) % self.m == self.r

    def descriptor(self):
        return {"type": "parity", "m": self.m, "r": self.r}


@dataclass(frozen=True)
class PrevBitRule(SelectionRule):
    """Days whose previous bit equals ``b``; never day 1."""

    b: int

    def __post_init__(self):
        if isinstance(self.b, bool) or self.b not in (0, 1):
            raise ConfigError(f"must be 0 or 1, got {self.b!r}", "b")

    @property
    def name(self):
        return f"prev_bit[{self.b}]"

    def selects(self, prefix, forecast):
        return len(prefix) > 0 and prefix[-1] == self.b

    def descriptor(self):
        return {"type": "prev_bit", "b": self.b}


@dataclass(frozen=True)
class AllOfRule(SelectionRule):
    """Conjunction of other rules, e.g. high-forecast days that follow a 1."""

    rules: tuple[SelectionRule, ...]

    def __post_init__(self):
        if not self.rules:
            raise ConfigError("needs at least one rule", "all_of")
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def name(self):
        return "&".join(r.name for r in self.rules)

    def selects(self, prefix, forecast):
        return all(r.selects(prefix, forecast) for r in self.rules)

    def descriptor(self):
        return {"type": "all_of", "rules": [r.descriptor() for r in self.rules]}


def high_rule() -> HighRule:
    return HighRule()


def low_rule() -> LowRule:
    return LowRule()


def all_days_rule() -> AllDaysRule:
    return AllDaysRule()


def band_rule(lo: float, hi: float) -> BandRule:
    return BandRule(lo, hi)


def parity_rule(m: int, r: int) -> ParityRule:
    return ParityRule(m, r)


def prev_bit_rule(b: int) -> PrevBitRule:
    return PrevBitRule(b)


def all_of(*rules: SelectionRule) -> AllOfRule:
    return AllOfRule(tuple(rules))


_SIMPLE = {"high": HighRule, "low": LowRule, "all": AllDaysRule, "all_days": AllDaysRule}


def rule_from_descriptor(desc: Any, path: str = "rules") -> SelectionRule:
    """``"high"``, ``"low"``, ``"all"`` or an object such as ``{"type": "band", "lo": 0.9, "hi": 1.0}``.

    A band with ``hi`` of exactly 1.0 is widened to 1 + ulp so it includes forecasts of 1.
    """
    if isinstance(desc, str):
        if desc in _SIMPLE:
            return _SIMPLE[desc]()
        raise ConfigError(f"unknown rule {desc!r}", path)
    if not isinstance(desc, Mapping):
        raise ConfigError("must be a rule name or an object", path)
    kind = desc.get("type")
    params = {k: v for k, v in desc.items() if k != "type"}
    expected = {"band": {"lo", "hi"}, "parity": {"m", "r"}, "prev_bit": {"b"}, "all_of": {"rules"}}
    if kind in _SIMPLE and not params:
        return _SIMPLE[kind]()
    if kind not in expected:
        raise ConfigError(f"unknown rule type {kind!r}", f"{path}.type")
    if set(params) != expected[kind]:
        raise ConfigError(f"expected keys {sorted(expected[kind])}, got {sorted(params)}", path)
    try:
        if kind == "band":
            hi = params["hi"]
            if hi == 1.0 and not isinstance(hi, bool):
                hi = ONE_PLUS_ULP
            return BandRule(params["lo"], hi)
        if kind == "parity":
            return ParityRule(params["m"], params["r"])
        if kind == "prev_bit":
            return PrevBitRule(params["b"])
        subs = params["rules"]
        if not isinstance(subs, list):
            raise ConfigError("must be a list", "rules")
        return AllOfRule(tuple(rule_from_descriptor(s, f"{path}.rules[{i}]") for i, s in enumerate(subs)))
    except ConfigError as exc:
        if exc.field and exc.field.startswith(path):
            raise
        raise ConfigError(str(exc).split(": ", 1)[-1], f"{path}.{exc.field}" if exc.field else path) from None


def rule_descriptor(rule: SelectionRule) -> Any:
    d = rule.descriptor()
    if isinstance(d, dict) and d.get("type") == "band" and d["hi"] == ONE_PLUS_ULP:
        d = dict(d, hi=1.0)
    return d


# -- auditing -----------------------------------------------------------------------


def default_checkpoints(horizon: int) -> list[int]:
    """Every power of two up to ``horizon``, plus ``horizon`` itself."""
    days, k = [], 1
    while k < horizon:
        days.append(k)
        k *= 2
    days.append(horizon)
    return days


@dataclass(frozen=True)
class Checkpoint:
    day: int
    rule: str
    count: int
    mean: float | None


@dataclass(frozen=True)
class CalibrationAudit:
    rule_names: tuple[str, ...]
    stats: dict[str, BucketStats]
    checkpoints: tuple[Checkpoint, ...]
    horizon: int
    outcomes: Prefix = field(repr=False, default=())
    forecasts: tuple[float, ...] = field(repr=False, default=())

    def mean(self, rule: str) -> float | None:
        return self.stats[rule].mean

    def to_csv(self) -> str:
        return audit_to_csv(self)


def _checkpoint_schedule(horizon: int, checkpoints: Iterable[int] | None) -> list[int]:
    if checkpoints is None:
        return default_checkpoints(horizon)
    days = sorted({int(d) for d in checkpoints})
    if any(d < 1 or d > horizon for d in days):
        raise ConfigError(f"checkpoint days must lie in [1, {horizon}]", "checkpoints")
    return days


def audit(
    forecaster: Forecaster,
    outcomes: Iterable[int],
    rules: Sequence[SelectionRule],
    horizon: int,
    checkpoints: Iterable[int] | None = None,
    keep_trace: bool = False,
) -> CalibrationAudit:
    """Run ``forecaster`` over ``outcomes`` for ``horizon`` days and fold each day's discrepancy into every selecting rule.

    The forecaster is queried once per day.  ``checkpoints`` defaults to
    powers of two plus the horizon; at each one the (count, mean) of every
    rule is logged.  With ``keep_trace`` the realized bits and forecasts are
    kept on the result.
    """
    if horizon < 1:
        raise ConfigError("horizon must be >= 1", "horizon")
    if not rules:
        raise ConfigError("at least one selection rule is required", "rules")
    names = [r.name for r in rules]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate rule names {names}", "rules")
    schedule = _checkpoint_schedule(horizon, checkpoints)

    n_rules = len(rules)
    counts = [0] * n_rules
    sums = [0.0] * n_rules
    comps = [0.0] * n_rules
    pairs = list(enumerate(r.selects for r in rules))
    ev = forecaster.evaluator()
    forecast, update = ev.forecast, ev.update
    bits: list[int] = []
    push = bits.append
    forecasts: list[float] = []
    log: list[Checkpoint] = []
    it = iter(outcomes)
    next_cp = 0
    cp_day = schedule[0]

    for day in range(1, horizon + 1):
        try:
            p = forecast()
        except (ArithmeticError, IndexError, PriorContradicted) as exc:
            raise InvalidForecastError(day, reason=str(exc)) from exc
        if p.__class__ is not float or not 0.0 <= p <= 1.0:
            if not is_valid_forecast(p):
                raise InvalidForecastError(day, p)
        try:
            a = next(it)
        except StopIteration:
            raise InputError(f"outcome stream exhausted after {day - 1} of {horizon} days") from None
        if a != 0 and a != 1:
            a = check_bit(a)
        d = a - p
        # rules see the bits before today and today's forecast only
        for i, sel in pairs:
            if sel(bits, p):
                counts[i] += 1
                # inlined compensated_add
                s = sums[i]
                t = s + d
                bp = t - s
                comps[i] += (s - (t - bp)) + (d - bp)
                sums[i] = t
        push(a)
        update(a)
        if keep_trace:
            forecasts.append(p)
        if day == cp_day:
            for i in range(n_rules):
                c = counts[i]
                log.append(Checkpoint(day, names[i], c, (sums[i] + comps[i]) / c if c else None))
            next_cp += 1
            cp_day = schedule[next_cp] if next_cp < len(schedule) else 0

    return CalibrationAudit(
        rule_names=tuple(names),
        stats={n: BucketStats(counts[i], sums[i], comps[i]) for i, n in enumerate(names)},
        checkpoints=tuple(log),
        horizon=horizon,
        outcomes=tuple(bits) if keep_trace else (),
        forecasts=tuple(forecasts),
    )


# -- verdicts -------------------------------------------------------------------------

CONSISTENT = "consistent-with-calibration"
VIOLATION = "violation"
INSUFFICIENT = "insufficient-data"


@dataclass(frozen=True)
class RuleVerdict:
    count: int
    final_mean: float | None
    max_tail_abs_mean: float | None
    status: str


@dataclass(frozen=True)
class AuditVerdict:
    tolerance: float
    burn_in: int
    rules: dict[str, RuleVerdict]

    def to_dict(self) -> dict[str, Any]:
        return {
            "tolerance": self.tolerance,
            "burn_in": self.burn_in,
            "rules": {
                name: {
                    "count": v.count,
                    "final_mean": v.final_mean,
                    "max_tail_abs_mean": v.max_tail_abs_mean,
                    "status": v.status,
                }
                for name, v in self.rules.items()
            },
        }


def verdict(result: CalibrationAudit, tolerance: float, burn_in: int = 100) -> AuditVerdict:
    """Finite-horizon report per rule.

    A rule with fewer than ``burn_in`` selected days is insufficient-data.
    Otherwise it is a violation when |mean| reached ``tolerance`` at any
    checkpoint where the rule had already selected ``burn_in`` days.
    """
    if not tolerance > 0:
        raise ConfigError("must be > 0", "tolerance")
    out = {}
    for name in result.rule_names:
        st = result.stats[name]
        tail = [abs(c.mean) for c in result.checkpoints if c.rule == name and c.count >= burn_in and c.mean is not None]
        worst = max(tail) if tail else None
        if st.count < burn_in or st.count == 0:
            status = INSUFFICIENT
        elif worst is not None and worst >= tolerance:
            status = VIOLATION
        else:
            status = CONSISTENT
        out[name] = RuleVerdict(st.count, st.mean, worst, status)
    return AuditVerdict(tolerance, burn_in, out)


# -- serialization ------------------------------------------------------------------


def fmt_float(x: float | None) -> str:
    """17 significant digits, enough to round-trip any double."""
    return "" if x is None else format(x, ".17g")


def audit_to_csv(result: CalibrationAudit) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["day", "rule", "count", "mean"])
    for c in result.checkpoints:
        w.writerow([c.day, c.rule, c.count, fmt_float(c.mean)])
    return buf.getvalue()
