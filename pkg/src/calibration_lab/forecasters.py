"""Probabilistic forecasting systems for binary sequences.

A forecaster maps a prefix (the bits seen so far) to the probability that the
next bit is 1.  Forecasters are immutable.  For long runs, ``evaluator()``
hands out a run-local object that consumes bits one at a time and answers in
O(1) per day where the forecaster admits it; it must agree bit-for-bit with
``forecast()`` on the same prefix.

Bayesian forecasters are represented by their one-step predictive rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import rng
from .core import Prefix, check_forecast
from .errors import ConfigError, PriorContradicted


class Evaluator:
    """Incremental view of a forecaster along one growing prefix."""

    def forecast(self) -> float:
        raise NotImplementedError

    def update(self, bit: int) -> None:
        raise NotImplementedError


class _ReplayEvaluator(Evaluator):
    # Fallback for forecasters without a cheap incremental form.
    def __init__(self, forecaster: Forecaster):
        self._f = forecaster
        self._bits: list[int] = []

    def forecast(self) -> float:
        return self._f.forecast(self._bits)

    def update(self, bit: int) -> None:
        self._bits.append(bit)


class Forecaster:
    kind = "abstract"

    def forecast(self, prefix: Sequence[int]) -> float:
        raise NotImplementedError

    def evaluator(self) -> Evaluator:
        return _ReplayEvaluator(self)

    def evaluator_at(self, prefix: Sequence[int]) -> Evaluator:
        """An evaluator that has already consumed ``prefix``."""
        ev = self.evaluator()
        for b in prefix:
            ev.update(b)
        return ev

    def descriptor(self) -> dict[str, Any]:
        raise NotImplementedError

    def __call__(self, prefix: Sequence[int]) -> float:
        return self.forecast(prefix)


def _positive(value: object, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
        raise ConfigError(f"must be a finite number > 0, got {value!r}", name)
    return value


# -- constant -----------------------------------------------------------------


class _ConstantEvaluator(Evaluator):
    __slots__ = ("p",)

    def __init__(self, p: float):
        self.p = p

    def forecast(self) -> float:
        return self.p

    def update(self, bit: int) -> None:
        pass


@dataclass(frozen=True)
class ConstantForecaster(Forecaster):
    p: float
    kind = "constant"

    def __post_init__(self):
        try:
            check_forecast(self.p, "constant forecast")
        except ConfigError as exc:
            raise ConfigError(str(exc), "p") from None

    def forecast(self, prefix: Sequence[int]) -> float:
        return self.p

    def evaluator(self) -> Evaluator:
        return _ConstantEvaluator(self.p)

    def descriptor(self) -> dict[str, Any]:
        return {"type": self.kind, "p": self.p}


def constant_forecaster(c: float) -> ConstantForecaster:
    return ConstantForecaster(c)


# -- Beta-Bernoulli (Laplace's rule when alpha = beta = 1) ---------------------


class _BetaBernoulliEvaluator(Evaluator):
    __slots__ = ("alpha", "total", "ones", "n")

    def __init__(self, alpha: float, beta: float):
        self.alpha = alpha
        self.total = alpha + beta
        self.ones = 0
        self.n = 0

    def forecast(self) -> float:
        return (self.alpha + self.ones) / (self.total + self.n)

    def update(self, bit: int) -> None:
        self.ones += bit
        self.n += 1


@dataclass(frozen=True)
class BetaBernoulliForecaster(Forecaster):
    """Posterior predictive of an i.i.d. coin with a Beta(alpha, beta) prior on its bias.

    forecast(w) = (alpha + ones(w)) / (alpha + beta + len(w))
    """

    alpha: float = 1.0
    beta: float = 1.0
    kind = "beta_bernoulli"

    def __post_init__(self):
        _positive(self.alpha, "alpha")
        _positive(self.beta, "beta")

    def forecast(self, prefix: Sequence[int]) -> float:
        return (self.alpha + sum(prefix)) / ((self.alpha + self.beta) + len(prefix))

    def evaluator(self) -> Evaluator:
        return _BetaBernoulliEvaluator(self.alpha, self.beta)

    def descriptor(self) -> dict[str, Any]:
        return {"type": self.kind, "alpha": self.alpha, "beta": self.beta}


def beta_bernoulli_forecaster(alpha: float, beta: float) -> BetaBernoulliForecaster:
    return BetaBernoulliForecaster(alpha, beta)


# -- order-1 Markov chain with independent Beta priors per state --------------


class _MarkovEvaluator(Evaluator):
    __slots__ = ("alpha", "total", "last", "ones", "exits")

    def __init__(self, alpha: float, beta: float):
        self.alpha = alpha
        self.total = alpha + beta
        self.last = -1
        self.ones = [0, 0]  # transitions s -> 1
        self.exits = [0, 0]  # transitions out of s

    def forecast(self) -> float:
        s = self.last
        if s < 0:
            return self.alpha / self.total
        return (self.alpha + self.ones[s]) / (self.total + self.exits[s])

    def update(self, bit: int) -> None:
        s = self.last
        if s >= 0:
            self.exits[s] += 1
            self.ones[s] += bit
        self.last = bit


@dataclass(frozen=True)
class MarkovForecaster(Forecaster):
    """Bayesian forecaster for a two-state Markov chain.

    The chance of a 1 after state s gets its own Beta(alpha, beta) prior, so the
    forecast uses only transitions out of the current (last) bit.  With no
    observed exits from that state, or on day 1, it is alpha / (alpha + beta).
    """

    alpha: float = 1.0
    beta: float = 1.0
    kind = "markov"

    def __post_init__(self):
        _positive(self.alpha, "alpha")
        _positive(self.beta, "beta")

    def forecast(self, prefix: Sequence[int]) -> float:
        if not prefix:
            return self.alpha / (self.alpha + self.beta)
        s = prefix[-1]
        ones = exits = 0
        for prev, nxt in zip(prefix, prefix[1:]):
            if prev == s:
                exits += 1
                ones += nxt
        return (self.alpha + ones) / ((self.alpha + self.beta) + exits)

    def evaluator(self) -> Evaluator:
        return _MarkovEvaluator(self.alpha, self.beta)

    def descriptor(self) -> dict[str, Any]:
        return {"type": self.kind, "alpha": self.alpha, "beta": self.beta}


def markov_forecaster(alpha: float, beta: float) -> MarkovForecaster:
    return MarkovForecaster(alpha, beta)


# -- finite mixture prior -------------------------------------------------------


@dataclass(frozen=True)
class MixtureComponent:
    base: Forecaster
    weight: float

    def __post_init__(self):
        _positive(self.weight, "weight")


class _MixtureEvaluator(Evaluator):
    def __init__(self, components: Sequence[MixtureComponent]):
        total = sum(c.weight for c in components)
        self.log_w = [math.log(c.weight / total) for c in components]
        self.evs = [c.base.evaluator() for c in components]
        self.n = 0

    def forecast(self) -> float:
        num = den = 0.0
        for lw, ev in zip(self.log_w, self.evs):
            if lw == -math.inf:
                continue
            w = math.exp(lw)
            num += w * ev.forecast()
            den += w
        if den == 0.0:
            raise PriorContradicted(f"prefix of length {self.n} has probability zero under the mixture prior")
        return min(1.0, max(0.0, num / den))

    def update(self, bit: int) -> None:
        log_w = self.log_w
        for i, ev in enumerate(self.evs):
            if log_w[i] == -math.inf:
                continue  # dead components are never revived; stop feeding them
            p = ev.forecast()
            lik = p if bit else 1.0 - p
            log_w[i] = log_w[i] + math.log(lik) if lik > 0.0 else -math.inf
            ev.update(bit)
        top = max(log_w)
        if top > -math.inf:
            self.log_w = [lw - top for lw in log_w]
        self.n += 1


@dataclass(frozen=True)
class MixtureForecaster(Forecaster):
    """Bayesian forecaster whose prior is a finite mixture of other forecasters' priors.

    Each component's posterior weight is its prior weight times the probability
    it gave to the observed prefix.  Weights are carried in log space and
    renormalized every day so long prefixes do not underflow.
    """

    components: tuple[MixtureComponent, ...]
    kind = "mixture"

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ConfigError("a mixture needs at least one component", "components")
        object.__setattr__(self, "components", comps)

    def forecast(self, prefix: Sequence[int]) -> float:
        return self.evaluator_at(prefix).forecast()

    def evaluator(self) -> Evaluator:
        return _MixtureEvaluator(self.components)

    def posterior_weights(self, prefix: Sequence[int]) -> list[float]:
        ev = self.evaluator_at(prefix)
        w = [math.exp(lw) for lw in ev.log_w]
        total = sum(w)
        if total == 0.0:
            raise PriorContradicted(f"prefix of length {len(prefix)} has probability zero under the mixture prior")
        return [x / total for x in w]

    def descriptor(self) -> dict[str, Any]:
        return {
            "type": self.kind,
            "components": [{"weight": c.weight, "forecaster": c.base.descriptor()} for c in self.components],
        }


def mixture_forecaster(components: Sequence[MixtureComponent | tuple[Forecaster, float]]) -> MixtureForecaster:
    comps = tuple(c if isinstance(c, MixtureComponent) else MixtureComponent(*c) for c in components)
    return MixtureForecaster(comps)


# -- randomized choice among deterministic forecasters --------------------------


class _MixedStrategyEvaluator(Evaluator):
    def __init__(self, owner: MixedStrategyForecaster):
        self.owner = owner
        self.evs = [c.evaluator() for c in owner.components]
        self.day = 1

    def forecast(self) -> float:
        return self.evs[self.owner.component_index(self.day)].forecast()

    def update(self, bit: int) -> None:
        for ev in self.evs:
            ev.update(bit)
        self.day += 1


@dataclass(frozen=True)
class MixedStrategyForecaster(Forecaster):
    """Each day, follow one component chosen at random with the given weights.

    The day-k choice uses the k-th variate of the ``seed`` stream, so the whole
    draw sequence is fixed by the seed and does not depend on query order.
    """

    components: tuple[Forecaster, ...]
    weights: tuple[float, ...]
    seed: int
    kind = "mixed_strategy"
    _cumulative: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        comps = tuple(self.components)
        weights = tuple(self.weights)
        if not comps:
            raise ConfigError("needs at least one component", "components")
        if len(weights) != len(comps):
            raise ConfigError(f"expected {len(comps)} weights, got {len(weights)}", "weights")
        for i, w in enumerate(weights):
            if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w) or w < 0:
                raise ConfigError(f"must be a finite number >= 0, got {w!r}", f"weights[{i}]")
        total = sum(weights)
        if total <= 0:
            raise ConfigError("weights must not all be zero", "weights")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"must be a nonnegative integer, got {self.seed!r}", "seed")
        acc, cum = 0.0, []
        for w in weights:
            acc += w / total
            cum.append(acc)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_cumulative", tuple(cum))

    def component_index(self, day: int) -> int:
        u = rng.uniform_at(self.seed, day)
        cum = self._cumulative
        for i, c in enumerate(cum):
            if u < c and self.weights[i] > 0:
                return i
        # u landed in the rounding gap above the last cumulative weight
        return max(i for i, w in enumerate(self.weights) if w > 0)

    def forecast(self, prefix: Sequence[int]) -> float:
        return self.components[self.component_index(len(prefix) + 1)].forecast(prefix)

    def evaluator(self) -> Evaluator:
        return _MixedStrategyEvaluator(self)

    def descriptor(self) -> dict[str, Any]:
        return {
            "type": self.kind,
            "components": [c.descriptor() for c in self.components],
            "weights": list(self.weights),
            "seed": self.seed,
        }


def mixed_strategy_forecaster(components: Sequence[Forecaster], weights: Sequence[float], seed: int) -> MixedStrategyForecaster:
    return MixedStrategyForecaster(tuple(components), tuple(weights), seed)


# -- external forecasts ---------------------------------------------------------


@dataclass(frozen=True)
class ReplayForecaster(Forecaster):
    """Replays a recorded list of forecasts, one per day; a black box for auditing third-party logs."""

    forecasts: tuple[float, ...]
    kind = "replay"

    def forecast(self, prefix: Sequence[int]) -> float:
        k = len(prefix)
        if k >= len(self.forecasts):
            raise IndexError(f"no recorded forecast for day {k + 1}")
        return self.forecasts[k]

    def descriptor(self) -> dict[str, Any]:
        return {"type": self.kind, "days": len(self.forecasts)}


# -- descriptors ------------------------------------------------------------------


def _check_keys(desc: Mapping[str, Any], allowed: set[str], path: str) -> None:
    unknown = set(desc) - allowed - {"type"}
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)}", path)
    missing = allowed - set(desc)
    if missing:
        raise ConfigError(f"missing key(s) {sorted(missing)}", path)


def _reraise(exc: ConfigError, path: str) -> ConfigError:
    return ConfigError(str(exc).split(": ", 1)[-1] if exc.field else str(exc), f"{path}.{exc.field}" if exc.field else path)


def forecaster_from_descriptor(desc: Mapping[str, Any], path: str = "forecaster") -> Forecaster:
    """Build a forecaster from its JSON descriptor, e.g. ``{"type": "beta_bernoulli", "alpha": 1, "beta": 1}``."""
    if not isinstance(desc, Mapping):
        raise ConfigError("must be an object", path)
    kind = desc.get("type")
    try:
        if kind == "constant":
            _check_keys(desc, {"p"}, path)
            return ConstantForecaster(desc["p"])
        if kind in ("beta_bernoulli", "markov"):
            _check_keys(desc, {"alpha", "beta"}, path)
            cls = BetaBernoulliForecaster if kind == "beta_bernoulli" else MarkovForecaster
            return cls(desc["alpha"], desc["beta"])
        if kind == "mixture":
            _check_keys(desc, {"components"}, path)
            comps = desc["components"]
            if not isinstance(comps, list):
                raise ConfigError("must be a list", "components")
            out = []
            for i, c in enumerate(comps):
                cpath = f"{path}.components[{i}]"
                if not isinstance(c, Mapping) or set(c) != {"weight", "forecaster"}:
                    raise ConfigError('must be {"weight": ..., "forecaster": {...}}', cpath)
                base = forecaster_from_descriptor(c["forecaster"], f"{cpath}.forecaster")
                try:
                    out.append(MixtureComponent(base, c["weight"]))
                except ConfigError as exc:
                    raise _reraise(exc, cpath) from None
            return MixtureForecaster(tuple(out))
        if kind == "mixed_strategy":
            _check_keys(desc, {"components", "weights", "seed"}, path)
            comps = desc["components"]
            if not isinstance(comps, list) or not isinstance(desc["weights"], list):
                raise ConfigError("components and weights must be lists", path)
            bases = [forecaster_from_descriptor(c, f"{path}.components[{i}]") for i, c in enumerate(comps)]
            return MixedStrategyForecaster(tuple(bases), tuple(desc["weights"]), desc["seed"])
    except ConfigError as exc:
        if exc.field and exc.field.startswith(path):
            raise
        raise _reraise(exc, path) from None
    raise ConfigError(f"unknown forecaster type {kind!r}", f"{path}.type")
