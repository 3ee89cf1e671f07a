"""Experiment configuration: a strict, versioned JSON document.

Example::

    {
      "schema_version": 1,
      "forecaster": {"type": "beta_bernoulli", "alpha": 1, "beta": 1},
      "nature": {"iid": {"theta": 0.5}},
      "rules": ["all", "high", "low"],
      "horizon": 10000,
      "tolerance": 0.05,
      "seed": 7,
      "out": "results"
    }

``nature`` holds exactly one of ``iid`` ({"theta": p}), ``file``
({"path": "bits.txt"}), ``adversarial`` ({}) or ``predictive`` ({}).
Stochastic natures draw from the top-level ``seed``, which is then required.
Optional sections ``game`` ({"p1": {...}, "rounds": n, "cap_per_turn": n|null})
and ``mc`` ({"runs": n, "workers": n}) configure the game and Monte Carlo
commands.  Unknown keys anywhere are errors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .forecasters import Forecaster, forecaster_from_descriptor
from .game import Player1Strategy, p1_from_descriptor
from .selection import SelectionRule, rule_descriptor, rule_from_descriptor

SCHEMA_VERSION = 1
DEFAULT_RULES = ("all", "high", "low")

_TOP_KEYS = {
    "schema_version", "forecaster", "nature", "rules", "horizon", "checkpoints",
    "tolerance", "burn_in", "seed", "out", "game", "mc",
}
_NATURE_KEYS = {"iid": {"theta"}, "file": {"path"}, "adversarial": set(), "predictive": set()}


@dataclass(frozen=True)
class Nature:
    kind: str
    theta: float | None = None
    path: Path | None = None

    @property
    def stochastic(self) -> bool:
        return self.kind in ("iid", "predictive")

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "iid":
            return {"iid": {"theta": self.theta}}
        if self.kind == "file":
            return {"file": {"path": str(self.path)}}
        return {self.kind: {}}


@dataclass(frozen=True)
class GameConfig:
    p1: Player1Strategy
    rounds: int
    cap_per_turn: int | None = None


@dataclass(frozen=True)
class McConfig:
    runs: int
    workers: int = 1


@dataclass(frozen=True)
class ExperimentConfig:
    forecaster: Forecaster
    rules: tuple[SelectionRule, ...]
    nature: Nature | None = None
    horizon: int | None = None
    checkpoints: tuple[int, ...] | None = None
    tolerance: float | None = None
    burn_in: int = 100
    seed: int | None = None
    out: Path | None = None
    game: GameConfig | None = None
    mc: McConfig | None = None

    def to_dict(self) -> dict[str, Any]:
        """Canonical form; loading it back yields an equal config."""
        return {
            "schema_version": SCHEMA_VERSION,
            "forecaster": self.forecaster.descriptor(),
            "nature": self.nature.to_dict() if self.nature else None,
            "rules": [rule_descriptor(r) for r in self.rules],
            "horizon": self.horizon,
            "checkpoints": list(self.checkpoints) if self.checkpoints is not None else None,
            "tolerance": self.tolerance,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "out": str(self.out) if self.out is not None else None,
            "game": (
                {"p1": self.game.p1.descriptor(), "rounds": self.game.rounds, "cap_per_turn": self.game.cap_per_turn}
                if self.game
                else None
            ),
            "mc": {"runs": self.mc.runs, "workers": self.mc.workers} if self.mc else None,
        }

    def with_overrides(self, seed: int | None = None, horizon: int | None = None, out: str | Path | None = None) -> ExperimentConfig:
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=_int(seed, "seed", minimum=0))
        if horizon is not None:
            cfg = replace(cfg, horizon=_int(horizon, "horizon", minimum=1))
            if cfg.checkpoints and max(cfg.checkpoints) > cfg.horizon:
                raise ConfigError(f"checkpoint days exceed horizon {cfg.horizon}", "checkpoints")
        if out is not None:
            cfg = replace(cfg, out=Path(out))
        return cfg

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError("required for this command", name)


def _int(value: Any, field: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"must be an integer, got {value!r}", field)
    if minimum is not None and value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", field)
    return value


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"must be a finite number, got {value!r}", field)
    return value


def _nature(raw: Any, base_dir: Path) -> Nature:
    if not isinstance(raw, dict):
        raise ConfigError("must be an object", "nature")
    unknown = set(raw) - set(_NATURE_KEYS)
    if unknown:
        raise ConfigError(f"unknown nature(s) {sorted(unknown)}", "nature")
    if len(raw) != 1:
        raise ConfigError(f"exactly one of {sorted(_NATURE_KEYS)} is required, got {sorted(raw)}", "nature")
    (kind, params), = raw.items()
    path = f"nature.{kind}"
    if not isinstance(params, dict):
        raise ConfigError("must be an object", path)
    if set(params) != _NATURE_KEYS[kind]:
        raise ConfigError(f"expected keys {sorted(_NATURE_KEYS[kind])}, got {sorted(params)}", path)
    if kind == "iid":
        theta = _number(params["theta"], f"{path}.theta")
        if not 0.0 <= theta <= 1.0:
            raise ConfigError(f"must lie in [0, 1], got {theta}", f"{path}.theta")
        return Nature("iid", theta=theta)
    if kind == "file":
        p = params["path"]
        if not isinstance(p, str):
            raise ConfigError("must be a string", f"{path}.path")
        resolved = (Path(p) if Path(p).is_absolute() else base_dir / p).resolve()
        if not resolved.is_file():
            raise ConfigError(f"file not found: {resolved}", f"{path}.path")
        return Nature("file", path=resolved)
    return Nature(kind)


def config_from_dict(raw: Any, base_dir: Path | str = ".") -> ExperimentConfig:
    base_dir = Path(base_dir)
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)}", ", ".join(sorted(unknown)))
    if "schema_version" not in raw:
        raise ConfigError("missing", "schema_version")
    if raw["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported version {raw['schema_version']!r}; expected {SCHEMA_VERSION}", "schema_version")
    if "forecaster" not in raw:
        raise ConfigError("missing", "forecaster")
    forecaster = forecaster_from_descriptor(raw["forecaster"], "forecaster")

    rules_raw = raw.get("rules")
    if rules_raw is None:
        rules_raw = list(DEFAULT_RULES)
    if not isinstance(rules_raw, list) or not rules_raw:
        raise ConfigError("must be a nonempty list", "rules")
    rules = tuple(rule_from_descriptor(r, f"rules[{i}]") for i, r in enumerate(rules_raw))
    names = [r.name for r in rules]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate rules {names}", "rules")

    nature = _nature(raw["nature"], base_dir) if raw.get("nature") is not None else None
    horizon = _int(raw["horizon"], "horizon", 1) if raw.get("horizon") is not None else None

    checkpoints = None
    if raw.get("checkpoints") is not None:
        cps = raw["checkpoints"]
        if not isinstance(cps, list) or not cps:
            raise ConfigError("must be a nonempty list of day numbers or null", "checkpoints")
        days = [_int(d, f"checkpoints[{i}]", 1) for i, d in enumerate(cps)]
        if any(b <= a for a, b in zip(days, days[1:])):
            raise ConfigError("days must be strictly increasing", "checkpoints")
        if horizon is not None and days[-1] > horizon:
            raise ConfigError(f"last checkpoint {days[-1]} exceeds horizon {horizon}", "checkpoints")
        checkpoints = tuple(days)

    tolerance = None
    if raw.get("tolerance") is not None:
        tolerance = _number(raw["tolerance"], "tolerance")
        if tolerance <= 0:
            raise ConfigError("must be > 0", "tolerance")
    burn_in = _int(raw["burn_in"], "burn_in", 0) if raw.get("burn_in") is not None else 100
    seed = _int(raw["seed"], "seed", 0) if raw.get("seed") is not None else None
    out = None
    if raw.get("out") is not None:
        if not isinstance(raw["out"], str):
            raise ConfigError("must be a string", "out")
        out = Path(raw["out"])

    game = None
    if raw.get("game") is not None:
        g = raw["game"]
        if not isinstance(g, dict):
            raise ConfigError("must be an object", "game")
        extra = set(g) - {"p1", "rounds", "cap_per_turn"}
        if extra:
            raise ConfigError(f"unknown key(s) {sorted(extra)}", "game")
        for key in ("p1", "rounds"):
            if key not in g:
                raise ConfigError("missing", f"game.{key}")
        cap = _int(g["cap_per_turn"], "game.cap_per_turn", 1) if g.get("cap_per_turn") is not None else None
        game = GameConfig(p1_from_descriptor(g["p1"], "game.p1"), _int(g["rounds"], "game.rounds", 1), cap)

    mc = None
    if raw.get("mc") is not None:
        m = raw["mc"]
        if not isinstance(m, dict):
            raise ConfigError("must be an object", "mc")
        extra = set(m) - {"runs", "workers"}
        if extra:
            raise ConfigError(f"unknown key(s) {sorted(extra)}", "mc")
        if "runs" not in m:
            raise ConfigError("missing", "mc.runs")
        workers = _int(m["workers"], "mc.workers", 1) if m.get("workers") is not None else 1
        mc = McConfig(_int(m["runs"], "mc.runs", 1), workers)

    if nature is not None and nature.stochastic and seed is None:
        raise ConfigError(f"a seed is required for the {nature.kind} nature", "seed")

    return ExperimentConfig(
        forecaster=forecaster,
        rules=rules,
        nature=nature,
        horizon=horizon,
        checkpoints=checkpoints,
        tolerance=tolerance,
        burn_in=burn_in,
        seed=seed,
        out=out,
        game=game,
        mc=mc,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and validate a config file.  Raises ConfigError naming the line or field at fault."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", str(path)) from None
    return config_from_dict(raw, path.parent)
