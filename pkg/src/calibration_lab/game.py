"""The Banach-Mazur game on Cantor space.

Basic open sets are the cylinders B_w of sequences starting with a finite
string w, so a move is just a nonempty bit string and playing inside the
previous set means appending to the prefix built so far.  Player 1 may use
any strategy; Player 2 always answers with ``player2_turn``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from . import rng
from .adversary import checked_forecast, player2_turn
from .core import BucketStats, Prefix, parse_prefix, render_prefix
from .errors import ConfigError, StrategyError
from .forecasters import Forecaster


class Player1Strategy:
    seed: int | None = None

    def next_string(self, current_prefix: Sequence[int], forecaster: Forecaster) -> Prefix:
        raise NotImplementedError

    def descriptor(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class P1Fixed(Player1Strategy):
    string: Prefix

    def __post_init__(self):
        s = parse_prefix(self.string) if isinstance(self.string, str) else tuple(self.string)
        if not s:
            raise ConfigError("fixed Player-1 string must be nonempty", "string")
        object.__setattr__(self, "string", s)

    def next_string(self, current_prefix, forecaster):
        return self.string

    def descriptor(self):
        return {"type": "fixed", "string": render_prefix(self.string)}


def _check_n_seed(n, seed):
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigError(f"must be an integer >= 1, got {n!r}", "n")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"must be a nonnegative integer, got {seed!r}", "seed")


# Both seeded strategies key their randomness to the absolute day index, so
# the bit Player 1 plays on day k is a pure function of (seed, k, prefix).


@dataclass(frozen=True)
class P1Random(Player1Strategy):
    n: int
    seed: int

    def __post_init__(self):
        _check_n_seed(self.n, self.seed)

    def next_string(self, current_prefix, forecaster):
        start = len(current_prefix) + 1
        return tuple(1 if rng.uniform_at(self.seed, k) < 0.5 else 0 for k in range(start, start + self.n))

    def descriptor(self):
        return {"type": "random", "n": self.n, "seed": self.seed}


@dataclass(frozen=True)
class P1PredictiveSampler(Player1Strategy):
    """Plays n bits, each a 1 with the forecaster's own probability for that day."""

    n: int
    seed: int

    def __post_init__(self):
        _check_n_seed(self.n, self.seed)

    def next_string(self, current_prefix, forecaster):
        ev = forecaster.evaluator_at(current_prefix)
        out = []
        k = len(current_prefix)
        for _ in range(self.n):
            k += 1
            a = 1 if rng.uniform_at(self.seed, k) < ev.forecast() else 0
            out.append(a)
            ev.update(a)
        return tuple(out)

    def descriptor(self):
        return {"type": "predictive_sampler", "n": self.n, "seed": self.seed}


def p1_fixed(string: str | Sequence[int]) -> P1Fixed:
    return P1Fixed(string)


def p1_random(n: int, seed: int) -> P1Random:
    return P1Random(n, seed)


def p1_predictive_sampler(n: int, seed: int) -> P1PredictiveSampler:
    return P1PredictiveSampler(n, seed)


def p1_from_descriptor(desc: Any, path: str = "p1") -> Player1Strategy:
    if not isinstance(desc, dict):
        raise ConfigError("must be an object", path)
    kind = desc.get("type")
    params = {k: v for k, v in desc.items() if k != "type"}
    expected = {"fixed": {"string"}, "random": {"n", "seed"}, "predictive_sampler": {"n", "seed"}}
    if kind not in expected:
        raise ConfigError(f"unknown Player-1 strategy {kind!r}", f"{path}.type")
    if set(params) != expected[kind]:
        raise ConfigError(f"expected keys {sorted(expected[kind])}, got {sorted(params)}", path)
    try:
        if kind == "fixed":
            if not isinstance(params["string"], str):
                raise ConfigError("must be a '0'/'1' string", "string")
            return P1Fixed(params["string"])
        if kind == "random":
            return P1Random(params["n"], params["seed"])
        return P1PredictiveSampler(params["n"], params["seed"])
    except ConfigError as exc:
        raise ConfigError(str(exc).split(": ", 1)[-1], f"{path}.{exc.field}" if exc.field else path) from None


# -- playing ------------------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    player: int
    string: Prefix
    high: BucketStats  # cumulative, after this move
    low: BucketStats
    day_count_after: int
    condition: str | None = None


@dataclass(frozen=True)
class GameTranscript:
    forecaster: dict[str, Any]
    player1: dict[str, Any]
    moves: tuple[Move, ...]
    rounds: int
    seed: int | None = None

    def sequence(self) -> Prefix:
        return transcript_to_sequence(self)

    def to_jsonl(self) -> str:
        return transcript_to_jsonl(self)


def transcript_to_sequence(t: GameTranscript) -> Prefix:
    out: list[int] = []
    for m in t.moves:
        out.extend(m.string)
    return tuple(out)


def play_game(
    forecaster: Forecaster,
    p1: Player1Strategy,
    rounds: int,
    cap_per_turn: int | None = None,
    debug: bool = False,
) -> GameTranscript:
    """Alternate Player 1's strings with Player 2's turns for ``rounds`` rounds.

    Bucket statistics run over the whole realized prefix, Player 1's days
    included.  ``cap_per_turn`` defaults to the 3*k0 + 1 termination bound.
    """
    if isinstance(rounds, bool) or not isinstance(rounds, int) or rounds < 1:
        raise ConfigError("rounds must be an integer >= 1", "rounds")
    prefix: list[int] = []
    ev = forecaster.evaluator()
    high, low = BucketStats(), BucketStats()
    moves: list[Move] = []

    for _ in range(rounds):
        s = tuple(p1.next_string(tuple(prefix), forecaster))
        if not s or any(b not in (0, 1) for b in s):
            raise StrategyError(f"Player 1 returned an illegal move {s!r}; moves must be nonempty bit strings")
        for a in s:
            day = len(prefix) + 1
            p = checked_forecast(ev, day)
            if p >= 0.5:
                high = high.update(a - p)
            else:
                low = low.update(a - p)
            prefix.append(a)
            ev.update(a)
        moves.append(Move(1, s, high, low, len(prefix)))

        turn = player2_turn(forecaster, prefix, high, low, cap=cap_per_turn, evaluator=ev, debug=debug)
        prefix.extend(turn.extension)
        high, low = turn.high, turn.low
        moves.append(Move(2, turn.extension, high, low, len(prefix), turn.condition))

    return GameTranscript(forecaster.descriptor(), p1.descriptor(), tuple(moves), rounds, p1.seed)


def transcript_to_jsonl(t: GameTranscript) -> str:
    lines = []
    for i, m in enumerate(t.moves):
        rec = {
            "move_index": i,
            "player": m.player,
            "string": render_prefix(m.string),
            "day_count_after": m.day_count_after,
            "low_count": m.low.count,
            "low_mean": m.low.mean,
            "high_count": m.high.count,
            "high_mean": m.high.mean,
            "condition": m.condition,
        }
        lines.append(json.dumps(rec))
    return "".join(line + "\n" for line in lines)
