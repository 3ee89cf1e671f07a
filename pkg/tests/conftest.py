from __future__ import annotations

from dataclasses import dataclass

import pytest

from calibration_lab import (
    beta_bernoulli_forecaster,
    constant_forecaster,
    markov_forecaster,
    mixed_strategy_forecaster,
    mixture_forecaster,
)
from calibration_lab.forecasters import Forecaster

ACCEPTANCE_LINES: list[str] = []


@dataclass(frozen=True)
class HindsightForecaster(Forecaster):
    """Test double that already knows the outcome sequence and forecasts it exactly."""

    outcomes: tuple

    def forecast(self, prefix):
        return float(self.outcomes[len(prefix)])

    def descriptor(self):
        return {"type": "hindsight"}


def builtin_forecasters() -> dict[str, Forecaster]:
    return {
        "constant(0.3)": constant_forecaster(0.3),
        "constant(0.5)": constant_forecaster(0.5),
        "constant(0.7)": constant_forecaster(0.7),
        "beta_bernoulli(1,1)": beta_bernoulli_forecaster(1, 1),
        "markov(1,1)": markov_forecaster(1, 1),
        "mixture(bb,markov)": mixture_forecaster([(beta_bernoulli_forecaster(1, 1), 0.5), (markov_forecaster(1, 1), 0.5)]),
        "mixed(0.2,0.8)": mixed_strategy_forecaster([constant_forecaster(0.2), constant_forecaster(0.8)], [0.5, 0.5], seed=11),
    }


@pytest.fixture(params=list(builtin_forecasters()))
def any_forecaster(request):
    return builtin_forecasters()[request.param]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
