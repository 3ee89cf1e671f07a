"""Calibration audits, calibration-defeating adversaries and Banach-Mazur games for sequential binary forecasters."""

from .adversary import (
    HIGH_FIRED,
    LOW_FIRED,
    TurnOutcome,
    adversarial_stream,
    high_low_stats,
    oakes_dawid_bit,
    player2_turn,
    termination_bound,
)
from .bayes_check import McReport, dawid_mc_check, predictive_sample
from .config import ExperimentConfig, config_from_dict, load_config
from .core import (
    BucketStats,
    bucket_update,
    discrepancy,
    fold_discrepancies,
    parse_prefix,
    render_prefix,
)
from .errors import (
    CalibrationLabError,
    ConfigError,
    InputError,
    InvalidForecastError,
    PrefixFormatError,
    PriorContradicted,
    StrategyError,
    TerminationBoundViolated,
)
from .forecasters import (
    BetaBernoulliForecaster,
    ConstantForecaster,
    Forecaster,
    MarkovForecaster,
    MixedStrategyForecaster,
    MixtureComponent,
    MixtureForecaster,
    beta_bernoulli_forecaster,
    constant_forecaster,
    forecaster_from_descriptor,
    markov_forecaster,
    mixed_strategy_forecaster,
    mixture_forecaster,
)
from .game import (
    GameTranscript,
    Move,
    Player1Strategy,
    p1_fixed,
    p1_predictive_sampler,
    p1_random,
    play_game,
    transcript_to_sequence,
)
from .selection import (
    AuditVerdict,
    CalibrationAudit,
    SelectionRule,
    all_days_rule,
    all_of,
    audit,
    band_rule,
    high_rule,
    low_rule,
    parity_rule,
    prev_bit_rule,
    rule_from_descriptor,
    verdict,
)

__version__ = "0.1.0"
