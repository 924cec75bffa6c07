"""Scenario configuration, Monte Carlo engine and parameter sweeps."""

from .config import ConfigError, ScenarioConfig, config_from_dict, dump_config, load_config
from .csvio import emit_csv, read_csv
from .engine import BERCurve, Channel, TrialResult, build_channel, make_plan, run_point, \
    wilson_halfwidth
from .sweeps import EfficiencyCurve, efficiency_pair, run_ber_vs_conductivity, \
    run_ber_vs_estimation_power, run_ber_vs_snr, run_efficiency_vs_conductivity

__all__ = [
    "BERCurve", "Channel", "ConfigError", "EfficiencyCurve", "ScenarioConfig", "TrialResult",
    "build_channel", "config_from_dict", "dump_config", "efficiency_pair", "emit_csv",
    "load_config", "make_plan", "read_csv", "run_ber_vs_conductivity",
    "run_ber_vs_estimation_power", "run_ber_vs_snr", "run_efficiency_vs_conductivity",
    "run_point", "wilson_halfwidth",
]
