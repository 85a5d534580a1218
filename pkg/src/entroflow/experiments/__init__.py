"""Declarative experiment harness: configs, tables, runners, verification."""

from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .runner import run_experiment
from .tables import SCHEMAS, ResultTable, write_metadata, write_table
from .verify import VerifyReport, run_verify

__all__ = [
    "SCHEMAS",
    "ConfigError",
    "ExperimentConfig",
    "ResultTable",
    "VerifyReport",
    "load_config",
    "parse_config",
    "run_experiment",
    "run_verify",
    "write_metadata",
    "write_table",
]
