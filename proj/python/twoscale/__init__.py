"""Two-time-scale battery management: thin wrapper over the C++ pipeline."""
import json
from pathlib import Path

from ._twoscale import (
    ConfigError,
    MissingDependency,
    VerificationFailure,
    complexity,
    config_hash,
    default_config,
    load_config,
    normalize_config,
    oracle_suite,
    run_all,
    run_stage,
)

STAGES = ("fit", "intraday", "bellman", "simulate", "report", "verify")


def read_report(out):
    """bound_report.json of a finished run, as a dict."""
    return json.loads((Path(out) / "report" / "bound_report.json").read_text())


__all__ = [
    "ConfigError", "MissingDependency", "VerificationFailure", "STAGES",
    "complexity", "config_hash", "default_config", "load_config", "normalize_config",
    "oracle_suite", "read_report", "run_all", "run_stage",
]
