"""Mode-entanglement concurrence of one-dimensional tight-binding chains."""

import csv
import io

from ._tbent import (
    RNG_VERSION,
    ConfigError,
    ConvergenceFailure,
    IoError,
    detect_transition,
    diagonalize,
    hamiltonian,
    pairwise_concurrence,
    participation_ratio,
    potential,
    resolve_config,
    run,
    state_concurrence,
)

__all__ = [
    "RNG_VERSION",
    "ConfigError",
    "ConvergenceFailure",
    "IoError",
    "config_text",
    "detect_transition",
    "diagonalize",
    "hamiltonian",
    "pairwise_concurrence",
    "participation_ratio",
    "potential",
    "read_csv",
    "resolve_config",
    "run",
    "state_concurrence",
]


def config_text(**keys):
    """Config text from keyword arguments, e.g. config_text(command="spectrum", N=200)."""
    return "".join(f"{k} = {v}\n" for k, v in keys.items())


def read_csv(text):
    """Rows of a CSV output as dicts of floats, skipping comment lines."""
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return [{k: float(v) if v else float("nan") for k, v in row.items()} for row in csv.DictReader(io.StringIO(body))]
