"""Mellin transforms, cone operators and singular asymptotics near conical points."""

from ._core import *  # noqa: F401,F403
from ._core import Error, InvalidArgument, NumericError, run_command

__version__ = "0.1.0"


def run(command, **config):
    """Run a conecalc subcommand with keyword config; returns (report dict, csv text)."""
    return run_command(command, config)
