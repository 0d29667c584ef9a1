"""
Bench Module - Config Files, Runner, Plots and CLI
"""

from .config import BenchConfig, echo_config, parse_config
from .runner import run

__all__ = ["BenchConfig", "echo_config", "parse_config", "run"]
