"""Numeric helpers and trial execution."""

from .numerics import db_to_linear, sigma_max, trial_seed
from .parallel import map_trials

__all__ = ["db_to_linear", "sigma_max", "trial_seed", "map_trials"]
