"""
Evaluation Module - Communication, Sensing and Complexity Case Studies
"""

from .comm import CommScenario, run_comm_experiment, spectral_efficiency
from .complexity import ARCHITECTURE_PROFILES, ComplexityReport, complexity_sweep, component_count
from .results import ExperimentResult
from .sensing import SensingScenario, crb_aod, make_sweep_codebook, mle_aod, run_sensing_experiment

__all__ = [
    "CommScenario",
    "run_comm_experiment",
    "spectral_efficiency",
    "ARCHITECTURE_PROFILES",
    "ComplexityReport",
    "complexity_sweep",
    "component_count",
    "ExperimentResult",
    "SensingScenario",
    "crb_aod",
    "make_sweep_codebook",
    "mle_aod",
    "run_sensing_experiment",
]
