"""
Synthesis Module - Per-Architecture Beam Configuration
"""

from .architectures import ARCHITECTURE_NAMES, ArchitectureSpec, BeamSolution
from .frontend import FrontEnd, FrontendLayout, configure, realizable_sweep_beam

__all__ = [
    "ARCHITECTURE_NAMES",
    "ArchitectureSpec",
    "BeamSolution",
    "FrontEnd",
    "FrontendLayout",
    "configure",
    "realizable_sweep_beam",
]
