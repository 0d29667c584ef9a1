"""
Physics Module - Apertures, Steering and Near-Field Propagation
"""

from .geometry import ArrayGeometry, CarrierConfig, Direction, make_planar_array, steering_vector
from .propagation import CouplingMatrix, UserChannel, cascade_gain, near_field_coupling, user_channel

__all__ = [
    "ArrayGeometry",
    "CarrierConfig",
    "Direction",
    "make_planar_array",
    "steering_vector",
    "CouplingMatrix",
    "UserChannel",
    "cascade_gain",
    "near_field_coupling",
    "user_channel",
]
