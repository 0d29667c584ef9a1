"""
WaveBench
Physical-layer benchmark of fully digital, hybrid A/D, MiLAC, SIM and
transceiver-integrated BD-RIS front ends.
"""

__version__ = "0.1.0"
