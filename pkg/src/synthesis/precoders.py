"""
Baseband-Driven Precoders
Fully digital SVD precoding, its MiLAC circuit realization, and phase-only
hybrid A/D beamforming for a single stream.
"""

from __future__ import annotations

import math

import numpy as np

from src.core.exceptions import DegenerateChannelError
from src.physics.propagation import UserChannel
from src.synthesis.architectures import BeamSolution, PhasePayload, TransmissionPayload
from src.utils.numerics import dominant_right_singular


def _channel_matrix(channel: np.ndarray | UserChannel) -> np.ndarray:
    """Single-UE channels become a 1 x M row."""
    if isinstance(channel, UserChannel):
        return channel.gains[None, :]
    return np.atleast_2d(np.asarray(channel, dtype=complex))


def digital_precoder(channel: np.ndarray | UserChannel) -> BeamSolution:
    """
    Dominant right singular vector precoding.

    Args:
        channel: Channel matrix H (rows = receive antennas) or a UserChannel

    Returns:
        BeamSolution with gain = sigma_max(H) and feed = the precoder itself

    Raises:
        DegenerateChannelError: If H is all-zero
    """
    h_mat = _channel_matrix(channel)
    gain, feed = dominant_right_singular(h_mat)
    return BeamSolution(feed=feed, analog_config=None, effective_beam=feed, gain=gain)


def milac_precoder(channel: np.ndarray | UserChannel, rf_chains: int = 1) -> BeamSolution:
    """
    Microwave linear analog computer realizing the digital precoder.

    The reconfigurable network maps RF chain 0 onto the digital precoder w,
    so the transmission matrix is w e_0^T and the gain is the digital gain.
    """
    digital = digital_precoder(channel)
    feed = np.zeros(rf_chains, dtype=complex)
    feed[0] = 1.0
    transmission = np.outer(digital.effective_beam, feed)
    return BeamSolution(
        feed=feed,
        analog_config=TransmissionPayload(kind="milac", matrix=transmission),
        effective_beam=digital.effective_beam,
        gain=digital.gain,
    )


def hybrid_precoder(channel: np.ndarray | UserChannel, rf_chains: int = 1) -> BeamSolution:
    """
    Phase-only conjugate beamforming.

    With one stream the digital stage is a scalar, so only the unit-modulus
    analog weights matter: w_m = exp(-j arg h_m) / sqrt(M) and
    gain = sum |h_m| / sqrt(M).

    Raises:
        DegenerateChannelError: If h is the zero vector
    """
    h_vec = _channel_matrix(channel).reshape(-1)
    if not np.any(h_vec):
        raise DegenerateChannelError("user channel")
    m = h_vec.size
    phases = np.exp(-1j * np.angle(h_vec))
    beam = phases / math.sqrt(m)
    feed = np.zeros(rf_chains, dtype=complex)
    feed[0] = 1.0
    gain = float(np.sum(np.abs(h_vec)) / math.sqrt(m))
    return BeamSolution(
        feed=feed,
        analog_config=PhasePayload(kind="hybrid", phases=(phases,)),
        effective_beam=beam,
        gain=gain,
    )
