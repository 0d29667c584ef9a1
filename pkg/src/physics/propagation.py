"""
Propagation Models
Near-field aperture-to-aperture coupling (Rayleigh-Sommerfeld kernel),
far-field and near-field user channels, and the cascaded end-to-end gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal, Union

import numpy as np
from scipy import linalg

from src.core.exceptions import DimensionError, GeometryError, SingularityError
from src.core.logger import get_logger
from src.physics.geometry import ArrayGeometry, CarrierConfig, Direction, steering_vector
from src.utils.numerics import sigma_max

logger = get_logger(__name__)


# ═══════════════════════════════════════════════════════════════
# COUPLING
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Complex near-field channel, rx_count x tx_count."""

    entries: np.ndarray
    tx_geom: ArrayGeometry
    rx_geom: ArrayGeometry

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=complex, copy=True)
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        expected = (self.rx_geom.count, self.tx_geom.count)
        if entries.shape != expected:
            raise DimensionError("CouplingMatrix", f"expected {expected}, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise SingularityError("coupling entries must be finite")

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def sigma_max(self) -> float:
        return sigma_max(self.entries)


def near_field_coupling(tx: ArrayGeometry, rx: ArrayGeometry, carrier: CarrierConfig) -> CouplingMatrix:
    """
    Rayleigh-Sommerfeld coupling between two apertures.

    Entry (m, n) = (A_t |cos chi| / d) * (1/(2 pi d) - j/lambda) * exp(j 2 pi d / lambda)
    where d is the distance from tx element n to rx element m and chi the
    angle between the tx normal and the link.

    Raises:
        SingularityError: If any rx element coincides with a tx element
    """
    lam = carrier.wavelength
    link = rx.positions[:, None, :] - tx.positions[None, :, :]
    distance = np.linalg.norm(link, axis=-1)
    if np.any(distance <= 0.0):
        m, n = np.argwhere(distance <= 0.0)[0]
        raise SingularityError("coincident elements", f"rx element {m} coincides with tx element {n}")

    cos_chi = np.abs(link @ tx.normal) / distance
    entries = (
        (tx.element_area * cos_chi / distance)
        * (1.0 / (2.0 * math.pi * distance) - 1j / lam)
        * np.exp(1j * 2.0 * math.pi * distance / lam)
    )
    return CouplingMatrix(entries=entries, tx_geom=tx, rx_geom=rx)


def normalize_passive(coupling: CouplingMatrix, exact: bool = False) -> tuple[CouplingMatrix, float]:
    """
    Scale a coupling so it cannot amplify (sigma_max <= 1).

    Args:
        coupling: Coupling to normalize
        exact: Also scale weaker couplings up, so sigma_max = 1 (a feed whose
            strongest mode delivers all of its power to the surface)

    Returns:
        (normalized coupling, scaling factor); the factor is 1 when the input
        is already passive and exact is False.

    Raises:
        SingularityError: If exact is True and the coupling is all zeros
    """
    smax = coupling.sigma_max
    if smax <= 1.0 and not exact:
        return coupling, 1.0
    if smax == 0.0:
        raise SingularityError("zero coupling cannot be normalized")
    factor = 1.0 / smax
    logger.debug(f"Passivity normalization: sigma_max {smax:.4g} -> 1 (factor {factor:.4g})")
    return replace(coupling, entries=coupling.entries * factor), factor



def lossless_coupling(coupling: CouplingMatrix) -> CouplingMatrix:
    """
    Nearest unitary coupling (polar factor) for a square link between equal apertures.

    Keeps the diffraction phases of the link and drops its power leakage past
    the aperture edges, so energy entering one layer reaches the next.

    Raises:
        DimensionError: If the coupling is not square
    """
    rows, cols = coupling.shape
    if rows != cols:
        raise DimensionError("lossless_coupling", f"expected a square coupling, got {coupling.shape}")
    unitary, _ = linalg.polar(coupling.entries)
    return replace(coupling, entries=unitary)


# ═══════════════════════════════════════════════════════════════
# USER CHANNELS
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class LineOfSight:
    """Pure far-field path toward the UE."""

    gain: complex = 1.0
    tag: Literal["los"] = "los"


@dataclass(frozen=True)
class Rician:
    """Line-of-sight plus `path_count` random planar scattered paths."""

    k_factor: float
    path_count: int = 4
    gain: complex = 1.0
    tag: Literal["rician"] = "rician"

    def __post_init__(self) -> None:
        if not self.k_factor >= 0:
            raise GeometryError("k_factor must be >= 0", f"got {self.k_factor}")
        if self.path_count < 1:
            raise GeometryError("path_count must be >= 1", f"got {self.path_count}")

    @classmethod
    def from_db(cls, k_factor_db: float, path_count: int = 4, gain: complex = 1.0) -> "Rician":
        return cls(k_factor=10.0 ** (k_factor_db / 10.0), path_count=path_count, gain=gain)


@dataclass(frozen=True)
class NearField:
    """UE at `range_m` meters from the aperture centre (spherical wavefront)."""

    range_m: float
    gain: complex = 1.0
    tag: Literal["near_field"] = "near_field"

    def __post_init__(self) -> None:
        if not self.range_m > 0:
            raise GeometryError("near-field range must be positive", f"got {self.range_m}")


ChannelModel = Union[LineOfSight, Rician, NearField]


@dataclass(frozen=True, eq=False)
class UserChannel:
    """Channel from each environment-facing element to the single-antenna UE."""

    gains: np.ndarray
    model: ChannelModel = field(default_factory=LineOfSight)

    def __post_init__(self) -> None:
        gains = np.array(self.gains, dtype=complex, copy=True).reshape(-1)
        gains.flags.writeable = False
        object.__setattr__(self, "gains", gains)
        if not np.all(np.isfinite(gains)):
            raise GeometryError("user channel gains must be finite")

    @property
    def count(self) -> int:
        return self.gains.size


def user_channel(
    env_aperture: ArrayGeometry,
    direction: Direction,
    carrier: CarrierConfig,
    model: ChannelModel,
    rng_seed: int = 0,
) -> UserChannel:
    """
    Draw the UE channel over the environment-facing aperture.

    Args:
        env_aperture: Environment-facing aperture (M elements)
        direction: UE direction in the aperture frame
        carrier: Carrier settings
        model: LineOfSight | Rician | NearField
        rng_seed: Seed for the scattered paths (Rician only)

    Returns:
        UserChannel of length M; deterministic for a fixed seed
    """
    los = steering_vector(env_aperture, direction, carrier)

    if isinstance(model, LineOfSight):
        gains = model.gain * los

    elif isinstance(model, Rician):
        k = model.k_factor
        if math.isinf(k):
            los_weight, nlos_weight = 1.0, 0.0
        else:
            los_weight, nlos_weight = math.sqrt(k / (k + 1.0)), math.sqrt(1.0 / (k + 1.0))
        rng = np.random.default_rng(rng_seed)
        azimuths = rng.uniform(-math.pi / 2, math.pi / 2, model.path_count)
        elevations = rng.uniform(-math.pi / 4, math.pi / 4, model.path_count)
        amplitudes = (rng.standard_normal(model.path_count) + 1j * rng.standard_normal(model.path_count)) / math.sqrt(2.0)
        scattered = np.zeros(env_aperture.count, dtype=complex)
        for az, el, alpha in zip(azimuths, elevations, amplitudes):
            scattered += alpha * steering_vector(env_aperture, Direction(float(az), float(el)), carrier)
        scattered /= math.sqrt(model.path_count)
        gains = model.gain * (los_weight * los + nlos_weight * scattered)

    elif isinstance(model, NearField):
        focus = env_aperture.center + model.range_m * env_aperture.direction_vector(direction)
        distance = np.linalg.norm(env_aperture.positions - focus[None, :], axis=1)
        if np.any(distance <= 0.0):
            raise SingularityError("UE coincides with an aperture element")
        reference = model.range_m
        gains = model.gain * (reference / distance) * np.exp(-1j * carrier.wavenumber * (distance - reference))

    else:
        raise GeometryError("invalid channel model", f"got {model!r}")

    return UserChannel(gains=gains, model=model)


# ═══════════════════════════════════════════════════════════════
# CASCADE
# ═══════════════════════════════════════════════════════════════

def _as_array(value: UserChannel | CouplingMatrix | np.ndarray) -> np.ndarray:
    if isinstance(value, UserChannel):
        return value.gains
    if isinstance(value, CouplingMatrix):
        return value.entries
    return np.asarray(value, dtype=complex)


def cascade_gain(
    h: UserChannel | np.ndarray,
    transmission: np.ndarray,
    coupling: CouplingMatrix | np.ndarray,
    feed: np.ndarray,
) -> complex:
    """
    End-to-end gain h^T T G f.

    Shapes: h (M,), T (M x N), G (N x K), f (K,).

    Raises:
        DimensionError: If the factors do not chain
    """
    h_vec = _as_array(h).reshape(-1)
    t_mat = np.atleast_2d(np.asarray(transmission, dtype=complex))
    g_mat = np.atleast_2d(_as_array(coupling))
    f_vec = np.asarray(feed, dtype=complex).reshape(-1)

    if t_mat.shape[0] != h_vec.size:
        raise DimensionError("cascade_gain", f"h has {h_vec.size} entries but T has {t_mat.shape[0]} rows")
    if t_mat.shape[1] != g_mat.shape[0]:
        raise DimensionError("cascade_gain", f"T has {t_mat.shape[1]} columns but G has {g_mat.shape[0]} rows")
    if g_mat.shape[1] != f_vec.size:
        raise DimensionError("cascade_gain", f"G has {g_mat.shape[1]} columns but f has {f_vec.size} entries")

    return complex(h_vec @ (t_mat @ (g_mat @ f_vec)))
