"""
Aperture Geometry
Planar antenna/metasurface apertures and far-field steering vectors.

Convention: an aperture lies in the plane orthogonal to its normal and
broadside is the normal direction. Directions are (azimuth, elevation)
measured from broadside in the aperture's own frame (normal, u_axis, v_axis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from src.core.exceptions import GeometryError

_UNIT_TOL = 1e-12
_PLANE_TOL = 1e-9


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier wavelength and the reference impedance used by tree networks."""

    wavelength: float
    reference_impedance: float = 50.0

    def __post_init__(self) -> None:
        if not (self.wavelength > 0 and math.isfinite(self.wavelength)):
            raise GeometryError("wavelength must be positive", f"got {self.wavelength}")
        if not (self.reference_impedance > 0 and math.isfinite(self.reference_impedance)):
            raise GeometryError("reference_impedance must be positive", f"got {self.reference_impedance}")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength


@dataclass(frozen=True)
class Direction:
    """Azimuth/elevation in radians, measured from aperture broadside."""

    azimuth: float
    elevation: float = 0.0

    def __post_init__(self) -> None:
        if not -math.pi <= self.azimuth <= math.pi:
            raise GeometryError("azimuth out of range [-pi, pi]", f"got {self.azimuth}")
        if not -math.pi / 2 <= self.elevation <= math.pi / 2:
            raise GeometryError("elevation out of range [-pi/2, pi/2]", f"got {self.elevation}")

    @classmethod
    def from_degrees(cls, azimuth_deg: float, elevation_deg: float = 0.0) -> "Direction":
        return cls(math.radians(azimuth_deg), math.radians(elevation_deg))

    def mirrored(self) -> "Direction":
        """Direction reflected through broadside (azimuth and elevation negated)."""
        return Direction(-self.azimuth, -self.elevation)


def plane_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Orthonormal in-plane axes (u, v) for an aperture with the given normal.

    For normal +x this returns u = +y, v = +z.
    """
    normal = np.asarray(normal, dtype=float)
    ref = np.array([0.0, 0.0, 1.0]) if abs(normal[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u_axis = np.cross(ref, normal)
    u_axis /= np.linalg.norm(u_axis)
    v_axis = np.cross(normal, u_axis)
    return u_axis, v_axis


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Element positions (M x 3, meters), unit normal and element area of a planar aperture."""

    positions: np.ndarray
    normal: np.ndarray
    element_area: float
    rows: int
    cols: int
    u_axis: np.ndarray = field(init=False, repr=False)
    v_axis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        positions = _readonly(self.positions)
        normal = _readonly(self.normal)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "normal", normal)

        if self.rows < 1 or self.cols < 1:
            raise GeometryError("rows and cols must be positive", f"got {self.rows}x{self.cols}")
        if positions.shape != (self.rows * self.cols, 3):
            raise GeometryError(
                "positions do not match the grid",
                f"expected ({self.rows * self.cols}, 3), got {positions.shape}",
            )
        if normal.shape != (3,) or abs(np.linalg.norm(normal) - 1.0) > _UNIT_TOL:
            raise GeometryError("normal must be a unit 3-vector", f"got {normal}")
        if not self.element_area > 0:
            raise GeometryError("element_area must be positive", f"got {self.element_area}")
        if not np.all(np.isfinite(positions)):
            raise GeometryError("positions must be finite")
        offsets = (positions - positions[0]) @ normal
        if np.max(np.abs(offsets)) > _PLANE_TOL:
            raise GeometryError("positions are not coplanar", f"max offset {np.max(np.abs(offsets)):.3e} m")

        u_axis, v_axis = plane_basis(normal)
        object.__setattr__(self, "u_axis", _readonly(u_axis))
        object.__setattr__(self, "v_axis", _readonly(v_axis))

    @property
    def count(self) -> int:
        return self.rows * self.cols

    @property
    def center(self) -> np.ndarray:
        return self.positions.mean(axis=0)

    def direction_vector(self, direction: Direction) -> np.ndarray:
        """Unit propagation vector of a direction expressed in this aperture's frame."""
        az, el = direction.azimuth, direction.elevation
        return (
            math.cos(el) * math.cos(az) * self.normal
            + math.cos(el) * math.sin(az) * self.u_axis
            + math.sin(el) * self.v_axis
        )

    def azimuth_derivative(self, direction: Direction) -> np.ndarray:
        """d(direction_vector)/d(azimuth)."""
        az, el = direction.azimuth, direction.elevation
        return math.cos(el) * (-math.sin(az) * self.normal + math.cos(az) * self.u_axis)

    def translated(self, offset: np.ndarray) -> "ArrayGeometry":
        """Copy of this aperture shifted rigidly by offset (meters)."""
        return ArrayGeometry(
            positions=self.positions + np.asarray(offset, dtype=float),
            normal=self.normal,
            element_area=self.element_area,
            rows=self.rows,
            cols=self.cols,
        )


def make_planar_array(
    rows: int,
    cols: int,
    spacing: float,
    center: tuple[float, float, float] | np.ndarray = (0.0, 0.0, 0.0),
    normal: tuple[float, float, float] | np.ndarray = (1.0, 0.0, 0.0),
    element_area: float | None = None,
) -> ArrayGeometry:
    """
    Build a uniform rectangular grid centred on `center`.

    Elements are ordered row-major (index = row * cols + col); columns run
    along u_axis and rows along v_axis.

    Args:
        rows: Grid rows (>= 1)
        cols: Grid columns (>= 1)
        spacing: Distance between adjacent elements in meters (> 0)
        center: Grid centre (meters)
        normal: Unit normal; broadside direction
        element_area: Element area in m^2; defaults to spacing^2

    Returns:
        ArrayGeometry with rows * cols elements

    Raises:
        GeometryError: On non-positive sizes, zero spacing or a non-unit normal
    """
    if rows < 1 or cols < 1:
        raise GeometryError("rows and cols must be >= 1", f"got {rows}x{cols}")
    if not (spacing > 0 and math.isfinite(spacing)):
        raise GeometryError("spacing must be positive", f"got {spacing}")
    normal = np.asarray(normal, dtype=float)
    if normal.shape != (3,) or abs(np.linalg.norm(normal) - 1.0) > _UNIT_TOL:
        raise GeometryError("normal must be a unit 3-vector", f"got {normal}")

    u_axis, v_axis = plane_basis(normal)
    col_offsets = (np.arange(cols) - (cols - 1) / 2.0) * spacing
    row_offsets = (np.arange(rows) - (rows - 1) / 2.0) * spacing
    rr, cc = np.meshgrid(row_offsets, col_offsets, indexing="ij")
    positions = (
        np.asarray(center, dtype=float)[None, :]
        + cc.reshape(-1, 1) * u_axis[None, :]
        + rr.reshape(-1, 1) * v_axis[None, :]
    )
    return ArrayGeometry(
        positions=positions,
        normal=normal,
        element_area=float(spacing ** 2 if element_area is None else element_area),
        rows=rows,
        cols=cols,
    )


def steering_vector(geom: ArrayGeometry, direction: Direction, carrier: CarrierConfig) -> np.ndarray:
    """
    Far-field steering vector, entry m = exp(+j k <p_m, u(dir)>).

    All entries are unit-modulus; broadside gives all ones for a centred array.
    """
    phase = carrier.wavenumber * (geom.positions @ geom.direction_vector(direction))
    return np.exp(1j * phase)


def steering_derivative(geom: ArrayGeometry, direction: Direction, carrier: CarrierConfig) -> np.ndarray:
    """Derivative of steering_vector with respect to azimuth."""
    k = carrier.wavenumber
    rate = k * (geom.positions @ geom.azimuth_derivative(direction))
    return 1j * rate * steering_vector(geom, direction, carrier)


def steering_matrix(
    geom: ArrayGeometry,
    azimuths: np.ndarray,
    carrier: CarrierConfig,
    elevation: float = 0.0,
) -> np.ndarray:
    """
    Steering vectors for an azimuth cut, one row per angle.

    Returns:
        Complex array of shape (len(azimuths), M)
    """
    azimuths = np.asarray(azimuths, dtype=float)
    ce = math.cos(elevation)
    dirs = (
        ce * np.cos(azimuths)[:, None] * geom.normal[None, :]
        + ce * np.sin(azimuths)[:, None] * geom.u_axis[None, :]
        + math.sin(elevation) * geom.v_axis[None, :]
    )
    return np.exp(1j * carrier.wavenumber * (dirs @ geom.positions.T))
