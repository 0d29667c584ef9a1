"""
Sensing Case Study
Beam sweeping with a unit-modulus codebook, maximum-likelihood AoD estimation
and the Cramer-Rao bound, evaluated on each architecture's realized beams.

Inner products are <a, b> = a^H b, so measurement i is
y_i = beta * a(theta)^H beam_i + n_i with n_i ~ CN(0, 1/snr).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy import linalg, optimize

from src.core.config import settings
from src.core.exceptions import SensingError, UnidentifiableGeometryError, UnobservableError
from src.core.logger import get_logger
from src.evaluation.results import SENSE_COLUMNS, ExperimentResult
from src.physics.geometry import (
    ArrayGeometry,
    CarrierConfig,
    Direction,
    steering_derivative,
    steering_matrix,
    steering_vector,
)
from src.synthesis.architectures import ArchitectureSpec
from src.synthesis.frontend import FrontEnd, realizable_sweep_beam
from src.utils.numerics import db_to_linear, trial_seed
from src.utils.parallel import map_trials

logger = get_logger(__name__)

# Largest acceptable Fisher-matrix condition number
_FIM_CONDITION_LIMIT = 1e12
# Absolute tolerance (rad) of the likelihood-slope root solve
_ROOT_XTOL = 1e-15


# ═══════════════════════════════════════════════════════════════
# CODEBOOK
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class SweepCodebook:
    """Unit-modulus steering codewords (count x M) and the azimuths they point at."""

    codewords: np.ndarray
    beam_angles: np.ndarray

    def __post_init__(self) -> None:
        codewords = np.atleast_2d(np.asarray(self.codewords, dtype=complex))
        angles = np.asarray(self.beam_angles, dtype=float).reshape(-1)
        object.__setattr__(self, "codewords", codewords)
        object.__setattr__(self, "beam_angles", angles)
        if codewords.shape[0] < 2:
            raise SensingError("codebook needs at least two codewords", f"got {codewords.shape[0]}")
        if angles.size != codewords.shape[0]:
            raise SensingError("one beam angle per codeword required")
        if np.max(np.abs(np.abs(codewords) - 1.0)) > 1e-12:
            raise SensingError("codewords must be unit-modulus")

    @property
    def count(self) -> int:
        return self.codewords.shape[0]


def make_sweep_codebook(
    geom: ArrayGeometry,
    count: int,
    sector: tuple[float, float],
    carrier: CarrierConfig,
) -> SweepCodebook:
    """
    Steering vectors at `count` evenly spaced azimuths spanning the sector.

    Args:
        geom: Environment-facing aperture
        count: Number of codewords (>= 2)
        sector: (min, max) azimuth in radians
        carrier: Carrier settings

    Raises:
        SensingError: If count < 2 or the sector is empty
    """
    lo, hi = sector
    if count < 2:
        raise SensingError("codebook needs at least two codewords", f"got {count}")
    if not hi > lo:
        raise SensingError("empty sweep sector", f"got [{lo}, {hi}]")
    angles = np.linspace(lo, hi, count)
    return SweepCodebook(codewords=steering_matrix(geom, angles, carrier), beam_angles=angles)


# ═══════════════════════════════════════════════════════════════
# SCENARIO AND OBSERVATION
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class SensingScenario:
    """Single-target downlink AoD sweep; angles in radians."""

    frontend: FrontEnd
    true_aod: Direction = field(default_factory=lambda: Direction.from_degrees(20.0))
    path_gain: complex = 1.0
    codebook_size: int = 64
    sector: tuple[float, float] = (math.radians(-60.0), math.radians(60.0))
    snr_grid_db: tuple[float, ...] = tuple(float(s) for s in range(-10, 31, 5))
    trials: int = 1000
    seed: int = 1
    grid_resolution: float = math.radians(0.05)

    def __post_init__(self) -> None:
        lo, hi = self.sector
        if not hi > lo:
            raise SensingError("empty sweep sector", f"got [{lo}, {hi}]")
        if not lo <= self.true_aod.azimuth <= hi:
            raise SensingError(
                "true AoD outside the sweep sector",
                f"{math.degrees(self.true_aod.azimuth):.3f} deg not in [{math.degrees(lo):.3f}, {math.degrees(hi):.3f}]",
            )
        if self.trials < 1:
            raise SensingError("trials must be >= 1", f"got {self.trials}")
        if not self.grid_resolution > 0:
            raise SensingError("grid resolution must be positive", f"got {self.grid_resolution}")
        if not self.snr_grid_db or np.any(np.diff(self.snr_grid_db) <= 0):
            raise SensingError("SNR grid must be non-empty and strictly increasing")

    def codebook(self) -> SweepCodebook:
        return make_sweep_codebook(self.frontend.aperture, self.codebook_size, self.sector, self.frontend.carrier)


def beam_responses(geom: ArrayGeometry, beams: np.ndarray, azimuth: float, carrier: CarrierConfig) -> np.ndarray:
    """v_i(theta) = a(theta)^H beam_i for every beam (rows of `beams`)."""
    a = steering_vector(geom, Direction(azimuth), carrier)
    return np.atleast_2d(beams) @ a.conj()


def observe(
    scenario: SensingScenario,
    beams: np.ndarray,
    snr_linear: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    One noisy sweep: y_i = beta <a(theta), beam_i> + n_i.

    Args:
        scenario: True AoD and path gain
        beams: Realized beams, one row per codeword
        snr_linear: Noise variance is 1/snr_linear (inf gives a noiseless sweep)
        rng: Seeded generator for the noise

    Returns:
        Complex measurement vector, one entry per beam
    """
    frontend = scenario.frontend
    clean = scenario.path_gain * beam_responses(frontend.aperture, beams, scenario.true_aod.azimuth, frontend.carrier)
    variance = 0.0 if math.isinf(snr_linear) else 1.0 / snr_linear
    noise = rng.standard_normal(clean.size) + 1j * rng.standard_normal(clean.size)
    return clean + math.sqrt(variance / 2.0) * noise


# ═══════════════════════════════════════════════════════════════
# ESTIMATION
# ═══════════════════════════════════════════════════════════════

class AodEstimator:
    """
    Grid maximum-likelihood AoD estimator for a fixed set of beams.

    The concentrated likelihood |v(theta)^H y|^2 / ||v(theta)||^2 is maximized
    over the grid, then refined by a root solve on the likelihood derivative
    between the peak's neighbours, with a parabola through the three points as
    fallback. A refinement is kept only when it raises the likelihood.
    """

    def __init__(
        self,
        geom: ArrayGeometry,
        beams: np.ndarray,
        carrier: CarrierConfig,
        sector: tuple[float, float],
        resolution: float,
    ) -> None:
        self.geom = geom
        self.carrier = carrier
        self.beams = np.atleast_2d(np.asarray(beams, dtype=complex))
        if self.beams.shape[0] < 2:
            raise SensingError("at least two measurements are required", f"got {self.beams.shape[0]}")
        lo, hi = sector
        steps = int(round((hi - lo) / resolution))
        self.resolution = resolution
        self.grid = lo + np.arange(steps + 1) * resolution
        # responses[g, i] = a(grid_g)^H beam_i
        self.responses = steering_matrix(geom, self.grid, carrier).conj() @ self.beams.T
        self.norms = np.real(np.sum(self.responses * self.responses.conj(), axis=1))
        if not np.any(self.norms > 0):
            raise UnobservableError()

    def _metric(self, y: np.ndarray) -> np.ndarray:
        correlation = np.abs(self.responses.conj() @ y) ** 2
        return np.divide(correlation, self.norms, out=np.zeros_like(correlation), where=self.norms > 0)

    def metric_at(self, y: np.ndarray, azimuth: float) -> float:
        v = beam_responses(self.geom, self.beams, azimuth, self.carrier)
        norm = float(np.real(np.vdot(v, v)))
        return 0.0 if norm == 0.0 else float(abs(np.vdot(v, y)) ** 2 / norm)

    def slope_at(self, y: np.ndarray, azimuth: float) -> float:
        """Derivative of the concentrated likelihood with respect to azimuth."""
        direction = Direction(azimuth)
        v = self.beams @ steering_vector(self.geom, direction, self.carrier).conj()
        dv = self.beams @ steering_derivative(self.geom, direction, self.carrier).conj()
        norm = float(np.real(np.vdot(v, v)))
        if norm == 0.0:
            return 0.0
        c, dc = np.vdot(v, y), np.vdot(dv, y)
        d_norm = 2.0 * float(np.real(np.vdot(dv, v)))
        return (2.0 * float(np.real(c.conjugate() * dc)) * norm - abs(c) ** 2 * d_norm) / norm ** 2

    def _polish(self, y: np.ndarray, lo: float, hi: float) -> float | None:
        slope = partial(self.slope_at, y)
        if not (slope(lo) > 0.0 > slope(hi)):
            return None
        return float(optimize.brentq(slope, lo, hi, xtol=_ROOT_XTOL))

    def estimate(self, y: np.ndarray) -> float:
        """AoD estimate in radians."""
        y = np.asarray(y, dtype=complex).reshape(-1)
        metric = self._metric(y)
        peak = int(np.argmax(metric))
        best = float(self.grid[peak])
        if not 0 < peak < self.grid.size - 1:
            return best
        left, centre, right = metric[peak - 1], metric[peak], metric[peak + 1]

        # Slope root first, parabola as fallback
        candidates = []
        polished = self._polish(y, float(self.grid[peak - 1]), float(self.grid[peak + 1]))
        if polished is not None:
            candidates.append(polished)
        curvature = left - 2.0 * centre + right
        if curvature < 0:
            offset = float(np.clip(0.5 * (left - right) / curvature, -0.5, 0.5))
            candidates.append(best + offset * self.resolution)
        for candidate in candidates:
            if self.metric_at(y, candidate) > centre * (1.0 + 1e-12):
                return candidate
        return best


def mle_aod(
    y: np.ndarray,
    beams: np.ndarray,
    geom: ArrayGeometry,
    carrier: CarrierConfig,
    grid_resolution: float,
    sector: tuple[float, float] = (-math.pi / 2, math.pi / 2),
) -> Direction:
    """
    Maximum-likelihood AoD from one sweep.

    Raises:
        UnobservableError: If every candidate angle has an all-zero response
    """
    estimator = AodEstimator(geom, beams, carrier, sector, grid_resolution)
    return Direction(estimator.estimate(y))


def _jacobian(
    geom: ArrayGeometry,
    beams: np.ndarray,
    path_gain: complex,
    aod: Direction,
    carrier: CarrierConfig,
) -> np.ndarray:
    """D = [beta v'(theta), v(theta), j v(theta)], one row per beam."""
    beams = np.atleast_2d(np.asarray(beams, dtype=complex))
    v = beams @ steering_vector(geom, aod, carrier).conj()
    dv = beams @ steering_derivative(geom, aod, carrier).conj()
    return np.column_stack([path_gain * dv, v, 1j * v])


def fisher_information(
    geom: ArrayGeometry,
    beams: np.ndarray,
    path_gain: complex,
    snr_linear: float,
    aod: Direction,
    carrier: CarrierConfig,
) -> np.ndarray:
    """
    Fisher information for (theta, Re beta, Im beta).

    FIM = 2 snr Re(D^H D) with D = [beta v'(theta), v(theta), j v(theta)].
    """
    jacobian = _jacobian(geom, beams, path_gain, aod, carrier)
    return 2.0 * snr_linear * np.real(jacobian.conj().T @ jacobian)


def crb_aod(
    geom: ArrayGeometry,
    beams: np.ndarray,
    path_gain: complex,
    snr_linear: float,
    aod: Direction,
    carrier: CarrierConfig,
) -> float:
    """
    Cramer-Rao bound on the AoD variance (rad^2).

    Raises:
        SensingError: If snr_linear <= 0
        UnidentifiableGeometryError: If the Fisher matrix is singular
    """
    if not snr_linear > 0:
        raise SensingError("SNR must be positive", f"got {snr_linear}")
    unit_fim = fisher_information(geom, beams, path_gain, 1.0, aod, carrier)
    if not np.all(np.isfinite(unit_fim)) or np.linalg.cond(unit_fim) > _FIM_CONDITION_LIMIT:
        raise UnidentifiableGeometryError()
    try:
        inverse = linalg.inv(unit_fim)
    except linalg.LinAlgError as exc:
        raise UnidentifiableGeometryError(str(exc)) from exc
    return float(inverse[0, 0] / snr_linear)


# ═══════════════════════════════════════════════════════════════
# EXPERIMENT
# ═══════════════════════════════════════════════════════════════

def first_order_weights(
    geom: ArrayGeometry,
    beams: np.ndarray,
    path_gain: complex,
    aod: Direction,
    carrier: CarrierConfig,
) -> np.ndarray:
    """
    w such that Re(w^H n) is the first-order AoD error of the ML estimate.

    Linearizing the model gives delta = Re(D^H D)^-1 Re(D^H n); w is D times
    the first row of that inverse, so E[Re(w^H n)^2] equals the CRB.
    """
    jacobian = _jacobian(geom, beams, path_gain, aod, carrier)
    inverse = linalg.inv(np.real(jacobian.conj().T @ jacobian))
    return jacobian @ inverse[0]


def realize_codebook(
    scenario: SensingScenario,
    spec: ArchitectureSpec,
    codebook: SweepCodebook | None = None,
) -> np.ndarray:
    """Beams the architecture radiates for every codeword, one row each."""
    codebook = codebook or scenario.codebook()
    return np.vstack([
        realizable_sweep_beam(spec, codeword, scenario.frontend, rng_seed=trial_seed(scenario.seed, 2, index))
        for index, codeword in enumerate(codebook.codewords)
    ])


def _excess_squared_error(
    estimator: AodEstimator,
    clean: np.ndarray,
    weights: np.ndarray,
    sigma: float,
    truth: float,
    seed: int,
) -> float:
    """Antithetic pair (n, -n): mean squared error minus the squared first-order error."""
    rng = np.random.default_rng(seed)
    noise = sigma * (rng.standard_normal(clean.size) + 1j * rng.standard_normal(clean.size))
    first_order = float(np.real(np.vdot(weights, noise)))
    pair = [(estimator.estimate(clean + sign * noise) - truth) ** 2 for sign in (1.0, -1.0)]
    return 0.5 * (pair[0] + pair[1]) - first_order ** 2


def run_sensing_experiment(
    scenario: SensingScenario,
    specs: tuple[ArchitectureSpec, ...],
    workers: int | None = None,
) -> ExperimentResult:
    """
    Monte Carlo AoD RMSE and CRB per architecture and SNR.

    Each trial evaluates an antithetic noise pair, and the first-order error
    (whose mean square is the CRB) serves as a control variate:
    MSE = CRB + mean(e^2 - e1^2), clipped at zero. Every architecture sees
    the same noise draws, so architectures with identical realized beams
    produce identical rows.

    Returns:
        ExperimentResult with columns arch, snr_db, rmse_deg, crb_deg, trials
    """
    workers = settings.workers if workers is None else workers
    frontend = scenario.frontend
    aperture, carrier = frontend.aperture, frontend.carrier
    codebook = scenario.codebook()
    truth = scenario.true_aod.azimuth
    logger.info(
        f"Sense experiment: {scenario.trials} trials, {codebook.count} beams, "
        f"AoD {math.degrees(truth):.2f} deg"
    )

    result = ExperimentResult(name="sense", columns=SENSE_COLUMNS)
    for spec in specs:
        beams = realize_codebook(scenario, spec, codebook)
        estimator = AodEstimator(aperture, beams, carrier, scenario.sector, scenario.grid_resolution)
        clean = scenario.path_gain * beam_responses(aperture, beams, truth, carrier)
        weights: np.ndarray | None = None
        for snr_index, snr_db in enumerate(scenario.snr_grid_db):
            snr = float(db_to_linear(snr_db))
            crb = crb_aod(aperture, beams, scenario.path_gain, snr, scenario.true_aod, carrier)
            if weights is None:
                weights = first_order_weights(aperture, beams, scenario.path_gain, scenario.true_aod, carrier)
            seeds = [trial_seed(scenario.seed, 3, snr_index, trial) for trial in range(scenario.trials)]
            task = partial(_excess_squared_error, estimator, clean, weights, math.sqrt(0.5 / snr), truth)
            excess = map_trials(task, seeds, workers)
            rmse = math.sqrt(max(crb + float(np.mean(excess)), 0.0))
            result.add_row(spec.label, snr_db, math.degrees(rmse), math.degrees(math.sqrt(crb)), scenario.trials)
        logger.debug(f"{spec.label}: sensing rows done")
    return result
