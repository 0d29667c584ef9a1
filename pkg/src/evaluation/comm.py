"""
Communication Case Study
Spectral efficiency versus SNR for each architecture over seeded user-channel
realizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np

from src.core.config import settings
from src.core.exceptions import ExperimentError, FailureThresholdError, WaveBenchError
from src.core.logger import get_logger
from src.evaluation.results import COMM_COLUMNS, ExperimentResult
from src.physics.geometry import Direction
from src.physics.propagation import ChannelModel, Rician, user_channel
from src.synthesis.architectures import ArchitectureSpec
from src.synthesis.frontend import FrontEnd, configure
from src.utils.numerics import db_to_linear, trial_seed
from src.utils.parallel import map_trials

logger = get_logger(__name__)

# Fraction of failed trials above which the experiment aborts
FAILURE_THRESHOLD = 0.05


def spectral_efficiency(gain: complex | np.ndarray, snr_linear: float | np.ndarray) -> float | np.ndarray:
    """
    Shannon rate log2(1 + snr |gain|^2) in bits/s/Hz.

    Raises:
        ExperimentError: If snr_linear is negative
    """
    snr = np.asarray(snr_linear, dtype=float)
    if np.any(snr < 0):
        raise ExperimentError("SNR must be non-negative", f"got {snr_linear}")
    rate = np.log2(1.0 + snr * np.abs(gain) ** 2)
    return float(rate) if np.ndim(rate) == 0 else rate


@dataclass(frozen=True, eq=False)
class CommScenario:
    """Point-to-point downlink: one UE, every architecture on the same realizations."""

    frontend: FrontEnd
    specs: tuple[ArchitectureSpec, ...]
    snr_grid_db: tuple[float, ...] = tuple(float(s) for s in range(-10, 31, 5))
    trials: int = 200
    seed: int = 1
    channel: ChannelModel = field(default_factory=lambda: Rician.from_db(5.0))
    user_direction: Direction = field(default_factory=lambda: Direction(0.0, 0.0))

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ExperimentError("trials must be >= 1", f"got {self.trials}")
        if not self.specs:
            raise ExperimentError("at least one architecture is required")
        if not self.snr_grid_db:
            raise ExperimentError("SNR grid is empty")
        if np.any(np.diff(self.snr_grid_db) <= 0):
            raise ExperimentError("SNR grid must be strictly increasing", f"got {list(self.snr_grid_db)}")
        for spec in self.specs:
            if spec.M != self.frontend.M:
                raise ExperimentError(f"{spec.label} has M={spec.M}, aperture has {self.frontend.M}")


def comm_trial_gains(scenario: CommScenario, trial: int) -> Optional[np.ndarray]:
    """Gains of every architecture (scenario.specs order) on one realization, or None if any configurator failed."""
    h = user_channel(
        scenario.frontend.aperture,
        scenario.user_direction,
        scenario.frontend.carrier,
        scenario.channel,
        rng_seed=trial_seed(scenario.seed, 0, trial),
    )
    gains = np.empty(len(scenario.specs))
    for index, spec in enumerate(scenario.specs):
        try:
            solution = configure(spec, h, scenario.frontend, rng_seed=trial_seed(scenario.seed, 1, trial))
        except WaveBenchError as exc:
            logger.warning(f"Trial {trial}: {spec.label} failed ({exc})")
            return None
        gains[index] = solution.gain
    return gains


def run_comm_experiment(scenario: CommScenario, workers: int | None = None) -> ExperimentResult:
    """
    Monte Carlo spectral efficiency per architecture and SNR.

    A trial whose configurators raise is excluded from every architecture's
    aggregate so that all rows average the same realizations.

    Args:
        scenario: Experiment description
        workers: Process-pool width (defaults to settings.workers)

    Returns:
        ExperimentResult with columns arch, snr_db, mean_se_bps_hz, std_se, trials

    Raises:
        FailureThresholdError: If more than 5% of the trials fail
    """
    workers = settings.workers if workers is None else workers
    labels = ", ".join(spec.label for spec in scenario.specs)
    logger.info(f"Comm experiment: {scenario.trials} trials, M={scenario.frontend.M}, architectures [{labels}]")

    outcomes = map_trials(partial(comm_trial_gains, scenario), range(scenario.trials), workers)
    kept = [gains for gains in outcomes if gains is not None]
    failed = scenario.trials - len(kept)
    if failed > FAILURE_THRESHOLD * scenario.trials or not kept:
        raise FailureThresholdError(failed, scenario.trials)
    if failed:
        logger.warning(f"{failed}/{scenario.trials} trials excluded")

    gains = np.vstack(kept)
    result = ExperimentResult(name="comm", columns=COMM_COLUMNS, failed_trials=failed)
    for index, spec in enumerate(scenario.specs):
        for snr_db in scenario.snr_grid_db:
            rates = spectral_efficiency(gains[:, index], db_to_linear(snr_db))
            result.add_row(spec.label, snr_db, float(np.mean(rates)), float(np.std(rates)), len(kept))
    return result
