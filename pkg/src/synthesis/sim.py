"""
Stacked Intelligent Metasurfaces
Cascaded phase-only layers between the feed array and the environment-facing
aperture, configured by projected gradient ascent on the unit circle.

Cascade: C = Phi_L W_L ... Phi_2 W_2 Phi_1 G0, with Phi_l = diag(theta_l),
|theta_l| = 1, W_l the coupling from layer l-1 to layer l and G0 the coupling
from the feed to layer 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.core.exceptions import DegenerateChannelError, DimensionError
from src.core.logger import get_logger
from src.physics.geometry import ArrayGeometry, CarrierConfig
from src.physics.propagation import (
    CouplingMatrix,
    UserChannel,
    lossless_coupling,
    near_field_coupling,
    normalize_passive,
)
from src.synthesis.architectures import BeamSolution, PhasePayload
from src.utils.numerics import unit

logger = get_logger(__name__)

_MAX_HALVINGS = 40
_REL_TOL = 1e-12
_ALIGN_SWEEPS = 50


@dataclass(frozen=True, eq=False)
class SimStack:
    """
    L phase layers of M elements each.

    couplings[i] maps layer i to layer i+1 (0-based), so there are L-1 of them;
    feed_coupling is G0 (M x K).
    """

    feed_coupling: np.ndarray
    couplings: tuple[np.ndarray, ...] = ()
    layers: tuple[ArrayGeometry, ...] = ()

    def __post_init__(self) -> None:
        g0 = np.atleast_2d(np.asarray(self.feed_coupling, dtype=complex))
        couplings = tuple(np.atleast_2d(np.asarray(w, dtype=complex)) for w in self.couplings)
        object.__setattr__(self, "feed_coupling", g0)
        object.__setattr__(self, "couplings", couplings)

        m = g0.shape[0]
        for index, w in enumerate(couplings):
            if w.shape != (m, m):
                raise DimensionError("SimStack", f"inter-layer coupling {index} is {w.shape}, expected {(m, m)}")
        if self.layers and len(self.layers) != self.layer_count:
            raise DimensionError("SimStack", f"{len(self.layers)} geometries for {self.layer_count} layers")

    @property
    def layer_count(self) -> int:
        return len(self.couplings) + 1

    @property
    def element_count(self) -> int:
        return self.feed_coupling.shape[0]

    @property
    def feed_count(self) -> int:
        return self.feed_coupling.shape[1]


def make_sim_stack(
    layers: Sequence[ArrayGeometry],
    feed: ArrayGeometry,
    carrier: CarrierConfig,
    normalize: bool = True,
) -> SimStack:
    """
    Couple a feed array and L parallel layers with the Rayleigh-Sommerfeld kernel.

    Args:
        layers: Layer apertures from the feed side outwards; the last one
            is the environment-facing aperture
        feed: Feed (RF chain) array
        carrier: Carrier settings
        normalize: Scale G0 to sigma_max = 1 and replace every inter-layer
            coupling with its lossless (unitary) polar factor

    Returns:
        SimStack with G0 = feed -> layer 1
    """
    if not layers:
        raise DimensionError("make_sim_stack", "at least one layer is required")

    g0: CouplingMatrix = near_field_coupling(feed, layers[0], carrier)
    if normalize:
        g0, _ = normalize_passive(g0, exact=True)
    couplings = []
    for tx, rx in zip(layers[:-1], layers[1:]):
        coupling = near_field_coupling(tx, rx, carrier)
        couplings.append((lossless_coupling(coupling) if normalize else coupling).entries)
    return SimStack(feed_coupling=g0.entries, couplings=tuple(couplings), layers=tuple(layers))

# ═══════════════════════════════════════════════════════════════
# CASCADE AND GRADIENT
# ═══════════════════════════════════════════════════════════════

def _check_phases(stack: SimStack, thetas: Sequence[np.ndarray]) -> list[np.ndarray]:
    thetas = [np.asarray(theta, dtype=complex).reshape(-1) for theta in thetas]
    if len(thetas) != stack.layer_count:
        raise DimensionError("sim", f"{len(thetas)} phase vectors for {stack.layer_count} layers")
    for theta in thetas:
        if theta.size != stack.element_count:
            raise DimensionError("sim", f"phase vector of length {theta.size}, expected {stack.element_count}")
    return thetas


def _forward(stack: SimStack, thetas: list[np.ndarray]) -> list[np.ndarray]:
    """F_l for every layer: the field arriving at layer l (M x K), before its phases."""
    fields = [stack.feed_coupling]
    for w, theta in zip(stack.couplings, thetas[:-1]):
        fields.append(w @ (theta[:, None] * fields[-1]))
    return fields


def _backward(stack: SimStack, thetas: list[np.ndarray], h_vec: np.ndarray) -> list[np.ndarray]:
    """a_l for every layer, with h^T C = a_l^T diag(theta_l) F_l."""
    weights = [h_vec]
    for w, theta in zip(reversed(stack.couplings), reversed(thetas[1:])):
        weights.append(w.T @ (theta * weights[-1]))
    return weights[::-1]


def sim_composite(stack: SimStack, thetas: Sequence[np.ndarray]) -> np.ndarray:
    """Composite channel C (M x K) for the given layer phases."""
    thetas = _check_phases(stack, thetas)
    fields = _forward(stack, thetas)
    return thetas[-1][:, None] * fields[-1]


def _user_vector(stack: SimStack, h: UserChannel | np.ndarray) -> np.ndarray:
    h_vec = h.gains if isinstance(h, UserChannel) else np.asarray(h, dtype=complex).reshape(-1)
    if h_vec.size != stack.element_count:
        raise DimensionError("sim", f"user channel has {h_vec.size} entries, stack has {stack.element_count} elements")
    return h_vec


def sim_objective(stack: SimStack, thetas: Sequence[np.ndarray], h: UserChannel | np.ndarray) -> float:
    """J = ||h^T C||^2, the squared gain once the feed is matched."""
    h_vec = _user_vector(stack, h)
    row = h_vec @ sim_composite(stack, thetas)
    return float(np.real(np.vdot(row, row)))


def _wirtinger(stack: SimStack, thetas: list[np.ndarray], h_vec: np.ndarray) -> tuple[float, list[np.ndarray]]:
    """Objective and z_l = a_l * theta_l * (F_l conj(g)) for every layer."""
    fields = _forward(stack, thetas)
    weights = _backward(stack, thetas, h_vec)
    row = h_vec @ (thetas[-1][:, None] * fields[-1])
    objective = float(np.real(np.vdot(row, row)))
    z = [a * theta * (f @ row.conj()) for a, theta, f in zip(weights, thetas, fields)]
    return objective, z


def sim_gradient(stack: SimStack, thetas: Sequence[np.ndarray], h: UserChannel | np.ndarray) -> list[np.ndarray]:
    """
    Analytic gradient of J with respect to the layer phases phi_l (theta_l = exp(j phi_l)).

    Returns:
        One real M-vector per layer: dJ/dphi_l = -2 Im(z_l)
    """
    h_vec = _user_vector(stack, h)
    _, z = _wirtinger(stack, _check_phases(stack, thetas), h_vec)
    return [-2.0 * np.imag(z_l) for z_l in z]


# ═══════════════════════════════════════════════════════════════
# CONFIGURATION
# ═══════════════════════════════════════════════════════════════

def _align_layers(
    stack: SimStack,
    thetas: list[np.ndarray],
    h_vec: np.ndarray,
) -> tuple[list[np.ndarray], list[float]]:
    """
    Coordinate ascent in closed form: with the feed matched to the current
    cascade, each layer in turn takes the phases that make every term of
    h^T C f real and positive. Returns the phases and the objective after
    the start and after every improving sweep.
    """
    objective = sim_objective(stack, thetas, h_vec)
    history = [objective]
    for _ in range(_ALIGN_SWEEPS):
        row = h_vec @ sim_composite(stack, thetas)
        if not np.any(row):
            break
        feed = row.conj()
        trial = list(thetas)
        for layer in range(stack.layer_count):
            incident = _forward(stack, trial)[layer] @ feed
            weights = _backward(stack, trial, h_vec)[layer]
            trial[layer] = np.exp(-1j * np.angle(weights * incident))
        trial_objective = sim_objective(stack, trial, h_vec)
        if trial_objective <= objective * (1.0 + _REL_TOL):
            if trial_objective > objective:
                thetas = trial
                history.append(trial_objective)
            break
        thetas, objective = trial, trial_objective
        history.append(objective)
    return thetas, history


def _ascend(
    stack: SimStack,
    thetas: list[np.ndarray],
    h_vec: np.ndarray,
    budget: int,
    step: float,
) -> tuple[list[np.ndarray], list[float]]:
    """Projected gradient ascent from one start; returns final phases and accepted objectives."""
    objective, z = _wirtinger(stack, thetas, h_vec)
    history = [objective]
    for _ in range(budget):
        scale = max(float(np.max(np.abs(z_l))) for z_l in z)
        if scale == 0.0:
            break
        mu = step / scale
        accepted = False
        for _ in range(_MAX_HALVINGS):
            # theta + mu * dJ/dconj(theta), then back onto the unit circle
            trial = [theta * (1.0 + mu * z_l.conj()) for theta, z_l in zip(thetas, z)]
            trial = [t / np.abs(t) for t in trial]
            trial_objective, trial_z = _wirtinger(stack, trial, h_vec)
            if trial_objective > objective:
                accepted = True
                break
            mu *= 0.5
        if not accepted:
            break
        gain_step = trial_objective - objective
        thetas, objective, z = trial, trial_objective, trial_z
        history.append(objective)
        if gain_step <= _REL_TOL * objective:
            break
    return thetas, history


def sim_configure(
    stack: SimStack,
    h: UserChannel | np.ndarray,
    budget: int = 500,
    rng_seed: int = 0,
    restarts: int = 4,
    step: float = 0.5,
) -> BeamSolution:
    """
    Configure a SIM by projected gradient ascent with backtracking.

    Restart 0 starts from all-zero phases and the others from seeded
    uniform phases. Every start is first warmed by closed-form layer
    alignment sweeps, then refined by gradient steps; the best restart wins. The feed is the dominant right
    singular vector of h^T C, i.e. conj(h^T C)/||h^T C||.

    Args:
        stack: Layer couplings
        h: User channel over the outermost layer (M)
        budget: Gradient iterations per restart (>= 1)
        rng_seed: Seed for the random restarts
        restarts: Number of starts (>= 1)
        step: Initial step, as a fraction of the largest gradient entry

    Returns:
        BeamSolution with one unit-modulus phase vector per layer

    Raises:
        DimensionError: If h does not match the stack
        DegenerateChannelError: If every restart ends with h^T C = 0
    """
    if budget < 1 or restarts < 1:
        raise DimensionError("sim_configure", f"budget and restarts must be >= 1, got {budget}, {restarts}")
    h_vec = _user_vector(stack, h)
    if not np.any(h_vec):
        raise DegenerateChannelError("user channel")

    rng = np.random.default_rng(rng_seed)
    m, n_layers = stack.element_count, stack.layer_count
    best_thetas: list[np.ndarray] = []
    best_history: list[float] = [-1.0]
    for restart in range(restarts):
        if restart == 0:
            start = [np.ones(m, dtype=complex) for _ in range(n_layers)]
        else:
            start = [np.exp(1j * rng.uniform(-np.pi, np.pi, m)) for _ in range(n_layers)]
        warm, aligned = _align_layers(stack, start, h_vec)
        thetas, refined = _ascend(stack, warm, h_vec, budget, step)
        history = aligned + refined[1:]
        logger.debug(f"SIM restart {restart}: J = {history[-1]:.6g} after {len(history) - 1} steps")
        if history[-1] > best_history[-1]:
            best_thetas, best_history = thetas, history

    composite = sim_composite(stack, best_thetas)
    row = h_vec @ composite
    feed = unit(row.conj())
    beam = composite @ feed
    return BeamSolution(
        feed=feed,
        analog_config=PhasePayload(kind="sim", phases=tuple(best_thetas)),
        effective_beam=beam,
        gain=float(abs(h_vec @ beam)),
        history=tuple(best_history),
    )
