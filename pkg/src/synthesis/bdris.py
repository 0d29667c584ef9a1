"""
Transceiver-Integrated BD-RIS
Closed-form configuration of a fully connected transmissive BD-RIS and
coordinate-ascent synthesis of a tree-connected one.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import linalg, optimize

from src.core.exceptions import DegenerateChannelError, DimensionError
from src.core.logger import get_logger
from src.physics.geometry import CarrierConfig
from src.physics.propagation import CouplingMatrix, UserChannel
from src.synthesis.architectures import BeamSolution, TransmissionPayload, TreePayload
from src.synthesis.tree import TreeShape, make_tree_network, tree_scattering
from src.utils.numerics import dominant_right_singular, unit

logger = get_logger(__name__)

_GRID_POINTS = 16
# |Z0 b| <= tan(_PSI_LIMIT) ~ 1e3 keeps (I + Z0 Y) well conditioned
_PSI_LIMIT = math.pi / 2 - 1e-3
_PSI_GRID = (np.arange(_GRID_POINTS) + 0.5) / _GRID_POINTS * math.pi - math.pi / 2


def _as_vector(h: UserChannel | np.ndarray) -> np.ndarray:
    if isinstance(h, UserChannel):
        return h.gains
    return np.asarray(h, dtype=complex).reshape(-1)


def _as_matrix(coupling: CouplingMatrix | np.ndarray) -> np.ndarray:
    if isinstance(coupling, CouplingMatrix):
        return coupling.entries
    return np.atleast_2d(np.asarray(coupling, dtype=complex))


# ═══════════════════════════════════════════════════════════════
# FULLY CONNECTED
# ═══════════════════════════════════════════════════════════════

def bdris_full_configure(coupling: CouplingMatrix | np.ndarray, h: UserChannel | np.ndarray) -> BeamSolution:
    """
    Optimal passive transmission for a single-antenna user.

    f is the dominant right singular vector of G and T = u v^H with
    u = conj(h)/||h||, v = G f/||G f||, so gain = ||h|| sigma_max(G).

    Args:
        coupling: Feed -> antenna-facing sector coupling G (N x K)
        h: User channel over the environment-facing sector (M)

    Returns:
        BeamSolution with a rank-1 TransmissionPayload (sigma_max(T) = 1)

    Raises:
        DegenerateChannelError: If G or h is all-zero
    """
    g_mat = _as_matrix(coupling)
    h_vec = _as_vector(h)
    if not np.any(h_vec):
        raise DegenerateChannelError("user channel")

    sigma, feed = dominant_right_singular(g_mat)
    u = unit(h_vec.conj())
    v = unit(g_mat @ feed)
    transmission = np.outer(u, v.conj())
    beam = transmission @ (g_mat @ feed)
    gain = float(np.linalg.norm(h_vec) * sigma)
    return BeamSolution(
        feed=feed,
        analog_config=TransmissionPayload(kind="bdris_full", matrix=transmission),
        effective_beam=beam,
        gain=gain,
    )


# ═══════════════════════════════════════════════════════════════
# TREE CONNECTED
# ═══════════════════════════════════════════════════════════════

class _TreeAscent:
    """
    Coordinate ascent over normalized susceptances x = Z0 * b.

    With A = I + jB_n the objective is |h^T T g| = 2 |h_p^T A^-1 g_p|, where
    h_p and g_p are h and g = G f padded onto the environment- and
    antenna-facing ports. Changing one susceptance by delta is the rank-1
    update A + j delta u u^T, so each candidate costs O(1) and each accepted
    move O(P^2) through Sherman-Morrison.
    """

    def __init__(self, h_vec: np.ndarray, g_vec: np.ndarray, edges: tuple[tuple[int, int], ...]) -> None:
        m, n = h_vec.size, g_vec.size
        self.ports = m + n
        self.edges = edges
        self.h_pad = np.concatenate([h_vec, np.zeros(n, dtype=complex)])
        self.g_pad = np.concatenate([np.zeros(m, dtype=complex), g_vec])
        # Coordinates: one per edge, then one shunt per port
        self.supports: list[tuple[int, ...]] = [edge for edge in edges] + [(p,) for p in range(self.ports)]

    def reset(self, x: np.ndarray) -> None:
        self.x = np.array(x, dtype=float)
        b_norm = np.zeros((self.ports, self.ports))
        for (i, j), xe in zip(self.edges, self.x[: len(self.edges)]):
            b_norm[i, i] += xe
            b_norm[j, j] += xe
            b_norm[i, j] -= xe
            b_norm[j, i] -= xe
        b_norm[np.diag_indices(self.ports)] += self.x[len(self.edges):]
        self.a_inv = linalg.inv(np.eye(self.ports) + 1j * b_norm)
        self.r_h = self.a_inv @ self.h_pad
        self.r_g = self.a_inv @ self.g_pad

    def objective(self) -> float:
        return 2.0 * abs(self.h_pad @ self.r_g)

    def _direction(self, coord: int) -> np.ndarray:
        u = np.zeros(self.ports)
        support = self.supports[coord]
        u[support[0]] = 1.0
        if len(support) == 2:
            u[support[1]] = -1.0
        return u

    def _candidate(self, coord: int, u: np.ndarray, s: complex) -> Callable[[float], float]:
        base = self.h_pad @ self.r_g
        wh = u @ self.r_h
        wg = u @ self.r_g
        x_old = self.x[coord]

        def value(psi: float) -> float:
            delta = math.tan(psi) - x_old
            c = 1j * delta / (1.0 + 1j * delta * s)
            return 2.0 * abs(base - c * wh * wg)

        return value

    def step(self, coord: int) -> bool:
        """Line search on one coordinate; apply the move if it strictly improves."""
        u = self._direction(coord)
        w = self.a_inv @ u
        s = complex(u @ w)
        value = self._candidate(coord, u, s)

        current = self.objective()
        scores = np.array([value(psi) for psi in _PSI_GRID])
        best = int(np.argmax(scores))
        psi_best, score = float(_PSI_GRID[best]), float(scores[best])
        lo = _PSI_GRID[best - 1] if best > 0 else -_PSI_LIMIT
        hi = _PSI_GRID[best + 1] if best < _GRID_POINTS - 1 else _PSI_LIMIT
        try:
            refined = optimize.minimize_scalar(
                lambda psi: -value(psi), bracket=(lo, psi_best, hi), method="golden", options={"xtol": 1e-12}
            )
        except ValueError:
            # No strict bracket (edge peak or tied scores): keep the grid point
            refined = None
        if refined is not None and refined.success and -refined.fun > score:
            psi_best, score = float(refined.x), float(-refined.fun)

        if not score > current:
            return False

        delta = math.tan(psi_best) - self.x[coord]
        c = 1j * delta / (1.0 + 1j * delta * s)
        wh = u @ self.r_h
        wg = u @ self.r_g
        self.a_inv -= c * np.outer(w, w)
        self.r_h -= c * w * wh
        self.r_g -= c * w * wg
        self.x[coord] += delta
        return True


def bdris_tree_configure(
    coupling: CouplingMatrix | np.ndarray,
    h: UserChannel | np.ndarray,
    carrier: CarrierConfig,
    tree_shape: TreeShape = "path",
    budget: int = 500,
    rng_seed: int = 0,
    restarts: int = 4,
) -> BeamSolution:
    """
    Tree-connected BD-RIS synthesis by multi-start coordinate ascent.

    The feed is fixed to the dominant right singular vector of G; each
    restart sweeps the edge and shunt susceptances with a grid-plus-golden
    line search over psi = arctan(Z0 b) until `budget` coordinate updates
    are spent. Restart 0 starts from the open network, the others from
    seeded random susceptances.

    Args:
        coupling: Feed -> antenna-facing sector coupling G (N x K)
        h: User channel over the environment-facing sector (M)
        carrier: Carrier settings (reference impedance Z0)
        tree_shape: 'path' or 'star'
        budget: Coordinate updates per restart (>= 1)
        rng_seed: Seed for the random restarts
        restarts: Number of starts (>= 1)

    Returns:
        Best BeamSolution over all restarts, with its accepted-objective history
    """
    if budget < 1 or restarts < 1:
        raise DimensionError("bdris_tree_configure", f"budget and restarts must be >= 1, got {budget}, {restarts}")

    g_mat = _as_matrix(coupling)
    h_vec = _as_vector(h)
    if not np.any(h_vec):
        raise DegenerateChannelError("user channel")
    _, feed = dominant_right_singular(g_mat)
    g_vec = g_mat @ feed

    m, n = h_vec.size, g_vec.size
    template = make_tree_network(m, n, tree_shape)
    ascent = _TreeAscent(h_vec, g_vec, template.edges)
    n_coords = len(ascent.supports)
    rng = np.random.default_rng(rng_seed)

    best_x: np.ndarray | None = None
    best_value = -1.0
    best_history: tuple[float, ...] = ()
    for restart in range(restarts):
        start = np.zeros(n_coords) if restart == 0 else rng.standard_normal(n_coords)
        ascent.reset(start)
        history = [ascent.objective()]
        updates = 0
        while updates < budget:
            # Fresh inverse each sweep keeps the rank-1 updates from drifting
            ascent.reset(ascent.x)
            improved = False
            for coord in range(n_coords):
                if updates >= budget:
                    break
                updates += 1
                if ascent.step(coord):
                    improved = True
                    history.append(ascent.objective())
            if not improved:
                break
        logger.debug(f"Tree restart {restart}: objective {history[-1]:.6g} after {updates} updates")
        if history[-1] > best_value:
            best_value = history[-1]
            best_x = ascent.x.copy()
            best_history = tuple(history)

    n_edges = len(template.edges)
    z0 = carrier.reference_impedance
    network = template.with_susceptances(best_x[:n_edges] / z0, best_x[n_edges:] / z0)
    scattering, transmission = tree_scattering(network, carrier)
    beam = transmission @ g_vec
    gain = float(abs(h_vec @ beam))
    return BeamSolution(
        feed=feed,
        analog_config=TreePayload(network=network, scattering=scattering, transmission=transmission),
        effective_beam=beam,
        gain=gain,
        history=best_history,
    )
