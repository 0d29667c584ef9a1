"""
Transceiver Front End
Physical layout shared by every architecture (environment aperture, feed
array, BD-RIS sectors, SIM layers) and the per-architecture dispatch used by
the experiments.

Frame: the environment-facing aperture is centred at the origin with normal
+x. The feed array sits `surface_distance` behind the antenna-facing layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.core.exceptions import DimensionError, GeometryError, SynthesisError
from src.core.logger import get_logger
from src.physics.geometry import ArrayGeometry, CarrierConfig, make_planar_array
from src.physics.propagation import CouplingMatrix, UserChannel, near_field_coupling, normalize_passive
from src.synthesis.architectures import ArchitectureSpec, BeamSolution
from src.synthesis.bdris import bdris_full_configure, bdris_tree_configure
from src.synthesis.precoders import digital_precoder, hybrid_precoder, milac_precoder
from src.synthesis.sim import SimStack, make_sim_stack, sim_configure
from src.synthesis.tree import TreeShape

logger = get_logger(__name__)


def grid_shape(count: int) -> tuple[int, int]:
    """Most nearly square (rows, cols) factorization of count, rows <= cols."""
    if count < 1:
        raise GeometryError("element count must be >= 1", f"got {count}")
    rows = int(math.isqrt(count))
    while count % rows:
        rows -= 1
    return rows, count // rows


@dataclass(frozen=True)
class FrontendLayout:
    """
    Geometry and optimizer settings of the transceiver front end.

    Lengths are in meters; bdris_elements = 0 means N = M.
    """

    carrier: CarrierConfig
    rows: int = 9
    cols: int = 9
    element_spacing: float = 0.5
    rf_chains: int = 4
    feed_spacing: float = 0.5
    surface_distance: float = 5.0
    bdris_elements: int = 0
    sim_layers: int = 3
    sim_layer_spacing: float = 0.5
    tree_shape: TreeShape = "path"
    budget: int = 500
    restarts: int = 4

    def __post_init__(self) -> None:
        for name in ("element_spacing", "feed_spacing", "surface_distance", "sim_layer_spacing"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise GeometryError(f"{name} must be positive", f"got {value}")
        if self.rf_chains < 1 or self.sim_layers < 1 or self.budget < 1 or self.restarts < 1:
            raise SynthesisError(
                "rf_chains, sim_layers, budget and restarts must be >= 1",
                f"got {self.rf_chains}, {self.sim_layers}, {self.budget}, {self.restarts}",
            )
        if self.bdris_elements < 0:
            raise SynthesisError("bdris_elements must be >= 0", f"got {self.bdris_elements}")

    @classmethod
    def in_wavelengths(cls, carrier: CarrierConfig, **kwargs) -> "FrontendLayout":
        """Build a layout whose length settings are given in wavelengths."""
        for name in ("element_spacing", "feed_spacing", "surface_distance", "sim_layer_spacing"):
            if name in kwargs:
                kwargs[name] = kwargs[name] * carrier.wavelength
        return cls(carrier=carrier, **kwargs)

    @property
    def element_count(self) -> int:
        return self.rows * self.cols


class FrontEnd:
    """
    Concrete apertures and couplings for one layout.

    Couplings are built on first use and cached per (N) or (L).
    """

    def __init__(self, layout: FrontendLayout) -> None:
        self.layout = layout
        self.carrier = layout.carrier
        self.aperture: ArrayGeometry = make_planar_array(layout.rows, layout.cols, layout.element_spacing)
        self._bdris: dict[int, CouplingMatrix] = {}
        self._sim: dict[int, SimStack] = {}

    @property
    def M(self) -> int:
        return self.aperture.count

    @property
    def K(self) -> int:
        return self.layout.rf_chains

    @property
    def N(self) -> int:
        return self.layout.bdris_elements or self.M

    def feed_array(self, depth: float) -> ArrayGeometry:
        """K-element feed on a near-square grid, `depth` meters behind the origin plane."""
        rows, cols = grid_shape(self.K)
        return make_planar_array(rows, cols, self.layout.feed_spacing, center=(-depth, 0.0, 0.0))

    def bdris_coupling(self, n: int | None = None) -> CouplingMatrix:
        """Feed -> antenna-facing sector coupling G (N x K), scaled to sigma_max = 1."""
        n = n or self.N
        if n not in self._bdris:
            rows, cols = grid_shape(n)
            sector = make_planar_array(rows, cols, self.layout.element_spacing)
            coupling = near_field_coupling(self.feed_array(self.layout.surface_distance), sector, self.carrier)
            self._bdris[n], factor = normalize_passive(coupling, exact=True)
            logger.debug(f"BD-RIS sector N={n}: coupling scaled by {factor:.4g}")
        return self._bdris[n]

    def sim_stack(self, layers: int | None = None) -> SimStack:
        """L parallel layers ending at the environment aperture, feed behind layer 1."""
        layers = layers or self.layout.sim_layers
        if layers not in self._sim:
            spacing = self.layout.sim_layer_spacing
            geoms = [
                self.aperture.translated((-(layers - 1 - l) * spacing, 0.0, 0.0))
                for l in range(layers)
            ]
            feed = self.feed_array((layers - 1) * spacing + self.layout.surface_distance)
            self._sim[layers] = make_sim_stack(geoms, feed, self.carrier)
        return self._sim[layers]

    def spec(self, name: str) -> ArchitectureSpec:
        """ArchitectureSpec for a configured architecture name."""
        return ArchitectureSpec.from_name(
            name,
            M=self.M,
            K=self.K,
            N=self.N,
            L=self.layout.sim_layers,
            layer_spacing=self.layout.sim_layer_spacing,
        )


# ═══════════════════════════════════════════════════════════════
# DISPATCH
# ═══════════════════════════════════════════════════════════════

def configure(
    spec: ArchitectureSpec,
    h: UserChannel | np.ndarray,
    frontend: FrontEnd,
    rng_seed: int = 0,
) -> BeamSolution:
    """
    Optimize one architecture for the user channel h.

    Args:
        spec: Architecture to configure
        h: User channel over the environment-facing aperture
        frontend: Front end providing couplings and optimizer budgets
        rng_seed: Seed for iterative configurators

    Returns:
        BeamSolution of the architecture
    """
    h_vec = h.gains if isinstance(h, UserChannel) else np.asarray(h, dtype=complex).reshape(-1)
    if h_vec.size != spec.M:
        raise DimensionError("configure", f"user channel has {h_vec.size} entries for M={spec.M}")
    layout = frontend.layout

    if spec.kind == "digital":
        return digital_precoder(h_vec)
    if spec.kind == "milac":
        return milac_precoder(h_vec, spec.K)
    if spec.kind == "hybrid":
        return hybrid_precoder(h_vec, spec.K)
    if spec.kind == "bdris":
        coupling = frontend.bdris_coupling(spec.N)
        if spec.topology == "full":
            return bdris_full_configure(coupling, h_vec)
        return bdris_tree_configure(
            coupling,
            h_vec,
            frontend.carrier,
            tree_shape=layout.tree_shape,
            budget=layout.budget,
            rng_seed=rng_seed,
            restarts=layout.restarts,
        )
    if spec.kind == "sim":
        return sim_configure(
            frontend.sim_stack(spec.L), h_vec, budget=layout.budget, rng_seed=rng_seed, restarts=layout.restarts
        )
    raise SynthesisError(f"unsupported architecture '{spec.kind}'")


def realizable_sweep_beam(
    spec: ArchitectureSpec,
    codeword: np.ndarray,
    frontend: FrontEnd,
    rng_seed: int = 0,
) -> np.ndarray:
    """
    Beam an architecture actually radiates when asked for a sweep codeword.

    Baseband-driven front ends radiate c/sqrt(M) exactly. Surface-based
    front ends are configured for the target h = conj(c), so they maximize
    the correlation |c^H beam| over their realizable beams. Among beams of
    equal norm that is the least-squares fit of alpha c; the norm itself is
    whatever the optimizer reaches.

    Raises:
        SynthesisError: If the codeword is not unit-modulus of length M
    """
    codeword = np.asarray(codeword, dtype=complex).reshape(-1)
    if codeword.size != spec.M or np.max(np.abs(np.abs(codeword) - 1.0)) > 1e-9:
        raise SynthesisError("sweep codeword must be unit-modulus of length M", f"got {codeword.size} entries")
    if spec.kind in ("digital", "milac", "hybrid"):
        return codeword / math.sqrt(spec.M)
    return configure(spec, codeword.conj(), frontend, rng_seed).effective_beam


def fit_residual(beam: np.ndarray, codeword: np.ndarray) -> float:
    """min over alpha of ||beam - alpha c|| / ||c||."""
    beam = np.asarray(beam, dtype=complex).reshape(-1)
    codeword = np.asarray(codeword, dtype=complex).reshape(-1)
    alpha = np.vdot(codeword, beam) / np.vdot(codeword, codeword)
    return float(np.linalg.norm(beam - alpha * codeword) / np.linalg.norm(codeword))
