"""
Architecture Descriptions
Tagged transceiver specs and the configuration payloads each family produces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal, Optional, Union

import numpy as np

from src.core.exceptions import SynthesisError
from src.utils.numerics import sigma_max

if TYPE_CHECKING:
    from src.synthesis.tree import TreeNetwork

ArchitectureKind = Literal["digital", "hybrid", "milac", "sim", "bdris"]
Topology = Literal["full", "tree"]

# Names accepted in config files and written to CSV
ARCHITECTURE_NAMES = ("digital", "milac", "hybrid", "sim", "bdris_full", "bdris_tree")


@dataclass(frozen=True)
class ArchitectureSpec:
    """
    One transceiver architecture and its tunable-parameter counts.

    M: environment-facing elements; N: antenna-facing elements (bdris);
    K: RF chains; L: layers (sim).
    """

    kind: ArchitectureKind
    M: int
    K: int
    N: int = 0
    L: int = 0
    topology: Topology = "full"
    layer_spacing: float = 0.0

    def __post_init__(self) -> None:
        if self.M < 1:
            raise SynthesisError("M must be >= 1", f"got {self.M}")
        if self.K < 1:
            raise SynthesisError("K must be >= 1", f"got {self.K}")
        if self.kind == "sim" and self.L < 1:
            raise SynthesisError("sim requires L >= 1", f"got {self.L}")
        if self.kind == "bdris" and self.N < 1:
            raise SynthesisError("bdris requires N >= 1", f"got {self.N}")
        if self.kind == "digital" and self.K != self.M:
            raise SynthesisError("digital requires K = M", f"got K={self.K}, M={self.M}")

    @property
    def label(self) -> str:
        """Row label used in result tables."""
        if self.kind == "bdris":
            base = f"bdris_{self.topology}"
            return base if self.N == self.M else f"{base}_n{self.N}"
        return self.kind

    @classmethod
    def from_name(
        cls,
        name: str,
        M: int,
        K: int,
        N: int | None = None,
        L: int = 1,
        layer_spacing: float = 0.0,
    ) -> "ArchitectureSpec":
        """Build a spec from a config/CSV name (see ARCHITECTURE_NAMES)."""
        if name == "digital":
            return cls(kind="digital", M=M, K=M)
        if name in ("milac", "hybrid"):
            return cls(kind=name, M=M, K=K)
        if name == "sim":
            return cls(kind="sim", M=M, K=K, L=L, layer_spacing=layer_spacing)
        if name in ("bdris_full", "bdris_tree"):
            return cls(kind="bdris", M=M, K=K, N=N or M, topology=name.split("_")[1])
        raise SynthesisError(f"unknown architecture '{name}'", f"expected one of {ARCHITECTURE_NAMES}")


# ═══════════════════════════════════════════════════════════════
# CONFIGURATION PAYLOADS
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class PhasePayload:
    """Unit-modulus phase-shifter coefficients, one vector per layer."""

    kind: Literal["hybrid", "sim"]
    phases: tuple[np.ndarray, ...]

    def satisfies_constraints(self, tol: float = 1e-10) -> bool:
        return all(np.max(np.abs(np.abs(layer) - 1.0)) <= tol for layer in self.phases)


@dataclass(frozen=True, eq=False)
class TransmissionPayload:
    """Passive transmission matrix (input ports -> environment-facing ports)."""

    kind: Literal["milac", "bdris_full"]
    matrix: np.ndarray

    def satisfies_constraints(self, tol: float = 1e-9) -> bool:
        return sigma_max(self.matrix) <= 1.0 + tol


@dataclass(frozen=True, eq=False)
class TreePayload:
    """Tree-connected impedance network with its scattering matrix."""

    network: "TreeNetwork"
    scattering: np.ndarray
    transmission: np.ndarray
    kind: Literal["bdris_tree"] = "bdris_tree"

    def satisfies_constraints(self, tol: float = 1e-9) -> bool:
        s = self.scattering
        identity = np.eye(s.shape[0])
        unitary = np.max(np.abs(s @ s.conj().T - identity)) <= tol
        symmetric = np.max(np.abs(s - s.T)) <= tol
        return bool(unitary and symmetric and sigma_max(self.transmission) <= 1.0 + tol)


AnalogConfig = Union[PhasePayload, TransmissionPayload, TreePayload]


@dataclass(frozen=True, eq=False)
class BeamSolution:
    """
    Optimized configuration of one architecture for one target.

    feed: unit-norm digital feed (K-vector)
    analog_config: tagged payload; None for the fully digital front end
    effective_beam: field on the environment-facing aperture (M-vector)
    gain: |end-to-end channel| at unit transmit power
    history: accepted objective values of iterative configurators
    """

    feed: np.ndarray
    analog_config: Optional[AnalogConfig]
    effective_beam: np.ndarray
    gain: float
    history: tuple[float, ...] = field(default=())

    def is_feasible(self) -> bool:
        """Unit-norm feed and a payload inside its constraint set."""
        if abs(np.linalg.norm(self.feed) - 1.0) > 1e-10:
            return False
        return self.analog_config is None or self.analog_config.satisfies_constraints()
