"""
Circuit Complexity
Closed-form tunable-component counts per architecture, the scaling sweep
over aperture size and the qualitative architecture profiles.

Counting convention: a reciprocal network on P ports has one tunable
component per edge plus one shunt per port, so a fully connected network
costs C(P, 2) + P = P(P+1)/2 and a tree costs (P - 1) + P = 2P - 1.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import pandas as pd

from src.core.exceptions import SynthesisError
from src.evaluation.results import COMPLEXITY_COLUMNS, ExperimentResult
from src.synthesis.architectures import ARCHITECTURE_NAMES, ArchitectureSpec


def _full_network(ports: int) -> int:
    return ports * (ports + 1) // 2


def component_count(spec: ArchitectureSpec) -> int:
    """
    Upper-bound count of tunable analog components.

    digital: 0 (its cost lies in the M RF chains and converters, not counted here)
    hybrid: K M phase shifters
    sim: L M phase-only elements
    milac: fully connected network on M + K ports
    bdris full: fully connected network on M + N ports
    bdris tree: tree network on M + N ports
    """
    if spec.kind == "digital":
        return 0
    if spec.kind == "hybrid":
        return spec.K * spec.M
    if spec.kind == "sim":
        return spec.L * spec.M
    if spec.kind == "milac":
        return _full_network(spec.M + spec.K)
    if spec.kind == "bdris":
        ports = spec.M + spec.N
        return _full_network(ports) if spec.topology == "full" else 2 * ports - 1
    raise SynthesisError(f"no component count for '{spec.kind}'")


class ComplexityReport(ExperimentResult):
    """Rows of (arch, M, N, K, L, count); N, K, L are 0 where they do not apply."""

    def __init__(self) -> None:
        super().__init__(name="complexity", columns=COMPLEXITY_COLUMNS)

    def counts(self, arch: str) -> list[int]:
        return self.column("count", arch)


def half_sector(m: int) -> int:
    """Asymmetric antenna-facing sector size N = ceil(M/2)."""
    return math.ceil(m / 2)


def complexity_sweep(
    architectures: Iterable[str],
    m_values: Iterable[int],
    rf_chains: int = 4,
    sim_layers: int = 3,
    asymmetric: bool = True,
    n_of_m: Callable[[int], int] = half_sector,
) -> ComplexityReport:
    """
    Component counts over a sweep of aperture sizes.

    Args:
        architectures: Names from ARCHITECTURE_NAMES
        m_values: Aperture sizes M (non-empty, each >= 1)
        rf_chains: K for hybrid and milac
        sim_layers: L for sim
        asymmetric: Also emit '<bdris>_asym' rows with N = n_of_m(M)
        n_of_m: Antenna-facing sector size for the asymmetric rows

    Returns:
        ComplexityReport, one row per (architecture, M)

    Raises:
        SynthesisError: On an empty sweep or an unknown architecture
    """
    m_values = [int(m) for m in m_values]
    if not m_values:
        raise SynthesisError("complexity sweep needs at least one M value")
    architectures = list(architectures)
    unknown = [name for name in architectures if name not in ARCHITECTURE_NAMES]
    if unknown:
        raise SynthesisError(f"unknown architecture(s) {unknown}", f"expected names from {ARCHITECTURE_NAMES}")

    report = ComplexityReport()
    for name in architectures:
        variants = [(name, None)]
        if asymmetric and name.startswith("bdris"):
            variants.append((f"{name}_asym", n_of_m))
        for label, sector in variants:
            for m in m_values:
                spec = ArchitectureSpec.from_name(
                    name, M=m, K=rf_chains, N=sector(m) if sector else m, L=sim_layers
                )
                n = spec.N if spec.kind == "bdris" else 0
                k = spec.K if spec.kind in ("digital", "hybrid", "milac") else 0
                layers = spec.L if spec.kind == "sim" else 0
                report.add_row(label, m, n, k, layers, component_count(spec))
    return report


# ═══════════════════════════════════════════════════════════════
# QUALITATIVE PROFILES
# ═══════════════════════════════════════════════════════════════

PROFILE_ATTRIBUTES = (
    "sustainability",
    "inclusiveness",
    "modularity",
    "array_scalability",
    "degrees_of_freedom",
    "processing_domain",
    "dsp_load",
    "circuit_complexity",
    "design_flexibility",
    "modeling_robustness",
    "power_consumption",
    "cost",
)

ARCHITECTURE_PROFILES: dict[str, dict[str, str]] = {
    "digital": {
        "sustainability": "low",
        "inclusiveness": "low",
        "modularity": "low",
        "array_scalability": "low",
        "degrees_of_freedom": "very high",
        "processing_domain": "baseband",
        "dsp_load": "very high",
        "circuit_complexity": "n/a",
        "design_flexibility": "very low",
        "modeling_robustness": "very high",
        "power_consumption": "very high",
        "cost": "very high",
    },
    "hybrid": {
        "sustainability": "moderate",
        "inclusiveness": "moderate",
        "modularity": "low",
        "array_scalability": "moderate",
        "degrees_of_freedom": "moderate",
        "processing_domain": "baseband + rf",
        "dsp_load": "high",
        "circuit_complexity": "O(KM)",
        "design_flexibility": "moderate",
        "modeling_robustness": "very high",
        "power_consumption": "moderate",
        "cost": "high",
    },
    "sim": {
        "sustainability": "high",
        "inclusiveness": "high",
        "modularity": "high",
        "array_scalability": "high",
        "degrees_of_freedom": "high",
        "processing_domain": "em wave",
        "dsp_load": "low",
        "circuit_complexity": "O(LM)",
        "design_flexibility": "low",
        "modeling_robustness": "moderate",
        "power_consumption": "low",
        "cost": "low",
    },
    "milac": {
        "sustainability": "high",
        "inclusiveness": "moderate",
        "modularity": "low",
        "array_scalability": "high",
        "degrees_of_freedom": "very high",
        "processing_domain": "analog circuit",
        "dsp_load": "low",
        "circuit_complexity": "O((M+K)^2)",
        "design_flexibility": "high",
        "modeling_robustness": "very high",
        "power_consumption": "low",
        "cost": "moderate",
    },
    "bdris": {
        "sustainability": "high",
        "inclusiveness": "high",
        "modularity": "high",
        "array_scalability": "high",
        "degrees_of_freedom": "very high",
        "processing_domain": "em wave",
        "dsp_load": "low",
        "circuit_complexity": "O((M+N)^2)",
        "design_flexibility": "very high",
        "modeling_robustness": "high",
        "power_consumption": "low",
        "cost": "low",
    },
}


def profiles_frame() -> pd.DataFrame:
    """Qualitative profiles as a table, one row per architecture family."""
    rows = [{"arch": arch, **profile} for arch, profile in ARCHITECTURE_PROFILES.items()]
    return pd.DataFrame(rows, columns=["arch", *PROFILE_ATTRIBUTES])
