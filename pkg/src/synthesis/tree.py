"""
Tree-Connected Impedance Networks
Spanning-tree susceptance networks over the M + N ports of a BD-RIS and
their scattering matrices.

Ports 0..M-1 face the environment, ports M..M+N-1 face the antennas.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import networkx as nx
import numpy as np
from scipy import linalg

from src.core.exceptions import InvalidTreeError, ResonantConfigurationError
from src.physics.geometry import CarrierConfig

TreeShape = Literal["path", "star"]


@dataclass(frozen=True, eq=False)
class TreeNetwork:
    """Edge list over M + N ports with edge and shunt susceptances (siemens)."""

    env_ports: int
    antenna_ports: int
    edges: tuple[tuple[int, int], ...]
    edge_susceptances: np.ndarray
    shunt_susceptances: np.ndarray

    def __post_init__(self) -> None:
        edge_b = np.asarray(self.edge_susceptances, dtype=float).reshape(-1)
        shunt_b = np.asarray(self.shunt_susceptances, dtype=float).reshape(-1)
        object.__setattr__(self, "edge_susceptances", edge_b)
        object.__setattr__(self, "shunt_susceptances", shunt_b)
        object.__setattr__(self, "edges", tuple((int(i), int(j)) for i, j in self.edges))

        ports = self.port_count
        if self.env_ports < 1 or self.antenna_ports < 1:
            raise InvalidTreeError("tree needs at least one port per sector")
        if len(self.edges) != ports - 1:
            raise InvalidTreeError("edge count must be M+N-1", f"got {len(self.edges)} for {ports} ports")
        if edge_b.size != len(self.edges) or shunt_b.size != ports:
            raise InvalidTreeError(
                "susceptance vectors do not match the topology",
                f"{edge_b.size} edge / {shunt_b.size} shunt values for {len(self.edges)} edges, {ports} ports",
            )
        if not (np.all(np.isfinite(edge_b)) and np.all(np.isfinite(shunt_b))):
            raise InvalidTreeError("susceptances must be finite")
        if not nx.is_tree(self.graph()):
            raise InvalidTreeError("edges do not form a spanning tree over the ports")

    @property
    def port_count(self) -> int:
        return self.env_ports + self.antenna_ports

    def graph(self) -> nx.Graph:
        """Port graph with each edge's susceptance as attribute 'b'."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.port_count))
        for (i, j), b in zip(self.edges, self.edge_susceptances):
            graph.add_edge(i, j, b=float(b))
        return graph

    def susceptance_matrix(self) -> np.ndarray:
        """Nodal susceptance B: Laplacian of the edge susceptances plus diagonal shunts."""
        laplacian = nx.laplacian_matrix(self.graph(), nodelist=range(self.port_count), weight="b")
        return laplacian.toarray().astype(float) + np.diag(self.shunt_susceptances)

    def with_susceptances(self, edge_susceptances: np.ndarray, shunt_susceptances: np.ndarray) -> "TreeNetwork":
        return replace(self, edge_susceptances=edge_susceptances, shunt_susceptances=shunt_susceptances)


def tree_edges(env_ports: int, antenna_ports: int, shape: TreeShape = "path") -> tuple[tuple[int, int], ...]:
    """
    Spanning-tree topology over the ports.

    path: a chain alternating environment-facing and antenna-facing ports
    star: every port attached to environment port 0
    """
    ports = env_ports + antenna_ports
    if shape == "path":
        order: list[int] = []
        for i in range(max(env_ports, antenna_ports)):
            if i < env_ports:
                order.append(i)
            if i < antenna_ports:
                order.append(env_ports + i)
        graph = nx.path_graph(order)
    elif shape == "star":
        graph = nx.star_graph(range(ports))
    else:
        raise InvalidTreeError(f"unknown tree shape '{shape}'", "expected 'path' or 'star'")
    return tuple(sorted((min(i, j), max(i, j)) for i, j in graph.edges()))


def make_tree_network(
    env_ports: int,
    antenna_ports: int,
    shape: TreeShape = "path",
    edge_susceptances: np.ndarray | None = None,
    shunt_susceptances: np.ndarray | None = None,
) -> TreeNetwork:
    """Tree network of the given shape; susceptances default to zero (open network)."""
    edges = tree_edges(env_ports, antenna_ports, shape)
    ports = env_ports + antenna_ports
    return TreeNetwork(
        env_ports=env_ports,
        antenna_ports=antenna_ports,
        edges=edges,
        edge_susceptances=np.zeros(ports - 1) if edge_susceptances is None else edge_susceptances,
        shunt_susceptances=np.zeros(ports) if shunt_susceptances is None else shunt_susceptances,
    )


def tree_scattering(network: TreeNetwork, carrier: CarrierConfig) -> tuple[np.ndarray, np.ndarray]:
    """
    Scattering matrix of a lossless reciprocal tree network.

    Y = jB, S = (I - Z0 Y)(I + Z0 Y)^-1; the transmission block T maps
    antenna-facing ports to environment-facing ports.

    Returns:
        (S of shape (M+N) x (M+N), T of shape M x N)

    Raises:
        ResonantConfigurationError: If (I + Z0 Y) is singular
    """
    ports = network.port_count
    z0y = 1j * carrier.reference_impedance * network.susceptance_matrix()
    identity = np.eye(ports)
    try:
        # (I - X) and (I + X)^-1 commute, so S = (I + X)^-1 (I - X)
        scattering = linalg.solve(identity + z0y, identity - z0y)
    except linalg.LinAlgError as exc:
        raise ResonantConfigurationError() from exc
    if not np.all(np.isfinite(scattering)):
        raise ResonantConfigurationError()
    m = network.env_ports
    return scattering, scattering[:m, m:]
