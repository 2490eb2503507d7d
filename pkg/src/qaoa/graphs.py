"""
MaxCut graphs

Simple undirected graphs, seeded generators built on networkx and the plain
text graph format (first line ``n m``, then ``m`` lines ``u v``, 0-based).
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple
import logging

import networkx as nx
import numpy as np

from ..liouville.sampling import derive_seed

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class GraphError(Exception):
    """Raised when a graph is malformed or cannot be generated"""
    pass


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph on vertices 0..n-1.

    Edges are stored as sorted pairs in sorted order.
    """

    n_vertices: int
    edges: Tuple[Edge, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise GraphError(f"A graph needs at least one vertex, got {self.n_vertices}")
        normalized = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"Self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise GraphError(f"Edge ({u}, {v}) outside vertices 0..{self.n_vertices - 1}")
            normalized.append((min(u, v), max(u, v)))
        if len(set(normalized)) != len(normalized):
            raise GraphError("Duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> List[int]:
        counts = [0] * self.n_vertices
        for u, v in self.edges:
            counts[u] += 1
            counts[v] += 1
        return counts

    def is_regular(self, degree: int) -> bool:
        return all(d == degree for d in self.degrees)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, label: str = "") -> "Graph":
        mapping = {node: k for k, node in enumerate(sorted(graph.nodes))}
        edges = tuple((mapping[u], mapping[v]) for u, v in graph.edges)
        return cls(graph.number_of_nodes(), edges, label)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_vertices))
        graph.add_edges_from(self.edges)
        return graph


def random_regular_graph(n_vertices: int, degree: int, rng: np.random.Generator) -> Graph:
    """
    Uniformly random d-regular simple graph (networkx pairing model with restarts).

    Args:
        n_vertices: Number of vertices
        degree: Vertex degree d
        rng: Random generator (one seed is drawn from it)

    Returns:
        Graph with n * d / 2 edges

    Raises:
        GraphError: If d >= n or n * d is odd
    """
    if degree < 0 or degree >= n_vertices:
        raise GraphError(f"No {degree}-regular graph on {n_vertices} vertices (need 0 <= d < n)")
    if (n_vertices * degree) % 2:
        raise GraphError(f"n * d must be even, got n={n_vertices}, d={degree}")
    seed = derive_seed(rng)
    try:
        graph = nx.random_regular_graph(degree, n_vertices, seed=seed)
    except nx.NetworkXError as e:
        logger.error(f"Regular graph generation failed: {e}")
        raise GraphError(f"Cannot generate {degree}-regular graph on {n_vertices} vertices: {e}") from e
    logger.debug(f"Generated {degree}-regular graph on {n_vertices} vertices (seed {seed})")
    return Graph.from_networkx(graph, label=f"reg({n_vertices},{degree})")


def erdos_renyi(n_vertices: int, probability: float, rng: np.random.Generator) -> Graph:
    """
    G(n, p) random graph.

    Raises:
        GraphError: If p is outside [0, 1] or n < 1
    """
    if not 0.0 <= probability <= 1.0:
        raise GraphError(f"Edge probability out of [0,1]: {probability!r}")
    if n_vertices < 1:
        raise GraphError(f"A graph needs at least one vertex, got {n_vertices}")
    graph = nx.gnp_random_graph(n_vertices, probability, seed=derive_seed(rng))
    return Graph.from_networkx(graph, label=f"er({n_vertices},{probability:g})")


def complete_graph(n_vertices: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n_vertices), label=f"K{n_vertices}")


def read_graph(path: str | Path) -> Graph:
    """
    Read a graph file.

    Raises:
        FileNotFoundError: If the file doesn't exist
        GraphError: If the content is malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Graph file not found: {path}")

    lines = [line.split() for line in path.read_text().splitlines() if line.strip()]
    try:
        n_vertices, n_edges = (int(token) for token in lines[0])
        edges = [(int(u), int(v)) for u, v in lines[1:]]
    except (IndexError, ValueError) as e:
        logger.error(f"Malformed graph file {path}: {e}")
        raise GraphError(f"Malformed graph file {path}: {e}") from e
    if len(edges) != n_edges:
        raise GraphError(f"Graph file {path} declares {n_edges} edge(s) but lists {len(edges)}")

    logger.info(f"Loaded graph from {path}: {n_vertices} vertices, {n_edges} edges")
    return Graph(n_vertices, tuple(edges), label=path.stem)


def write_graph(graph: Graph, path: str | Path) -> Path:
    """Write a graph in the ``n m`` / ``u v`` format"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{graph.n_vertices} {graph.n_edges}"] + [f"{u} {v}" for u, v in graph.edges]
    path.write_text("\n".join(lines) + "\n")
    logger.debug(f"Saved: {path}")
    return path
