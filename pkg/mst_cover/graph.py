"""Graph representation, connectivity and preference-driven Kruskal."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, List, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

from .exceptions import DisconnectedGraphError, LengthMismatchError, MalformedInstanceError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """Immutable connected undirected multigraph whose edges are indexed 0..m-1."""
    node_count: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)

        if self.node_count < 1:
            raise MalformedInstanceError(f"Graph needs at least one node, got {self.node_count}")
        for edge_id, (u, v) in enumerate(edges):
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise MalformedInstanceError(
                    f"Edge {edge_id} ({u}, {v}) references a node outside 0..{self.node_count - 1}"
                )
            if u == v:
                raise MalformedInstanceError(f"Edge {edge_id} is a self-loop on node {u}")

        if self.node_count > 1 and not nx.is_connected(self.to_networkx()):
            raise DisconnectedGraphError(
                f"Graph with {self.node_count} nodes and {len(edges)} edges is not connected"
            )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> range:
        return range(len(self.edges))

    def endpoints(self, edge_id: int) -> Tuple[int, int]:
        return self.edges[edge_id]

    def check_edge_ids(self, edge_ids: Iterable[int]) -> frozenset[int]:
        """Return the ids as a frozenset, rejecting ids that name no edge."""
        ids = frozenset(edge_ids)
        invalid = sorted(e for e in ids if not 0 <= e < len(self.edges))
        if invalid:
            raise MalformedInstanceError(f"Unknown edge ids {invalid} (graph has {len(self.edges)} edges)")
        return ids

    def to_networkx(self, edge_ids: Iterable[int] | None = None) -> nx.MultiGraph:
        """Build a networkx multigraph keyed by edge id, optionally restricted to ``edge_ids``."""
        multigraph = nx.MultiGraph()
        multigraph.add_nodes_from(range(self.node_count))
        selected = self.edge_ids if edge_ids is None else sorted(edge_ids)
        for edge_id in selected:
            u, v = self.edges[edge_id]
            multigraph.add_edge(u, v, key=edge_id)
        return multigraph


@dataclass(frozen=True)
class SpanningTree:
    """A set of n-1 edge ids spanning the graph without cycles."""
    edge_ids: frozenset[int]

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.edge_ids))

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __contains__(self, edge_id: object) -> bool:
        return edge_id in self.edge_ids

    def sorted_ids(self) -> List[int]:
        return sorted(self.edge_ids)


class DisjointSets(UnionFind):
    """Union-find scratch structure over node ids 0..n-1."""

    def __init__(self, node_count: int) -> None:
        super().__init__(range(node_count))

    def find(self, node: int) -> int:
        return self[node]

    def join(self, u: int, v: int) -> bool:
        """Merge the sets of ``u`` and ``v``; False when they were already merged."""
        if self[u] == self[v]:
            return False
        self.union(u, v)
        return True


def _order_keys(graph: Graph, order: Any) -> Sequence[Any]:
    """Per-edge sort keys of a preorder given as a Preference or a plain key sequence."""
    keys = getattr(order, "rank", order)
    if len(keys) != graph.edge_count:
        raise LengthMismatchError(f"Order ranks {len(keys)} edges but the graph has {graph.edge_count}")
    return keys


def kruskal(graph: Graph, order: Any) -> SpanningTree:
    """Kruskal's algorithm under a total preorder; ties break by ascending edge id.

    ``order`` is anything with a per-edge ``rank`` vector (a Preference) or the
    key vector itself. Lower keys are preferred.
    """
    keys = _order_keys(graph, order)
    forest = DisjointSets(graph.node_count)
    chosen: List[int] = []
    target = graph.node_count - 1

    for edge_id in sorted(graph.edge_ids, key=lambda e: (keys[e], e)):
        if len(chosen) == target:
            break
        u, v = graph.edges[edge_id]
        if forest.join(u, v):
            chosen.append(edge_id)

    return SpanningTree(frozenset(chosen))


def is_spanning_tree(graph: Graph, edge_ids: Iterable[int]) -> bool:
    """True iff the edges number n-1, contain no cycle and so span every node."""
    ids = graph.check_edge_ids(edge_ids)
    if len(ids) != graph.node_count - 1:
        return False
    forest = DisjointSets(graph.node_count)
    return all(forest.join(*graph.edges[edge_id]) for edge_id in ids)


def tree_path(graph: Graph, tree: Iterable[int], source: int, target: int) -> List[int]:
    """Edge ids along the unique path between two nodes of a spanning tree."""
    path_graph = nx.Graph()
    path_graph.add_nodes_from(range(graph.node_count))
    for edge_id in tree:
        u, v = graph.edges[edge_id]
        path_graph.add_edge(u, v, edge_id=edge_id)

    nodes = nx.shortest_path(path_graph, source, target)
    return [path_graph.edges[a, b]["edge_id"] for a, b in zip(nodes, nodes[1:])]
