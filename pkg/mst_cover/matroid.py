"""Rank-oracle matroids, the MST matroid, axiom checking and the matroid-constrained greedy."""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

import voluptuous as vol

from .const import MATROID_PARTITION, MATROID_UNIFORM, MAX_AXIOM_GROUND_SIZE
from .cover import CostModel, CoverSolution, is_mst, progress, submodular_cover_greedy
from .exceptions import LengthMismatchError, MalformedInstanceError, SizeGuardError, SolverError
from .graph import Graph, SpanningTree, tree_path
from .preferences import Preference

_LOGGER = logging.getLogger(__name__)


class RankOracle(ABC):
    """A matroid on elements 0..m-1 described by its rank function."""

    @property
    @abstractmethod
    def ground_size(self) -> int:
        """Number of elements in the ground set."""

    @abstractmethod
    def rank(self, elements: Iterable[int]) -> int:
        """Size of the largest independent subset of ``elements``."""

    def is_independent(self, elements: Iterable[int]) -> bool:
        members = frozenset(elements)
        return self.rank(members) == len(members)

    def full_rank(self) -> int:
        return self.rank(range(self.ground_size))


class MstMatroid(RankOracle):
    """Independent sets are the edge sets contained in some MST of one agent."""

    def __init__(self, graph: Graph, pref: Preference) -> None:
        if pref.edge_count != graph.edge_count:
            raise LengthMismatchError(f"Preference ranks {pref.edge_count} edges, graph has {graph.edge_count}")
        self.graph = graph
        self.pref = pref

    @property
    def ground_size(self) -> int:
        return self.graph.edge_count

    def rank(self, elements: Iterable[int]) -> int:
        return mst_rank(self, elements)

    def full_rank(self) -> int:
        return self.graph.node_count - 1


class UniformMatroid(RankOracle):
    """U(r, m): every set of at most r elements is independent."""

    def __init__(self, ground_size: int, max_rank: int) -> None:
        self._ground_size = ground_size
        self.max_rank = max_rank

    @property
    def ground_size(self) -> int:
        return self._ground_size

    def rank(self, elements: Iterable[int]) -> int:
        return min(len(frozenset(elements)), self.max_rank)


class PartitionMatroid(RankOracle):
    """At most ``capacities[j]`` elements may be taken from block j; unlisted elements are loops."""

    def __init__(self, ground_size: int, blocks: Sequence[Iterable[int]], capacities: Sequence[int]) -> None:
        if len(blocks) != len(capacities):
            raise LengthMismatchError(f"{len(blocks)} blocks with {len(capacities)} capacities")
        self._ground_size = ground_size
        self.blocks = tuple(frozenset(block) for block in blocks)
        self.capacities = tuple(capacities)

        seen: set[int] = set()
        for block in self.blocks:
            if seen & block or any(not 0 <= e < ground_size for e in block):
                raise MalformedInstanceError("Partition blocks must be disjoint subsets of the ground set")
            seen |= block

    @property
    def ground_size(self) -> int:
        return self._ground_size

    def rank(self, elements: Iterable[int]) -> int:
        members = frozenset(elements)
        return sum(min(len(members & block), cap) for block, cap in zip(self.blocks, self.capacities))


class FunctionRankOracle(RankOracle):
    """Adapter turning any callable into a rank oracle (it is trusted, not checked)."""

    def __init__(self, ground_size: int, rank_function: Callable[[frozenset], int]) -> None:
        self._ground_size = ground_size
        self._rank_function = rank_function

    @property
    def ground_size(self) -> int:
        return self._ground_size

    def rank(self, elements: Iterable[int]) -> int:
        return int(self._rank_function(frozenset(elements)))


_COUNT = vol.All(int, vol.Range(min=0))

MATROID_SCHEMA = vol.Schema(vol.Any(
    {
        vol.Required("kind"): MATROID_UNIFORM,
        vol.Required("ground_size"): _COUNT,
        vol.Required("rank"): _COUNT,
    },
    {
        vol.Required("kind"): MATROID_PARTITION,
        vol.Required("ground_size"): _COUNT,
        vol.Required("blocks"): [[_COUNT]],
        vol.Required("capacities"): [_COUNT],
    },
))


def matroid_from_dict(data: Mapping[str, Any]) -> RankOracle:
    """Build a uniform or partition matroid from its file entry."""
    try:
        entry = MATROID_SCHEMA(dict(data))
    except vol.Invalid as err:
        raise MalformedInstanceError(f"Invalid matroid entry: {err}") from err
    if entry["kind"] == MATROID_UNIFORM:
        return UniformMatroid(entry["ground_size"], entry["rank"])
    return PartitionMatroid(entry["ground_size"], entry["blocks"], entry["capacities"])


def matroid_to_dict(oracle: RankOracle) -> Dict[str, Any]:
    if isinstance(oracle, UniformMatroid):
        return {"kind": MATROID_UNIFORM, "ground_size": oracle.ground_size, "rank": oracle.max_rank}
    if isinstance(oracle, PartitionMatroid):
        return {
            "kind": MATROID_PARTITION,
            "ground_size": oracle.ground_size,
            "blocks": [sorted(block) for block in oracle.blocks],
            "capacities": list(oracle.capacities),
        }
    raise MalformedInstanceError(f"{type(oracle).__name__} has no file representation")


def mst_rank(matroid: MstMatroid, elements: Iterable[int]) -> int:
    """Rank in the MST matroid, which is the agent's progress value."""
    return progress(matroid.graph, matroid.pref, elements)


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of an exhaustive matroid check; ``counterexample`` holds the first violating sets."""
    ok: bool
    axiom: str | None = None
    counterexample: Tuple[frozenset[int], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _members(mask: int) -> frozenset[int]:
    return frozenset(bit for bit in range(mask.bit_length()) if mask >> bit & 1)


def check_matroid_axioms(oracle: RankOracle) -> AxiomCheck:
    """Exhaustively verify that the rank oracle describes a matroid.

    Independence is derived from rank (rank(S) = |S|). Checked in order:
    the empty set is independent, hereditary property, augmentation
    property, and that rank(S) is the size of S's largest independent subset.
    """
    size = oracle.ground_size
    if size > MAX_AXIOM_GROUND_SIZE:
        raise SizeGuardError(f"Axiom check enumerates 2^{size} sets; the limit is 2^{MAX_AXIOM_GROUND_SIZE}")

    ranks: Dict[int, int] = {mask: oracle.rank(_members(mask)) for mask in range(1 << size)}
    independent = {mask for mask, value in ranks.items() if value == bin(mask).count("1")}

    if 0 not in independent:
        return AxiomCheck(False, "empty-set", (frozenset(),))

    for mask in sorted(independent):
        for bit in range(size):
            if mask >> bit & 1 and mask & ~(1 << bit) not in independent:
                return AxiomCheck(False, "hereditary", (_members(mask), _members(mask & ~(1 << bit))))

    by_size: Dict[int, List[int]] = {}
    for mask in sorted(independent):
        by_size.setdefault(bin(mask).count("1"), []).append(mask)
    # With the hereditary property it is enough to augment from sets one element larger.
    for small_size, smaller in sorted(by_size.items()):
        for larger in by_size.get(small_size + 1, []):
            for small in smaller:
                extra = larger & ~small
                if not any(extra >> bit & 1 and small | 1 << bit in independent for bit in range(size)):
                    return AxiomCheck(False, "augmentation", (_members(larger), _members(small)))

    largest: Dict[int, int] = {}
    for mask in range(1 << size):
        if mask in independent:
            largest[mask] = bin(mask).count("1")
        else:
            largest[mask] = max(largest[mask & ~(1 << bit)] for bit in range(size) if mask >> bit & 1)
        if largest[mask] != ranks[mask]:
            return AxiomCheck(False, "rank", (_members(mask),))

    return AxiomCheck(True)


def matroid_greedy(
    oracles: Sequence[RankOracle], cost: CostModel | None = None, executor: Executor | None = None
) -> CoverSolution:
    """Add the element with the best rank gain per unit cost until every oracle is at full rank."""
    if not oracles:
        raise MalformedInstanceError("Matroid greedy needs at least one oracle")
    ground_size = oracles[0].ground_size
    if any(oracle.ground_size != ground_size for oracle in oracles):
        raise LengthMismatchError("All rank oracles must share one ground set")
    if cost is not None:
        cost.check_edge_count(ground_size)

    targets = [oracle.full_rank() for oracle in oracles]
    selected, rounds = submodular_cover_greedy(
        ground_size,
        [oracle.rank for oracle in oracles],
        targets,
        None if cost is None else cost.singleton_costs,
        executor,
    )
    _LOGGER.info("Matroid greedy reached full rank %s with %s elements", sum(targets), len(selected))
    return CoverSolution(selected, (), rounds)


def swap_check(matroid: MstMatroid, edge: int, tree: SpanningTree) -> int | None:
    """An edge of the tree that ``edge`` can replace while keeping an MST, or None.

    Candidates lie on the tree path between the endpoints of ``edge`` and
    must be tied with it; the lowest id wins.
    """
    graph, pref = matroid.graph, matroid.pref
    if edge in tree:
        raise MalformedInstanceError(f"Edge {edge} already belongs to the tree")
    if not is_mst(graph, pref, tree.edge_ids):
        raise MalformedInstanceError(f"Edges {tree.sorted_ids()} are not an MST of this agent")

    u, v = graph.endpoints(edge)
    cycle = tree_path(graph, tree.edge_ids, u, v)
    tied = sorted(e for e in cycle if pref.indifferent(e, edge))
    if not tied:
        return None
    if not is_mst(graph, pref, (tree.edge_ids - {tied[0]}) | {edge}):
        raise SolverError(f"Swapping {edge} for {tied[0]} broke minimality")
    return tied[0]
