"""Brute-force exact solvers used as ground truth for the approximation algorithms.

Everything here enumerates spanning trees or edge subsets, so every entry
point is guarded by a size limit and raises SizeGuardError beyond it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, List, Sequence, Tuple

from .const import MAX_ENUMERATION_EDGES, MAX_SET_COVER_SETS
from .cover import CostModel, is_feasible, is_mst
from .exceptions import MalformedInstanceError, SizeGuardError, SolverError
from .graph import DisjointSets, Graph, SpanningTree, kruskal
from .preferences import Preference, Profile

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MstSet:
    """All minimum spanning trees of one agent, with their common score Σ rank(e)."""
    trees: Tuple[SpanningTree, ...]
    score: int

    def __iter__(self) -> Iterator[SpanningTree]:
        return iter(self.trees)

    def __len__(self) -> int:
        return len(self.trees)

    def __contains__(self, tree: object) -> bool:
        return tree in self.trees


def _check_enumeration_guard(graph: Graph) -> None:
    if graph.edge_count > MAX_ENUMERATION_EDGES:
        raise SizeGuardError(
            f"Brute force is limited to {MAX_ENUMERATION_EDGES} edges, instance has {graph.edge_count}"
        )


def _spans(graph: Graph, edge_ids: Iterable[int]) -> bool:
    forest = DisjointSets(graph.node_count)
    components = graph.node_count
    for edge_id in edge_ids:
        if forest.join(*graph.edges[edge_id]):
            components -= 1
    return components == 1


def _mask(edge_ids: Iterable[int]) -> int:
    return sum(1 << edge_id for edge_id in edge_ids)


def _subsets_by_size(count: int, sizes: Iterable[int]) -> Iterator[Tuple[int, ...]]:
    """Subsets of 0..count-1, size-major, then by ascending bitmask."""
    for size in sizes:
        yield from sorted(combinations(range(count), size), key=_mask)


def enumerate_spanning_trees(graph: Graph) -> Iterator[SpanningTree]:
    """Every spanning tree, by recursive inclusion/exclusion of edges in id order.

    Inclusion is pruned when it closes a cycle, exclusion when the remaining
    edges can no longer connect the graph.
    """
    _check_enumeration_guard(graph)
    needed = graph.node_count - 1
    count = graph.edge_count

    def _extend(position: int, chosen: List[int]) -> Iterator[SpanningTree]:
        if len(chosen) == needed:
            yield SpanningTree(frozenset(chosen))
            return
        if len(chosen) + (count - position) < needed:
            return

        forest = DisjointSets(graph.node_count)
        for edge_id in chosen:
            forest.join(*graph.edges[edge_id])
        if forest.join(*graph.edges[position]):
            yield from _extend(position + 1, chosen + [position])

        if _spans(graph, chosen + list(range(position + 1, count))):
            yield from _extend(position + 1, chosen)

    yield from _extend(0, [])


def tree_score(pref: Preference, tree: SpanningTree) -> int:
    return sum(pref.rank[edge_id] for edge_id in tree.edge_ids)


def enumerate_msts(graph: Graph, pref: Preference, trees: Sequence[SpanningTree] | None = None) -> MstSet:
    """All spanning trees of minimum total rank, which are exactly the agent's MSTs."""
    candidates = list(enumerate_spanning_trees(graph)) if trees is None else list(trees)
    scores = [tree_score(pref, tree) for tree in candidates]
    best = min(scores)
    msts = tuple(tree for tree, score in zip(candidates, scores) if score == best)
    _LOGGER.debug("%s of %s spanning trees are minimum (score %s)", len(msts), len(candidates), best)
    return MstSet(msts, best)


def brute_force_progress(graph: Graph, pref: Preference, edge_ids: Iterable[int], msts: MstSet | None = None) -> int:
    """max over the agent's MSTs of |T ∩ H|."""
    favored = frozenset(edge_ids)
    trees = enumerate_msts(graph, pref) if msts is None else msts
    return max(len(tree.edge_ids & favored) for tree in trees)


def mst_overlap_set(msts: MstSet, edge_ids: Iterable[int]) -> Tuple[SpanningTree, ...]:
    """The MSTs attaining the maximum overlap with H."""
    favored = frozenset(edge_ids)
    best = max(len(tree.edge_ids & favored) for tree in msts)
    return tuple(tree for tree in msts if len(tree.edge_ids & favored) == best)


def perfect_cover_exists(graph: Graph, profile: Profile) -> SpanningTree | None:
    """First spanning tree (enumeration order) that is minimum for every agent, if any."""
    trees = list(enumerate_spanning_trees(graph))
    best = [min(tree_score(pref, tree) for tree in trees) for pref in profile.agents]
    for tree in trees:
        if all(tree_score(pref, tree) == score for pref, score in zip(profile.agents, best)):
            return tree
    return None


def perfect_cover_by_weight_sum(graph: Graph, profile: Profile) -> SpanningTree | None:
    """MST under the summed weights Σ_i rank_i(e); returned only if it is minimum for all agents."""
    summed = [sum(pref.rank[edge_id] for pref in profile.agents) for edge_id in graph.edge_ids]
    tree = kruskal(graph, summed)
    if all(is_mst(graph, pref, tree.edge_ids) for pref in profile.agents):
        return tree
    return None


def exact_min_cover(graph: Graph, profile: Profile, cost: CostModel | None = None) -> frozenset[int]:
    """A minimum MST cover by subset enumeration.

    Without a cost model the first feasible subset in size-major, ascending
    bitmask order is returned; with one, the first subset of strictly lowest cost.
    """
    _check_enumeration_guard(graph)
    if graph.node_count == 1:
        return frozenset()

    sizes = range(graph.node_count - 1, graph.edge_count + 1)
    if cost is None:
        for subset in _subsets_by_size(graph.edge_count, sizes):
            if _spans(graph, subset) and is_feasible(graph, profile, subset):
                return frozenset(subset)
        raise MalformedInstanceError("No MST cover exists, which is impossible for a connected graph")

    cost.check_edge_count(graph.edge_count)
    best: frozenset[int] | None = None
    best_cost: Fraction | None = None
    for subset in _subsets_by_size(graph.edge_count, sizes):
        value = cost.set_cost(subset)
        if best_cost is not None and value >= best_cost:
            continue
        if _spans(graph, subset) and is_feasible(graph, profile, subset):
            best, best_cost = frozenset(subset), value
    if best is None:
        raise MalformedInstanceError("No MST cover exists, which is impossible for a connected graph")
    return best


def optimal_covers(graph: Graph, profile: Profile, cost: CostModel | None = None) -> List[frozenset[int]]:
    """Every MST cover of minimum size (or cost), in enumeration order."""
    _check_enumeration_guard(graph)
    if graph.node_count == 1:
        return [frozenset()]

    best_cost: Fraction | None = None
    found: List[frozenset[int]] = []
    for subset in _subsets_by_size(graph.edge_count, range(graph.node_count - 1, graph.edge_count + 1)):
        value = Fraction(len(subset)) if cost is None else cost.set_cost(subset)
        if best_cost is not None and value > best_cost:
            continue
        if not (_spans(graph, subset) and is_feasible(graph, profile, subset)):
            continue
        if best_cost is None or value < best_cost:
            best_cost, found = value, []
        found.append(frozenset(subset))
    return found


def exact_set_cover(universe_size: int, sets: Sequence[Iterable[int]]) -> Tuple[int, ...]:
    """Indices of a minimum number of sets covering 0..universe_size-1."""
    members = [frozenset(s) for s in sets]
    if len(members) > MAX_SET_COVER_SETS:
        raise SizeGuardError(f"Set cover enumeration is limited to {MAX_SET_COVER_SETS} sets, got {len(members)}")
    universe = frozenset(range(universe_size))
    if frozenset().union(*members) != universe:
        raise MalformedInstanceError("The sets do not cover exactly the universe 0..p-1")

    for subset in _subsets_by_size(len(members), range(len(members) + 1)):
        if frozenset().union(*(members[i] for i in subset)) == universe:
            return subset
    raise SolverError("No subfamily covers the universe although the union does")


def curvature(cost: CostModel, edge_ids: Iterable[int]) -> Fraction:
    """Σ_{e∈H} c({e}) / c(H)."""
    edges = frozenset(edge_ids)
    total = cost.set_cost(edges)
    if total == 0:
        raise MalformedInstanceError("Curvature is undefined for a set of zero cost")
    return sum((cost.singleton_costs[e] for e in edges), Fraction(0)) / total


def instance_curvature(graph: Graph, profile: Profile, cost: CostModel) -> Fraction:
    """γ: the smallest curvature over all minimum-cost covers."""
    return min(curvature(cost, cover) for cover in optimal_covers(graph, profile, cost))
