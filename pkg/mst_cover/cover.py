"""Progress oracle, perfect MST cover and the plural-voting greedy solvers."""
from __future__ import annotations

import logging
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple

from .const import COST_MODE_ADDITIVE, COST_MODE_ORACLE
from .exceptions import InvalidCostError, LengthMismatchError, MalformedInstanceError, SolverError
from .graph import Graph, SpanningTree, is_spanning_tree, kruskal
from .preferences import Preference, Profile, degrade, lex_aggregate

_LOGGER = logging.getLogger(__name__)

AgentValue = Callable[[frozenset], int]


@dataclass(frozen=True)
class CostModel:
    """Edge costs: positive singleton costs c(e) plus a monotone submodular set cost c(S)."""
    singleton_costs: Tuple[Fraction, ...]
    mode: str = COST_MODE_ADDITIVE
    set_cost_oracle: Callable[[frozenset], Any] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        costs = tuple(Fraction(value) for value in self.singleton_costs)
        object.__setattr__(self, "singleton_costs", costs)

        non_positive = [e for e, value in enumerate(costs) if value <= 0]
        if non_positive:
            raise InvalidCostError(f"Costs of edges {non_positive} must be strictly positive")
        if self.mode not in (COST_MODE_ADDITIVE, COST_MODE_ORACLE):
            raise MalformedInstanceError(f"Unknown cost mode {self.mode!r}")
        if self.mode == COST_MODE_ORACLE and self.set_cost_oracle is None:
            raise MalformedInstanceError("Oracle cost mode needs a set cost oracle")

    @classmethod
    def additive(cls, costs: Iterable[Any]) -> "CostModel":
        return cls(tuple(costs))

    @classmethod
    def unit(cls, edge_count: int) -> "CostModel":
        return cls((Fraction(1),) * edge_count)

    @classmethod
    def from_oracle(cls, edge_count: int, oracle: Callable[[frozenset], Any]) -> "CostModel":
        """Wrap a set cost function; singleton costs are its values on single edges."""
        singletons = tuple(Fraction(oracle(frozenset({edge_id}))) for edge_id in range(edge_count))
        return cls(singletons, COST_MODE_ORACLE, oracle)

    @classmethod
    def max_of(cls, costs: Iterable[Any]) -> "CostModel":
        """c(S) = largest singleton cost in S (0 for the empty set)."""
        values = tuple(Fraction(value) for value in costs)
        return cls.from_oracle(len(values), lambda edges: max((values[e] for e in edges), default=Fraction(0)))

    @classmethod
    def coverage(
        cls, edge_groups: Sequence[Iterable[Hashable]], item_weights: Mapping[Hashable, Any] | None = None
    ) -> "CostModel":
        """c(S) = total weight of the items covered by the groups of the edges in S."""
        groups = tuple(frozenset(group) for group in edge_groups)
        weights = {item: Fraction(value) for item, value in (item_weights or {}).items()}

        def _cost(edges: frozenset) -> Fraction:
            covered = frozenset().union(*(groups[e] for e in edges)) if edges else frozenset()
            return sum((weights.get(item, Fraction(1)) for item in covered), Fraction(0))

        return cls.from_oracle(len(groups), _cost)

    @property
    def edge_count(self) -> int:
        return len(self.singleton_costs)

    def set_cost(self, edge_ids: Iterable[int]) -> Fraction:
        edges = frozenset(edge_ids)
        if self.mode == COST_MODE_ADDITIVE:
            return sum((self.singleton_costs[e] for e in edges), Fraction(0))
        return Fraction(self.set_cost_oracle(edges))

    def check_edge_count(self, edge_count: int) -> None:
        if self.edge_count != edge_count:
            raise LengthMismatchError(f"Cost model prices {self.edge_count} edges but the graph has {edge_count}")


@dataclass(frozen=True)
class GreedyRound:
    """One greedy round: the chosen edge, its marginal gain and every candidate's vote count."""
    edge: int
    gain: int
    votes: Tuple[Tuple[int, int], ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"edge": self.edge, "gain": self.gain, "votes": [list(vote) for vote in self.votes]}


@dataclass(frozen=True)
class CoverSolution:
    """Selected edges, one witness tree per agent, and the greedy trace that produced them."""
    selected: frozenset[int]
    witnesses: Tuple[SpanningTree, ...] = ()
    rounds: Tuple[GreedyRound, ...] = ()

    @property
    def size(self) -> int:
        return len(self.selected)

    def sorted_selected(self) -> List[int]:
        return sorted(self.selected)

    def cost(self, cost: CostModel | None = None) -> Fraction:
        if cost is None:
            return Fraction(len(self.selected))
        return cost.set_cost(self.selected)


def witness_tree(graph: Graph, pref: Preference, favored: Iterable[int]) -> SpanningTree:
    """An MST of the agent sharing as many edges as possible with ``favored``."""
    return kruskal(graph, degrade(pref, favored))


def progress(graph: Graph, pref: Preference, edge_ids: Iterable[int]) -> int:
    """f_i(H): the largest overlap between H and any MST of the agent."""
    favored = frozenset(edge_ids)
    return len(witness_tree(graph, pref, favored).edge_ids & favored)


def agent_progress(graph: Graph, profile: Profile, edge_ids: Iterable[int]) -> List[int]:
    favored = frozenset(edge_ids)
    return [progress(graph, pref, favored) for pref in profile.agents]


def total_progress(graph: Graph, profile: Profile, edge_ids: Iterable[int]) -> int:
    """F(H) = Σ_i f_i(H); H is feasible iff this equals k·(n-1)."""
    return sum(agent_progress(graph, profile, edge_ids))


def candidate_edges(graph: Graph, pref: Preference, edge_ids: Iterable[int]) -> frozenset[int]:
    """Edges outside H whose addition raises the agent's progress (the agent's votes)."""
    current = frozenset(edge_ids)
    base = progress(graph, pref, current)
    return frozenset(
        edge_id
        for edge_id in graph.edge_ids
        if edge_id not in current and progress(graph, pref, current | {edge_id}) > base
    )


def is_feasible(graph: Graph, profile: Profile, edge_ids: Iterable[int]) -> bool:
    """True iff H contains an MST of every agent."""
    return not unsatisfied_agents(graph, profile, edge_ids)


def unsatisfied_agents(graph: Graph, profile: Profile, edge_ids: Iterable[int]) -> List[int]:
    """0-based indices of the agents without an MST inside H."""
    target = graph.node_count - 1
    return [index for index, value in enumerate(agent_progress(graph, profile, edge_ids)) if value != target]


def is_mst(graph: Graph, pref: Preference, edge_ids: Iterable[int]) -> bool:
    """True iff the edges form a spanning tree that is minimum for the agent."""
    ids = frozenset(edge_ids)
    return is_spanning_tree(graph, ids) and progress(graph, pref, ids) == graph.node_count - 1


def perfect_cover(graph: Graph, profile: Profile) -> SpanningTree | None:
    """Kruskal on the lexicographic aggregate; the tree if it is an MST for everyone, else None."""
    tree = kruskal(graph, lex_aggregate(profile))
    target = graph.node_count - 1
    for index, pref in enumerate(profile.agents):
        if progress(graph, pref, tree.edge_ids) != target:
            _LOGGER.debug("Lexicographic tree %s is not minimum for agent %s", tree.sorted_ids(), index + 1)
            return None
    return tree


def harmonic(d: int) -> Fraction:
    """H_d = Σ_{i=1}^{d} 1/i as an exact fraction."""
    return sum((Fraction(1, i) for i in range(1, d + 1)), Fraction(0))


def wolsey_bound(k: int) -> Fraction:
    """Greedy size ratio guaranteed for k agents (each agent adds at most 1 per edge)."""
    return harmonic(k)


def _evaluate(functions: Sequence[AgentValue], edge_ids: frozenset, executor: Executor | None) -> List[int]:
    if executor is None or len(functions) < 2:
        return [function(edge_ids) for function in functions]
    return list(executor.map(lambda function: function(edge_ids), functions))


def submodular_cover_greedy(
    ground_size: int,
    agent_values: Sequence[AgentValue],
    targets: Sequence[int],
    singleton_costs: Sequence[Fraction] | None = None,
    executor: Executor | None = None,
) -> Tuple[frozenset[int], Tuple[GreedyRound, ...]]:
    """Grow H one element at a time until every agent reaches its target value.

    Each round adds the element maximizing marginal gain (divided by its
    singleton cost when costs are given); ties go to the lowest id and
    elements with zero gain are never picked. Agents already at their
    target are not re-evaluated, their marginal is 0 from then on.
    """
    if len(agent_values) != len(targets):
        raise LengthMismatchError(f"{len(agent_values)} agent value functions for {len(targets)} targets")
    if singleton_costs is not None and len(singleton_costs) != ground_size:
        raise LengthMismatchError(f"{len(singleton_costs)} costs for {ground_size} elements")

    selected: frozenset[int] = frozenset()
    current = _evaluate(agent_values, selected, executor)
    rounds: List[GreedyRound] = []

    while sum(current) < sum(targets):
        active = [i for i, value in enumerate(current) if value < targets[i]]
        functions = [agent_values[i] for i in active]
        base = sum(current[i] for i in active)

        best_edge: int | None = None
        best_score: Fraction | None = None
        best_values: List[int] = []
        votes: List[Tuple[int, int]] = []

        for element in range(ground_size):
            if element in selected:
                continue
            values = _evaluate(functions, selected | {element}, executor)
            gain = sum(values) - base
            if gain <= 0:
                continue
            votes.append((element, gain))
            score = Fraction(gain) if singleton_costs is None else Fraction(gain) / singleton_costs[element]
            if best_score is None or score > best_score:
                best_edge, best_score, best_values = element, score, values

        if best_edge is None:
            raise SolverError(f"No element raises the objective at {sum(current)} < {sum(targets)}")

        selected = selected | {best_edge}
        for agent, value in zip(active, best_values):
            current[agent] = value
        gain = sum(best_values) - base
        rounds.append(GreedyRound(best_edge, gain, tuple(votes)))
        _LOGGER.debug("Round %s: picked %s (gain %s, %s candidates)", len(rounds), best_edge, gain, len(votes))

    return selected, tuple(rounds)


def attach_witnesses(
    graph: Graph, profile: Profile, selected: frozenset[int], rounds: Tuple[GreedyRound, ...]
) -> CoverSolution:
    witnesses = tuple(witness_tree(graph, pref, selected) for pref in profile.agents)
    for index, tree in enumerate(witnesses):
        if not tree.edge_ids <= selected:
            raise SolverError(f"Witness of agent {index + 1} leaves the selected edge set")
    return CoverSolution(selected, witnesses, rounds)


def greedy_cover(graph: Graph, profile: Profile, executor: Executor | None = None) -> CoverSolution:
    """Multi-round plural voting: add the edge with the most agent votes until all are satisfied."""
    return _progress_greedy(graph, profile, None, executor)


def weighted_greedy_cover(
    graph: Graph, profile: Profile, cost: CostModel, executor: Executor | None = None
) -> CoverSolution:
    """Plural voting where each edge's votes are divided by its singleton cost."""
    cost.check_edge_count(graph.edge_count)
    return _progress_greedy(graph, profile, cost.singleton_costs, executor)


def _progress_greedy(
    graph: Graph, profile: Profile, singleton_costs: Sequence[Fraction] | None, executor: Executor | None
) -> CoverSolution:
    if profile.edge_count != graph.edge_count:
        raise LengthMismatchError(f"Profile ranks {profile.edge_count} edges but the graph has {graph.edge_count}")
    if graph.node_count == 1:
        return CoverSolution(frozenset(), tuple(SpanningTree(frozenset()) for _ in profile.agents), ())

    agent_values = [partial(progress, graph, pref) for pref in profile.agents]
    targets = [graph.node_count - 1] * profile.k
    selected, rounds = submodular_cover_greedy(graph.edge_count, agent_values, targets, singleton_costs, executor)
    _LOGGER.info("Greedy cover selected %s edges in %s rounds", len(selected), len(rounds))
    return attach_witnesses(graph, profile, selected, rounds)
