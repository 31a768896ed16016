"""Ordinal edge preferences, consistency with cardinal weights, and their refinements."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Sequence, Tuple

from .exceptions import LengthMismatchError, MalformedInstanceError

_LOGGER = logging.getLogger(__name__)


def dense_ranks(values: Sequence[Hashable]) -> Tuple[int, ...]:
    """Map sortable values to ranks 1..κ, equal values sharing a rank."""
    index = {value: position for position, value in enumerate(sorted(set(values)), start=1)}
    return tuple(index[value] for value in values)


@dataclass(frozen=True)
class Preference:
    """One agent's total preorder over edges, stored as a rank vector (lower is cheaper).

    Ranks are normalized to 1..κ on construction, so any order-isomorphic
    vector yields an equal Preference.
    """
    rank: Tuple[int, ...]

    def __post_init__(self) -> None:
        ranks = tuple(self.rank)
        for edge_id, value in enumerate(ranks):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise MalformedInstanceError(f"Rank of edge {edge_id} must be a positive integer, got {value!r}")
        object.__setattr__(self, "rank", dense_ranks(ranks))

    @classmethod
    def from_classes(cls, classes: Sequence[Iterable[int]], edge_count: int) -> "Preference":
        """Build from an ordered partition (cheapest class first)."""
        rank = [0] * edge_count
        for position, members in enumerate(classes, start=1):
            for edge_id in members:
                if rank[edge_id]:
                    raise MalformedInstanceError(f"Edge {edge_id} appears in more than one class")
                rank[edge_id] = position
        if not all(rank):
            missing = [e for e, value in enumerate(rank) if not value]
            raise MalformedInstanceError(f"Classes do not cover edges {missing}")
        return cls(tuple(rank))

    @property
    def edge_count(self) -> int:
        return len(self.rank)

    @cached_property
    def classes(self) -> Tuple[frozenset[int], ...]:
        """Equivalence classes in ascending rank."""
        buckets: Dict[int, List[int]] = {}
        for edge_id, value in enumerate(self.rank):
            buckets.setdefault(value, []).append(edge_id)
        return tuple(frozenset(buckets[value]) for value in sorted(buckets))

    @property
    def kappa(self) -> int:
        return len(self.classes)

    def prefers(self, a: int, b: int) -> bool:
        """True iff edge ``a`` is strictly cheaper than edge ``b``."""
        return self.rank[a] < self.rank[b]

    def indifferent(self, a: int, b: int) -> bool:
        return self.rank[a] == self.rank[b]


@dataclass(frozen=True)
class WeightFunction:
    """Non-negative cardinal weights indexed by edge id."""
    values: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = tuple(Fraction(value) for value in self.values)
        negative = [e for e, value in enumerate(values) if value < 0]
        if negative:
            raise MalformedInstanceError(f"Weights of edges {negative} are negative")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_preference(cls, pref: Preference) -> "WeightFunction":
        """Canonical consistent weights w(e) = rank(e)."""
        return cls(tuple(Fraction(value) for value in pref.rank))

    def __len__(self) -> int:
        return len(self.values)

    def total(self, edge_ids: Iterable[int]) -> Fraction:
        return sum((self.values[e] for e in edge_ids), Fraction(0))


@dataclass(frozen=True)
class Profile:
    """All agents' preferences in a fixed agent order, plus optional cardinal weights."""
    agents: Tuple[Preference, ...]
    weights: Tuple[WeightFunction, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        agents = tuple(self.agents)
        object.__setattr__(self, "agents", agents)
        if not agents:
            raise MalformedInstanceError("A profile needs at least one agent")

        edge_count = agents[0].edge_count
        for index, pref in enumerate(agents):
            if pref.edge_count != edge_count:
                raise LengthMismatchError(
                    f"Agent {index + 1} ranks {pref.edge_count} edges, agent 1 ranks {edge_count}"
                )

        if self.weights is not None:
            weights = tuple(self.weights)
            object.__setattr__(self, "weights", weights)
            if len(weights) != len(agents):
                raise LengthMismatchError(f"{len(weights)} weight functions for {len(agents)} agents")
            for index, (weight, pref) in enumerate(zip(weights, agents)):
                if not is_consistent(weight, pref):
                    raise MalformedInstanceError(f"Weights of agent {index + 1} are not consistent with its ranks")

    @property
    def k(self) -> int:
        return len(self.agents)

    @property
    def edge_count(self) -> int:
        return self.agents[0].edge_count

    def __iter__(self) -> Iterator[Preference]:
        return iter(self.agents)

    def __len__(self) -> int:
        return len(self.agents)

    def __getitem__(self, index: int) -> Preference:
        return self.agents[index]


def is_consistent(weights: WeightFunction, pref: Preference) -> bool:
    """True iff weights order and tie edges exactly as the preference does."""
    if len(weights) != pref.edge_count:
        raise LengthMismatchError(f"{len(weights)} weights for a preference over {pref.edge_count} edges")

    rank_of_weight: Dict[Fraction, int] = {}
    for edge_id, value in enumerate(weights.values):
        rank = pref.rank[edge_id]
        if rank_of_weight.setdefault(value, rank) != rank:
            return False

    # Equal ranks must share a weight and ranks must grow with weight.
    if len(set(rank_of_weight.values())) != len(rank_of_weight):
        return False
    ordered = [rank_of_weight[value] for value in sorted(rank_of_weight)]
    return all(a < b for a, b in zip(ordered, ordered[1:]))


def lex_aggregate(profile: Profile) -> Preference:
    """Order edges by their rank vectors (σ_1(e), …, σ_k(e)) lexicographically."""
    vectors: List[Tuple[int, ...]] = [
        tuple(pref.rank[edge_id] for pref in profile.agents) for edge_id in range(profile.edge_count)
    ]
    return Preference(dense_ranks(vectors))


def degrade(pref: Preference, favored: Iterable[int]) -> Preference:
    """Split every class into (members in ``favored``, the rest), favored part first."""
    favored_ids = frozenset(favored)
    return Preference(tuple(2 * value - (edge_id in favored_ids) for edge_id, value in enumerate(pref.rank)))


def order_isomorphic(a: Any, b: Any) -> bool:
    """True iff two preferences (or rank vectors) induce the same preorder."""
    ranks_a = getattr(a, "rank", a)
    ranks_b = getattr(b, "rank", b)
    return len(ranks_a) == len(ranks_b) and dense_ranks(ranks_a) == dense_ranks(ranks_b)
