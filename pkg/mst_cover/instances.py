"""Instance generators, set-cover reductions and canonical JSON file I/O."""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
import voluptuous as vol

from .const import (
    COST_MODE_ADDITIVE,
    KEY_AGENTS,
    KEY_COSTS,
    KEY_EDGES,
    KEY_MATROIDS,
    KEY_META,
    KEY_NODES,
    KEY_RANK,
    KEY_ROUNDS,
    KEY_SELECTED,
    KEY_SETS,
    KEY_UNIVERSE_SIZE,
    KEY_WITNESSES,
    KIND_RANDOM,
    KIND_SETCOVER_T1,
    KIND_SETCOVER_T2,
    MAX_CONNECT_ATTEMPTS,
    META_COPIES,
    META_GENERATOR,
    META_H,
    META_SEED,
    RANK_CHEAP,
    RANK_EXPENSIVE,
)
from .cover import CostModel, CoverSolution, GreedyRound
from .exceptions import DisconnectedGraphError, LengthMismatchError, MalformedInstanceError
from .graph import Graph, SpanningTree
from .matroid import RankOracle, matroid_from_dict, matroid_to_dict
from .oracle import exact_min_cover, exact_set_cover
from .preferences import Preference, Profile

_LOGGER = logging.getLogger(__name__)

_RANK_VECTOR = [vol.All(int, vol.Range(min=1))]

INSTANCE_SCHEMA = vol.Schema({
    vol.Required(KEY_NODES): vol.All(int, vol.Range(min=1)),
    vol.Required(KEY_EDGES): [vol.ExactSequence([int, int])],
    vol.Required(KEY_AGENTS): vol.All([{vol.Required(KEY_RANK): _RANK_VECTOR}], vol.Length(min=1)),
    vol.Optional(KEY_COSTS): [vol.Any(int, float, str)],
    vol.Optional(KEY_META, default={}): dict,
})

ROUND_SCHEMA = vol.Schema({
    vol.Required("edge"): int,
    vol.Required("gain"): int,
    vol.Required("votes"): [vol.ExactSequence([int, int])],
})

SOLUTION_SCHEMA = vol.Schema({
    vol.Required(KEY_SELECTED): [int],
    vol.Optional(KEY_WITNESSES, default=[]): [[int]],
    vol.Optional(KEY_ROUNDS, default=[]): [ROUND_SCHEMA],
    vol.Optional(KEY_META, default={}): dict,
})

SET_COVER_SCHEMA = vol.Schema({
    vol.Required(KEY_UNIVERSE_SIZE): vol.All(int, vol.Range(min=1)),
    vol.Required(KEY_SETS): vol.All([[vol.All(int, vol.Range(min=0))]], vol.Length(min=1)),
})


@dataclass(frozen=True)
class Instance:
    """A graph, one preference per agent, optional costs and provenance metadata."""
    graph: Graph
    profile: Profile
    costs: CostModel | None = None
    meta: Mapping[str, Any] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        if self.profile.edge_count != self.graph.edge_count:
            raise LengthMismatchError(
                f"Agents rank {self.profile.edge_count} edges but the graph has {self.graph.edge_count}"
            )
        if self.costs is not None:
            self.costs.check_edge_count(self.graph.edge_count)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def k(self) -> int:
        return self.profile.k

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            KEY_NODES: self.graph.node_count,
            KEY_EDGES: [list(edge) for edge in self.graph.edges],
            KEY_AGENTS: [{KEY_RANK: list(pref.rank)} for pref in self.profile.agents],
            KEY_META: dict(self.meta),
        }
        if self.costs is not None:
            if self.costs.mode != COST_MODE_ADDITIVE:
                raise MalformedInstanceError("Only additive costs can be written to an instance file")
            data[KEY_COSTS] = [format_cost(value) for value in self.costs.singleton_costs]
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Instance":
        try:
            data = INSTANCE_SCHEMA(dict(data))
        except vol.Invalid as err:
            raise MalformedInstanceError(f"Invalid instance: {err}") from err

        graph = Graph(data[KEY_NODES], tuple(tuple(edge) for edge in data[KEY_EDGES]))
        for index, agent in enumerate(data[KEY_AGENTS]):
            if len(agent[KEY_RANK]) != graph.edge_count:
                raise LengthMismatchError(
                    f"Agent {index + 1} ranks {len(agent[KEY_RANK])} edges but the graph has {graph.edge_count}"
                )
        profile = Profile(tuple(Preference(tuple(agent[KEY_RANK])) for agent in data[KEY_AGENTS]))

        costs = None
        if KEY_COSTS in data:
            if len(data[KEY_COSTS]) != graph.edge_count:
                raise LengthMismatchError(f"{len(data[KEY_COSTS])} costs for {graph.edge_count} edges")
            costs = CostModel.additive(parse_cost(value) for value in data[KEY_COSTS])
        return cls(graph, profile, costs, data[KEY_META])

    def with_costs(self, costs: CostModel | None) -> "Instance":
        return Instance(self.graph, self.profile, costs, self.meta)


@dataclass(frozen=True)
class SetCoverInput:
    """A universe 0..p-1 and q sets whose union is the universe."""
    universe_size: int
    sets: Tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        sets = tuple(frozenset(members) for members in self.sets)
        object.__setattr__(self, "sets", sets)
        if self.universe_size < 1:
            raise MalformedInstanceError("Set cover needs a non-empty universe")
        if not sets:
            raise MalformedInstanceError("Set cover needs at least one set")
        universe = frozenset(range(self.universe_size))
        for index, members in enumerate(sets):
            if not members <= universe:
                raise MalformedInstanceError(f"Set {index} has elements outside 0..{self.universe_size - 1}")
        if frozenset().union(*sets) != universe:
            missing = sorted(universe - frozenset().union(*sets))
            raise MalformedInstanceError(f"Elements {missing} are covered by no set")

    @property
    def q(self) -> int:
        return len(self.sets)

    def to_dict(self) -> Dict[str, Any]:
        return {KEY_UNIVERSE_SIZE: self.universe_size, KEY_SETS: [sorted(members) for members in self.sets]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SetCoverInput":
        try:
            data = SET_COVER_SCHEMA(dict(data))
        except vol.Invalid as err:
            raise MalformedInstanceError(f"Invalid set cover: {err}") from err
        return cls(data[KEY_UNIVERSE_SIZE], tuple(frozenset(members) for members in data[KEY_SETS]))


def format_cost(value: Fraction) -> int | str:
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def parse_cost(value: Any) -> Fraction:
    try:
        if isinstance(value, float):
            return Fraction(str(value))
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as err:
        raise MalformedInstanceError(f"Cannot read cost {value!r}") from err


# Reductions from set cover


def reduce_set_cover(sc: SetCoverInput, h: int = 1, single_copy: bool = False) -> Instance:
    """Build the MST cover instance encoding a set cover input.

    Nodes are the copies a_1..a_c of the hub (ids 0..c-1) followed by b_1..b_q.
    Down-edges (b_i, b_{i+1}) come first, then the up-edges (a_t, b_i) grouped
    by copy. Agent j ranks down-edges and the up-edges towards sets holding
    element j cheap; the last agent ranks only down-edges cheap. ``single_copy``
    builds one hub, otherwise there are h·(q-1) hubs.
    """
    q = sc.q
    if single_copy:
        copies = 1
        h = 0
    else:
        if h < 1:
            raise MalformedInstanceError(f"h must be a positive integer, got {h}")
        if q < 2:
            raise MalformedInstanceError("The amplified reduction needs at least two sets")
        copies = h * (q - 1)

    hubs = list(range(copies))
    set_nodes = [copies + i for i in range(q)]
    edges: List[Tuple[int, int]] = [(set_nodes[i], set_nodes[i + 1]) for i in range(q - 1)]
    for hub in hubs:
        edges.extend((hub, set_nodes[i]) for i in range(q))

    down = [RANK_CHEAP] * (q - 1)
    agents = []
    for element in range(sc.universe_size):
        up = [RANK_CHEAP if element in sc.sets[i] else RANK_EXPENSIVE for i in range(q)]
        agents.append(Preference(tuple(down + up * copies)))
    agents.append(Preference(tuple(down + [RANK_EXPENSIVE] * (q * copies))))

    meta = {
        META_GENERATOR: KIND_SETCOVER_T1 if single_copy else KIND_SETCOVER_T2,
        META_H: h,
        META_COPIES: copies,
        **sc.to_dict(),
    }
    instance = Instance(Graph(copies + q, tuple(edges)), Profile(tuple(agents)), None, meta)
    _LOGGER.info(
        "Reduced set cover (p=%s, q=%s) to %s nodes, %s edges, %s agents",
        sc.universe_size, q, instance.graph.node_count, instance.graph.edge_count, instance.k,
    )
    return instance


def _reduction_shape(instance: Instance) -> Tuple[int, int]:
    meta = instance.meta
    if meta.get(META_GENERATOR) not in (KIND_SETCOVER_T1, KIND_SETCOVER_T2) or KEY_SETS not in meta:
        raise MalformedInstanceError("Instance was not produced by a set cover reduction")
    return int(meta[META_COPIES]), len(meta[KEY_SETS])


def copy_neighborhoods(instance: Instance, edge_ids: Iterable[int]) -> List[frozenset[int]]:
    """For each hub copy, the indices of the sets whose up-edge is in H."""
    copies, q = _reduction_shape(instance)
    selected = instance.graph.check_edge_ids(edge_ids)
    neighborhoods: List[set[int]] = [set() for _ in range(copies)]
    for edge_id in selected:
        if edge_id < q - 1:
            continue
        hub, set_index = divmod(edge_id - (q - 1), q)
        neighborhoods[hub].add(set_index)
    return [frozenset(members) for members in neighborhoods]


def set_cover_from_cover(instance: Instance, edge_ids: Iterable[int]) -> Tuple[int, ...]:
    """Read a set cover off the hub copy with the fewest selected up-edges (lowest copy on ties)."""
    neighborhoods = copy_neighborhoods(instance, edge_ids)
    smallest = min(neighborhoods, key=len)
    return tuple(sorted(smallest))


def opt_identity_check(sc: SetCoverInput, h: int = 1, single_copy: bool = False) -> bool:
    """Compare the optimal cover size of the reduction with copies·|OPT(SC)| + q - 1."""
    instance = reduce_set_cover(sc, h, single_copy)
    cover_size = len(exact_min_cover(instance.graph, instance.profile))
    set_cover_size = len(exact_set_cover(sc.universe_size, sc.sets))
    expected = instance.meta[META_COPIES] * set_cover_size + sc.q - 1
    _LOGGER.debug("Optimal cover %s, expected %s (|OPT(SC)| = %s)", cover_size, expected, set_cover_size)
    return cover_size == expected


# Random generation


def generate_random(
    n: int,
    m: int,
    k: int,
    max_rank: int,
    seed: int,
    max_cost: int | None = None,
    simple: bool = False,
) -> Instance:
    """A connected random instance fully determined by ``seed`` (numpy PCG64).

    Edges are drawn uniformly without self-loops (without parallel edges when
    ``simple``) and redrawn until the graph is connected, for at most
    MAX_CONNECT_ATTEMPTS draws; each agent then draws
    ranks uniformly from 1..max_rank and, with ``max_cost``, costs from 1..max_cost.
    """
    if n < 1 or k < 1 or max_rank < 1:
        raise MalformedInstanceError("n, k and max_rank must be positive")
    if seed < 0:
        raise MalformedInstanceError(f"Seed must be non-negative, got {seed}")
    if m < n - 1:
        raise MalformedInstanceError(f"A connected graph on {n} nodes needs at least {n - 1} edges, got m={m}")
    if n == 1 and m > 0:
        raise MalformedInstanceError("A single node admits no edges without self-loops")
    if max_cost is not None and max_cost < 1:
        raise MalformedInstanceError(f"max_cost must be positive, got {max_cost}")

    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if simple and m > len(pairs):
        raise MalformedInstanceError(f"A simple graph on {n} nodes has at most {len(pairs)} edges, got m={m}")

    rng = np.random.default_rng(seed)
    graph = _random_connected_graph(rng, n, m, pairs if simple else None)
    ranks = rng.integers(1, max_rank + 1, size=(k, m)).tolist()
    profile = Profile(tuple(Preference(tuple(row)) for row in ranks))

    costs = None
    if max_cost is not None:
        costs = CostModel.additive(rng.integers(1, max_cost + 1, size=m).tolist())

    meta: Dict[str, Any] = {
        META_GENERATOR: KIND_RANDOM,
        META_SEED: seed,
        "n": n,
        "m": m,
        "k": k,
        "max_rank": max_rank,
        "simple": simple,
    }
    if max_cost is not None:
        meta["max_cost"] = max_cost
    return Instance(graph, profile, costs, meta)


def _random_connected_graph(
    rng: np.random.Generator, n: int, m: int, pairs: Sequence[Tuple[int, int]] | None
) -> Graph:
    if n == 1:
        return Graph(1, ())

    for attempt in range(1, MAX_CONNECT_ATTEMPTS + 1):
        if pairs is not None:
            edges = [pairs[index] for index in rng.choice(len(pairs), size=m, replace=False).tolist()]
        else:
            tails = rng.integers(0, n, size=m).tolist()
            heads = rng.integers(0, n - 1, size=m).tolist()
            edges = [(u, v + (v >= u)) for u, v in zip(tails, heads)]
        try:
            graph = Graph(n, tuple(edges))
        except DisconnectedGraphError:
            continue
        _LOGGER.debug("Connected graph drawn after %s attempts", attempt)
        return graph

    raise MalformedInstanceError(
        f"No connected graph with n={n}, m={m} after {MAX_CONNECT_ATTEMPTS} draws; "
        "the parameters are too sparse, raise m or lower n"
    )


def generate_set_cover(p: int, q: int, seed: int, density: float = 0.5) -> SetCoverInput:
    """Random feasible set cover: each element joins each set with probability ``density``.

    Elements left uncovered are added to one uniformly chosen set.
    """
    if p < 1 or q < 1:
        raise MalformedInstanceError("Set cover needs p >= 1 elements and q >= 1 sets")
    if seed < 0:
        raise MalformedInstanceError(f"Seed must be non-negative, got {seed}")
    if not 0 <= density <= 1:
        raise MalformedInstanceError(f"density must lie in [0, 1], got {density}")

    rng = np.random.default_rng(seed)
    membership = (rng.random((q, p)) < density).tolist()
    sets = [set(element for element in range(p) if row[element]) for row in membership]
    for element in range(p):
        if not any(element in members for members in sets):
            sets[int(rng.integers(0, q))].add(element)
    return SetCoverInput(p, tuple(frozenset(members) for members in sets))


# File I/O


def canonical_json(data: Any) -> str:
    """UTF-8 friendly JSON with sorted keys, two-space indent and a trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def instance_digest(instance: Instance) -> str:
    return hashlib.sha256(canonical_json(instance.to_dict()).encode("utf-8")).hexdigest()


def _read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise MalformedInstanceError(f"Cannot read {path}: {err.strerror or err}") from err
    except json.JSONDecodeError as err:
        raise MalformedInstanceError(f"{path} is not valid JSON: {err}") from err


def _write_json(data: Any, path: str | Path) -> None:
    Path(path).write_text(canonical_json(data), encoding="utf-8")


def read_instance(path: str | Path) -> Instance:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise MalformedInstanceError(f"{path} must hold a JSON object")
    return Instance.from_dict(data)


def write_instance(instance: Instance, path: str | Path) -> str:
    """Write the canonical form and return its sha256 digest."""
    _write_json(instance.to_dict(), path)
    _LOGGER.info("Wrote instance with %s edges to %s", instance.graph.edge_count, path)
    return instance_digest(instance)


def solution_to_dict(solution: CoverSolution, meta: Mapping[str, Any] | None = None) -> Dict[str, Any]:
    return {
        KEY_SELECTED: solution.sorted_selected(),
        KEY_WITNESSES: [tree.sorted_ids() for tree in solution.witnesses],
        KEY_ROUNDS: [round_.to_dict() for round_ in solution.rounds],
        KEY_META: dict(meta or {}),
    }


def solution_from_dict(data: Mapping[str, Any]) -> Tuple[CoverSolution, Dict[str, Any]]:
    try:
        data = SOLUTION_SCHEMA(dict(data))
    except vol.Invalid as err:
        raise MalformedInstanceError(f"Invalid solution: {err}") from err

    rounds = tuple(
        GreedyRound(entry["edge"], entry["gain"], tuple((vote[0], vote[1]) for vote in entry["votes"]))
        for entry in data[KEY_ROUNDS]
    )
    solution = CoverSolution(
        frozenset(data[KEY_SELECTED]),
        tuple(SpanningTree(frozenset(tree)) for tree in data[KEY_WITNESSES]),
        rounds,
    )
    return solution, data[KEY_META]


def read_solution(path: str | Path) -> Tuple[CoverSolution, Dict[str, Any]]:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise MalformedInstanceError(f"{path} must hold a JSON object")
    return solution_from_dict(data)


def write_solution(solution: CoverSolution, path: str | Path, meta: Mapping[str, Any] | None = None) -> None:
    _write_json(solution_to_dict(solution, meta), path)
    _LOGGER.info("Wrote solution with %s edges to %s", solution.size, path)


def read_set_cover(path: str | Path) -> SetCoverInput:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise MalformedInstanceError(f"{path} must hold a JSON object")
    return SetCoverInput.from_dict(data)


def write_set_cover(sc: SetCoverInput, path: str | Path) -> None:
    _write_json(sc.to_dict(), path)


def read_matroids(path: str | Path) -> List[RankOracle]:
    """Uniform and partition matroids from ``{"matroids": [...]}``."""
    data = _read_json(path)
    if not isinstance(data, dict) or not isinstance(data.get(KEY_MATROIDS), list):
        raise MalformedInstanceError(f"{path} must hold an object with a '{KEY_MATROIDS}' list")
    return [matroid_from_dict(entry) for entry in data[KEY_MATROIDS]]


def write_matroids(oracles: Sequence[RankOracle], path: str | Path) -> None:
    _write_json({KEY_MATROIDS: [matroid_to_dict(oracle) for oracle in oracles]}, path)
