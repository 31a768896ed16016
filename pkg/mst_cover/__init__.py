"""Multiagent minimum spanning tree cover solver."""
from __future__ import annotations

from .const import DOMAIN, VERSION
from .cover import (
    CostModel,
    CoverSolution,
    GreedyRound,
    greedy_cover,
    is_feasible,
    perfect_cover,
    progress,
    weighted_greedy_cover,
)
from .exceptions import (
    DisconnectedGraphError,
    InvalidCostError,
    LengthMismatchError,
    MalformedInstanceError,
    MstCoverError,
    SizeGuardError,
    SolverError,
)
from .graph import Graph, SpanningTree, is_spanning_tree, kruskal
from .instances import Instance, SetCoverInput, generate_random, read_instance, reduce_set_cover, write_instance
from .matroid import MstMatroid, RankOracle, check_matroid_axioms, matroid_greedy
from .oracle import enumerate_msts, exact_min_cover
from .preferences import Preference, Profile, WeightFunction, degrade, is_consistent, lex_aggregate
from .service import CoverService

__version__ = VERSION

__all__ = [
    "DOMAIN",
    "CostModel",
    "CoverService",
    "CoverSolution",
    "DisconnectedGraphError",
    "Graph",
    "GreedyRound",
    "Instance",
    "InvalidCostError",
    "LengthMismatchError",
    "MalformedInstanceError",
    "MstCoverError",
    "MstMatroid",
    "Preference",
    "Profile",
    "RankOracle",
    "SetCoverInput",
    "SizeGuardError",
    "SolverError",
    "SpanningTree",
    "WeightFunction",
    "check_matroid_axioms",
    "degrade",
    "enumerate_msts",
    "exact_min_cover",
    "generate_random",
    "greedy_cover",
    "is_consistent",
    "is_feasible",
    "is_spanning_tree",
    "kruskal",
    "lex_aggregate",
    "matroid_greedy",
    "perfect_cover",
    "progress",
    "read_instance",
    "reduce_set_cover",
    "weighted_greedy_cover",
    "write_instance",
]
