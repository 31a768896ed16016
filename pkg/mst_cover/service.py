"""Service facade running solvers and verification on one loaded instance."""
from __future__ import annotations

import asyncio
import logging
import time
from concurrent.futures import Executor, ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Dict, Iterator, List, Tuple

from .config import SolverConfig
from .const import ALG_GREEDY, ALG_MATROID_GREEDY, ALG_PERFECT, ALG_WEIGHTED_GREEDY, ALGORITHMS
from .cover import (
    CostModel,
    CoverSolution,
    GreedyRound,
    agent_progress,
    attach_witnesses,
    greedy_cover,
    is_mst,
    perfect_cover,
    weighted_greedy_cover,
)
from .exceptions import MalformedInstanceError
from .graph import kruskal
from .instances import Instance, format_cost, instance_digest
from .matroid import MstMatroid, matroid_greedy
from .oracle import exact_min_cover
from .preferences import lex_aggregate

_LOGGER = logging.getLogger(__name__)


@dataclass
class RunReport:
    """Outcome of one solver run; the verdict is recomputed from the instance."""
    algorithm: str
    instance_digest: str
    found: bool
    size: int | None = None
    cost: Fraction | None = None
    rounds: Tuple[GreedyRound, ...] = ()
    feasible: bool = False
    unsatisfied: List[int] = field(default_factory=list)
    agent_progress: List[int] = field(default_factory=list)
    wall_time: float | None = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "algorithm": self.algorithm,
            "instance_digest": self.instance_digest,
            "found": self.found,
            "size": self.size,
            "cost": None if self.cost is None else format_cost(self.cost),
            "rounds": [round_.to_dict() for round_ in self.rounds],
            "feasible": self.feasible,
            "unsatisfied": list(self.unsatisfied),
            "agent_progress": list(self.agent_progress),
        }
        if self.wall_time is not None:
            data["wall_time"] = round(self.wall_time, 6)
        return data

    def render(self) -> str:
        lines = [f"algorithm: {self.algorithm}", f"instance:  {self.instance_digest}"]
        if not self.found:
            lines.append("result:    no perfect cover")
        else:
            lines.append(f"size:      {self.size}")
            lines.append(f"cost:      {format_cost(self.cost)}")
            lines.append(f"rounds:    {len(self.rounds)}")
            for number, round_ in enumerate(self.rounds, start=1):
                votes = " ".join(f"{edge}:{count}" for edge, count in round_.votes)
                lines.append(f"  {number:>3}. edge {round_.edge} gain {round_.gain} votes [{votes}]")
            lines.append(f"progress:  {' '.join(str(value) for value in self.agent_progress)}")
            lines.append(f"verdict:   {'feasible' if self.feasible else 'INFEASIBLE'}")
        if self.wall_time is not None:
            lines.append(f"wall time: {self.wall_time:.6f}s")
        return "\n".join(lines)


@dataclass
class VerifyReport:
    """Per-agent progress of a candidate solution and every problem found with it."""
    agent_progress: List[int]
    target: int
    unsatisfied: List[int]
    witness_errors: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.unsatisfied and not self.witness_errors

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "target": self.target,
            "agent_progress": list(self.agent_progress),
            "unsatisfied": list(self.unsatisfied),
            "witness_errors": list(self.witness_errors),
        }

    def render(self) -> str:
        lines = [f"agent {index}: f = {value}/{self.target}" for index, value in enumerate(self.agent_progress, 1)]
        if self.unsatisfied:
            lines.append(f"unsatisfied agents: {', '.join(str(agent) for agent in self.unsatisfied)}")
        lines.extend(f"witness error: {error}" for error in self.witness_errors)
        lines.append("verdict: feasible" if self.ok else "verdict: INFEASIBLE")
        return "\n".join(lines)


class CoverService:
    """Runs the solvers of this package against a single instance."""

    def __init__(self, instance: Instance, config: SolverConfig | None = None) -> None:
        self.instance = instance
        self.config = config or SolverConfig()
        self.digest = instance_digest(instance)

    @contextmanager
    def _agent_executor(self) -> Iterator[Executor | None]:
        if not self.config.parallel_agents:
            yield None
            return
        with ThreadPoolExecutor(max_workers=self.config.max_workers, thread_name_prefix=__name__) as pool:
            yield pool

    def _cost_model(self, cost: CostModel | None, cardinality: bool = False) -> CostModel | None:
        if cardinality:
            return None
        return cost if cost is not None else self.instance.costs

    def solve(
        self, algorithm: str, cost: CostModel | None = None, timing: bool = False, cardinality: bool = False
    ) -> Tuple[CoverSolution | None, RunReport]:
        """Run one algorithm; the solution is None only when ``perfect`` finds no perfect cover.

        ``cardinality`` ignores every cost model, so ``exact`` minimises the number of edges.
        """
        if cardinality and cost is not None:
            raise MalformedInstanceError("An explicit cost model cannot be combined with cardinality mode")
        if algorithm not in ALGORITHMS:
            raise MalformedInstanceError(f"Unknown algorithm {algorithm!r}, expected one of {', '.join(ALGORITHMS)}")
        graph, profile = self.instance.graph, self.instance.profile
        cost_model = self._cost_model(cost, cardinality)

        started = time.perf_counter()
        with self._agent_executor() as executor:
            if algorithm == ALG_PERFECT:
                tree = perfect_cover(graph, profile)
                solution = None if tree is None else CoverSolution(tree.edge_ids, (tree,) * profile.k, ())
            elif algorithm == ALG_GREEDY:
                solution = greedy_cover(graph, profile, executor)
            elif algorithm == ALG_WEIGHTED_GREEDY:
                if cost_model is None:
                    raise MalformedInstanceError("weighted-greedy needs edge costs (instance costs or --costs)")
                solution = weighted_greedy_cover(graph, profile, cost_model, executor)
            elif algorithm == ALG_MATROID_GREEDY:
                oracles = [MstMatroid(graph, pref) for pref in profile.agents]
                found = matroid_greedy(oracles, cost_model, executor)
                solution = attach_witnesses(graph, profile, found.selected, found.rounds)
            else:
                selected = exact_min_cover(graph, profile, cost_model)
                solution = attach_witnesses(graph, profile, selected, ())
        elapsed = time.perf_counter() - started

        report = RunReport(algorithm, self.digest, solution is not None, wall_time=elapsed if timing else None)
        if solution is not None:
            progress = agent_progress(graph, profile, solution.selected)
            report.size = solution.size
            report.cost = solution.cost(cost_model)
            report.rounds = solution.rounds
            report.agent_progress = progress
            report.unsatisfied = [index for index, value in enumerate(progress, 1) if value != graph.node_count - 1]
            report.feasible = not report.unsatisfied
        _LOGGER.info("%s finished: found=%s size=%s", algorithm, report.found, report.size)
        return solution, report

    def verify(self, solution: CoverSolution) -> VerifyReport:
        """Recompute feasibility from scratch; named agents are 1-based."""
        graph, profile = self.instance.graph, self.instance.profile
        selected = graph.check_edge_ids(solution.selected)
        target = graph.node_count - 1
        progress = agent_progress(graph, profile, selected)
        unsatisfied = [index for index, value in enumerate(progress, 1) if value != target]

        errors: List[str] = []
        if solution.witnesses and len(solution.witnesses) != profile.k:
            errors.append(f"{len(solution.witnesses)} witnesses for {profile.k} agents")
        else:
            for index, (tree, pref) in enumerate(zip(solution.witnesses, profile.agents), 1):
                ids = graph.check_edge_ids(tree.edge_ids)
                if not ids <= selected:
                    errors.append(f"witness of agent {index} uses unselected edges {sorted(ids - selected)}")
                elif not is_mst(graph, pref, ids):
                    errors.append(f"witness of agent {index} is not one of its minimum spanning trees")
        return VerifyReport(progress, target, unsatisfied, errors)

    async def async_solve(
        self, algorithm: str, cost: CostModel | None = None, timing: bool = False, cardinality: bool = False
    ) -> Tuple[CoverSolution | None, RunReport]:
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(None, partial(self.solve, algorithm, cost, timing, cardinality))

    async def async_verify(self, solution: CoverSolution) -> VerifyReport:
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(None, self.verify, solution)

    async def get_instance_statistics(self) -> Dict[str, Any]:
        """Instance size, preference granularity and how far the lexicographic tree gets each agent."""
        graph, profile = self.instance.graph, self.instance.profile
        loop = asyncio.get_running_loop()
        lex_tree = kruskal(graph, lex_aggregate(profile))
        lex_progress = await loop.run_in_executor(None, agent_progress, graph, profile, lex_tree.edge_ids)

        return {
            "instance_digest": self.digest,
            "nodes": graph.node_count,
            "edges": graph.edge_count,
            "agents": profile.k,
            "kappa": [pref.kappa for pref in profile.agents],
            "has_costs": self.instance.costs is not None,
            "lex_tree": lex_tree.sorted_ids(),
            "lex_tree_progress": lex_progress,
            "perfect_cover": all(value == graph.node_count - 1 for value in lex_progress),
            "meta": dict(self.instance.meta),
        }
