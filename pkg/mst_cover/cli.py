"""Command line front end: ``mst-cover gen|solve|verify|stats``."""
from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Sequence

from .config import CONF_LOG_LEVEL, CONF_MAX_WORKERS, CONF_PARALLEL_AGENTS, SolverConfig, load_config
from .const import (
    ALGORITHMS,
    DOMAIN,
    EXIT_INFEASIBLE,
    EXIT_INTERNAL,
    EXIT_INVALID,
    EXIT_NO_PERFECT_COVER,
    EXIT_OK,
    EXIT_SIZE_GUARD,
    GENERATOR_KINDS,
    KEY_COSTS,
    KIND_RANDOM,
    KIND_SETCOVER_T1,
    LOG_LEVELS,
    VERSION,
)
from .cover import CostModel
from .exceptions import MalformedInstanceError, MstCoverError, SizeGuardError, SolverError
from .instances import (
    canonical_json,
    generate_random,
    generate_set_cover,
    parse_cost,
    read_instance,
    read_set_cover,
    read_solution,
    reduce_set_cover,
    write_instance,
    write_solution,
)
from .service import CoverService

_LOGGER = logging.getLogger(__name__)

PROG = "mst-cover"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Multiagent minimum spanning tree cover: generate, solve and verify instances.",
    )
    parser.add_argument("--version", action="version", version=f"{DOMAIN} {VERSION}")
    parser.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper, help="logging level (default WARNING)")
    parser.add_argument("--config", metavar="PATH", help="JSON file with solver settings")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = commands.add_parser("gen", help="write a generated instance")
    gen.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    gen.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    gen.add_argument("--output", "-o", required=True, metavar="PATH")
    gen.add_argument("--n", type=int, help="nodes (random)")
    gen.add_argument("--m", type=int, help="edges (random)")
    gen.add_argument("--k", type=int, help="agents (random)")
    gen.add_argument("--max-rank", type=int, help="ranks are drawn from 1..MAX_RANK (random)")
    gen.add_argument("--max-cost", type=int, help="add integer costs drawn from 1..MAX_COST (random)")
    gen.add_argument("--simple", action="store_true", help="forbid parallel edges (random)")
    gen.add_argument("--sc-file", metavar="PATH", help="set cover input {universe_size, sets} (setcover-*)")
    gen.add_argument("--p", type=int, help="universe size of a generated set cover (setcover-*)")
    gen.add_argument("--q", type=int, help="number of sets of a generated set cover (setcover-*)")
    gen.add_argument("--h", type=int, help="amplification factor (setcover-t2, default 1)")
    gen.set_defaults(handler=cmd_gen)

    solve = commands.add_parser("solve", help="solve an instance and write the solution")
    solve.add_argument("--alg", choices=ALGORITHMS, required=True)
    solve.add_argument("--input", required=True, metavar="PATH")
    solve.add_argument("--costs", metavar="PATH", help="JSON cost list overriding the instance costs")
    solve.add_argument(
        "--cardinality", action="store_true", help="ignore instance costs and minimise the number of edges"
    )
    solve.add_argument("--output", "-o", metavar="PATH", help="solution path (default INPUT.solution.json)")
    solve.add_argument("--json-report", action="store_true", help="print the report as JSON")
    solve.add_argument("--timing", action="store_true", help="include wall time in the report")
    solve.add_argument("--parallel-agents", action="store_true", default=None, help="evaluate agents concurrently")
    solve.add_argument("--max-workers", type=int, help="thread pool size for --parallel-agents")
    solve.set_defaults(handler=cmd_solve)

    verify = commands.add_parser("verify", help="check that a solution covers an MST of every agent")
    verify.add_argument("--input", required=True, metavar="PATH")
    verify.add_argument("--solution", required=True, metavar="PATH")
    verify.add_argument("--json-report", action="store_true")
    verify.set_defaults(handler=cmd_verify)

    stats = commands.add_parser("stats", help="print instance statistics as JSON")
    stats.add_argument("--input", required=True, metavar="PATH")
    stats.set_defaults(handler=cmd_stats)

    return parser


def _load_costs(path: str) -> CostModel:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise MalformedInstanceError(f"Cannot read costs {path}: {err.strerror or err}") from err
    except json.JSONDecodeError as err:
        raise MalformedInstanceError(f"Costs file {path} is not valid JSON: {err}") from err
    if isinstance(data, dict):
        data = data.get(KEY_COSTS)
    if not isinstance(data, list):
        raise MalformedInstanceError(f"Costs file {path} must hold a list or an object with a 'costs' list")
    return CostModel.additive(parse_cost(value) for value in data)


def _emit(report: Any, as_json: bool) -> None:
    if as_json:
        print(canonical_json(report.to_dict()), end="")
    else:
        print(report.render())


def cmd_gen(args: argparse.Namespace, config: SolverConfig) -> int:
    """Generate an instance and print its digest."""
    random_flags = {"--n": args.n, "--m": args.m, "--k": args.k, "--max-rank": args.max_rank}
    if args.kind == KIND_RANDOM:
        missing = [flag for flag, value in random_flags.items() if value is None]
        if missing:
            raise MalformedInstanceError(f"--kind random needs {', '.join(missing)}")
        if args.sc_file or args.p is not None or args.q is not None or args.h is not None:
            raise MalformedInstanceError("--sc-file, --p, --q and --h only apply to setcover kinds")
        instance = generate_random(
            args.n, args.m, args.k, args.max_rank, args.seed, max_cost=args.max_cost, simple=args.simple
        )
    else:
        used = [flag for flag, value in random_flags.items() if value is not None]
        if used or args.max_cost is not None or args.simple:
            raise MalformedInstanceError(f"--kind {args.kind} does not take random graph flags")
        if args.kind == KIND_SETCOVER_T1 and args.h is not None:
            raise MalformedInstanceError("--h only applies to setcover-t2")
        if bool(args.sc_file) == (args.p is not None or args.q is not None):
            raise MalformedInstanceError("Give either --sc-file or both --p and --q")
        if args.sc_file:
            sc = read_set_cover(args.sc_file)
        elif args.p is None or args.q is None:
            raise MalformedInstanceError("A generated set cover needs both --p and --q")
        else:
            sc = generate_set_cover(args.p, args.q, args.seed)
        h = 1 if args.h is None else args.h
        instance = reduce_set_cover(sc, h, single_copy=args.kind == KIND_SETCOVER_T1)

    digest = write_instance(instance, args.output)
    print(digest)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, config: SolverConfig) -> int:
    """Solve, write the solution and print the report."""
    instance = read_instance(args.input)
    if args.cardinality and args.costs:
        raise MalformedInstanceError("--cardinality and --costs cannot be combined")
    cost = _load_costs(args.costs) if args.costs else None
    if cost is not None:
        cost.check_edge_count(instance.graph.edge_count)

    service = CoverService(instance, config)
    solution, report = asyncio.run(service.async_solve(args.alg, cost, timing=args.timing, cardinality=args.cardinality))
    _emit(report, args.json_report)

    if solution is None:
        return EXIT_NO_PERFECT_COVER

    output = args.output or str(Path(args.input).with_suffix(".solution.json"))
    write_solution(solution, output, {"algorithm": args.alg, "instance_digest": service.digest})
    if not report.feasible:
        _LOGGER.error("%s returned an infeasible solution, unsatisfied agents %s", args.alg, report.unsatisfied)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: SolverConfig) -> int:
    """Exit 0 iff the solution is feasible and its witnesses are valid."""
    instance = read_instance(args.input)
    solution, _ = read_solution(args.solution)
    report = asyncio.run(CoverService(instance, config).async_verify(solution))
    _emit(report, args.json_report)
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def cmd_stats(args: argparse.Namespace, config: SolverConfig) -> int:
    instance = read_instance(args.input)
    statistics = asyncio.run(CoverService(instance, config).get_instance_statistics())
    print(canonical_json(statistics), end="")
    return EXIT_OK


def _exit_code(err: Exception) -> int:
    if isinstance(err, SizeGuardError):
        return EXIT_SIZE_GUARD
    if isinstance(err, MstCoverError) and not isinstance(err, SolverError):
        return EXIT_INVALID
    return EXIT_INTERNAL


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code in (None, 0) else EXIT_INVALID

    overrides: Dict[str, Any] = {
        CONF_LOG_LEVEL: args.log_level,
        CONF_PARALLEL_AGENTS: getattr(args, "parallel_agents", None),
        CONF_MAX_WORKERS: getattr(args, "max_workers", None),
    }
    try:
        config = load_config(args.config, overrides)
    except MalformedInstanceError as err:
        print(f"{PROG}: error: {err}", file=sys.stderr)
        return EXIT_INVALID

    logging.basicConfig(level=config.log_level, format=LOG_FORMAT, stream=sys.stderr)
    handler: Callable[[argparse.Namespace, SolverConfig], int] = args.handler

    try:
        return handler(args, config)
    except (MstCoverError, ValueError) as err:
        code = _exit_code(err)
        if code == EXIT_INTERNAL:
            _LOGGER.error("%s failed: %s", args.command, err, exc_info=True)
        else:
            _LOGGER.warning("%s rejected [%s]: %s", args.command, getattr(err, "code", "invalid"), err)
        print(f"{PROG}: error: {err}", file=sys.stderr)
        return code
    except Exception as err:  # pylint: disable=broad-except
        _LOGGER.error("Unexpected error in %s: %s", args.command, err, exc_info=True)
        print(f"{PROG}: internal error: {err}", file=sys.stderr)
        return EXIT_INTERNAL

