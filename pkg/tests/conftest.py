"""
Pytest configuration and shared fixtures for the MST cover test suite.

Edge ids of the four-node example used throughout (nodes a, b, c, d = 0, 1, 2, 3):
ab = 0, ac = 1, ad = 2, cd = 3. Agent 1's unique MST is {ab, ac, cd}, agent 2's
is {ab, ad, cd}, so no single tree satisfies both.
"""
from __future__ import annotations

from typing import Callable

import numpy as np
import pytest

from mst_cover.graph import Graph
from mst_cover.instances import Instance, SetCoverInput, generate_random
from mst_cover.preferences import Preference, Profile


@pytest.fixture
def two_agent_graph() -> Graph:
    """The four-node graph with edges ab, ac, ad, cd."""
    return Graph(4, ((0, 1), (0, 2), (0, 3), (2, 3)))


@pytest.fixture
def two_agent_profile() -> Profile:
    """Agent 1 ranks ad worst, agent 2 ranks ac worst."""
    return Profile((Preference((1, 1, 2, 1)), Preference((1, 2, 1, 1))))


@pytest.fixture
def two_agent_instance(two_agent_graph, two_agent_profile) -> Instance:
    return Instance(two_agent_graph, two_agent_profile, None, {"generator": "handmade"})


@pytest.fixture
def triangle() -> Graph:
    return Graph(3, ((0, 1), (1, 2), (0, 2)))


@pytest.fixture
def k4() -> Graph:
    """Complete graph on four nodes, edges in lexicographic order of endpoints."""
    return Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


@pytest.fixture
def three_set_cover() -> SetCoverInput:
    """Universe {0, 1, 2} with sets {0, 1}, {1, 2}, {0, 2}: every cover needs two sets."""
    return SetCoverInput(3, (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})))


@pytest.fixture
def random_instance() -> Callable[..., Instance]:
    """Factory for the seeded corpus: n in [3, 6], m in [n-1, max_m], k in [1, 4], ranks 1..3."""

    def _make(seed: int, max_m: int = 10, max_cost: int | None = None, max_n: int = 6) -> Instance:
        rng = np.random.default_rng(10_000 + seed)
        n = int(rng.integers(3, max_n + 1))
        m = int(rng.integers(n - 1, max(n - 1, max_m) + 1))
        k = int(rng.integers(1, 5))
        return generate_random(n, m, k, 3, seed, max_cost=max_cost)

    return _make
