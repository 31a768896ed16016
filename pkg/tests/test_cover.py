"""Tests for the progress oracle, the perfect cover and the greedy solvers."""
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from mst_cover.cover import (
    CostModel,
    CoverSolution,
    GreedyRound,
    agent_progress,
    candidate_edges,
    greedy_cover,
    harmonic,
    is_feasible,
    is_mst,
    perfect_cover,
    progress,
    submodular_cover_greedy,
    total_progress,
    unsatisfied_agents,
    weighted_greedy_cover,
    witness_tree,
    wolsey_bound,
)
from mst_cover.exceptions import InvalidCostError, LengthMismatchError, MalformedInstanceError, SolverError
from mst_cover.graph import Graph, SpanningTree, is_spanning_tree, kruskal
from mst_cover.preferences import Preference, Profile

AB, AC, AD, CD = range(4)


class TestProgress:
    """Test the progress function f_i and its aggregates."""

    def test_two_agent_example(self, two_agent_graph, two_agent_profile):
        """Test H = {ab, ac} gives f_1 = 2 and f_2 = 1."""
        agent_1, agent_2 = two_agent_profile

        assert progress(two_agent_graph, agent_1, {AB, AC}) == 2
        assert progress(two_agent_graph, agent_2, {AB, AC}) == 1
        assert total_progress(two_agent_graph, two_agent_profile, {AB, AC}) == 3

    def test_empty_and_full_sets(self, two_agent_graph, two_agent_profile):
        """Test f(empty) = 0 and f(E) = n - 1."""
        assert agent_progress(two_agent_graph, two_agent_profile, set()) == [0, 0]
        assert agent_progress(two_agent_graph, two_agent_profile, range(4)) == [3, 3]
        assert total_progress(two_agent_graph, two_agent_profile, range(4)) == 6

    def test_candidate_edges(self, two_agent_graph, two_agent_profile):
        """Test the edges each agent votes for."""
        agent_1, agent_2 = two_agent_profile

        assert candidate_edges(two_agent_graph, agent_1, set()) == frozenset({AB, AC, CD})
        assert candidate_edges(two_agent_graph, agent_2, {AB}) == frozenset({AD, CD})
        assert candidate_edges(two_agent_graph, agent_1, {AB, AC, CD}) == frozenset()

    def test_witness_tree_inside_feasible_set(self, two_agent_graph, two_agent_profile):
        """Test the degrade-Kruskal tree of a feasible H lies inside H."""
        for pref in two_agent_profile:
            tree = witness_tree(two_agent_graph, pref, range(4))

            assert tree.edge_ids <= frozenset(range(4))
            assert is_mst(two_agent_graph, pref, tree.edge_ids)

    @pytest.mark.parametrize("seed", range(25))
    def test_unit_marginals_and_monotonicity(self, random_instance, seed):
        """Test f(H + e) - f(H) is 0 or 1 and f only grows."""
        instance = random_instance(seed, max_m=7)
        graph = instance.graph
        for pref in instance.profile:
            for mask in range(1 << graph.edge_count):
                subset = frozenset(e for e in graph.edge_ids if mask >> e & 1)
                value = progress(graph, pref, subset)
                assert 0 <= value <= graph.node_count - 1
                for edge_id in graph.edge_ids:
                    if edge_id not in subset:
                        assert progress(graph, pref, subset | {edge_id}) - value in (0, 1)


class TestFeasibility:
    """Test feasibility and MST recognition."""

    @pytest.mark.parametrize("edge_ids,expected,unsatisfied", [
        ({AB, AC, AD, CD}, True, []),
        ({AB, AD, CD}, False, [0]),
        ({AB, AC, CD}, False, [1]),
        (set(), False, [0, 1]),
    ])
    def test_is_feasible(self, two_agent_graph, two_agent_profile, edge_ids, expected, unsatisfied):
        """Test H is feasible iff it holds an MST of every agent."""
        assert is_feasible(two_agent_graph, two_agent_profile, edge_ids) is expected
        assert unsatisfied_agents(two_agent_graph, two_agent_profile, edge_ids) == unsatisfied

    def test_is_mst(self, two_agent_graph, two_agent_profile):
        """Test each agent's unique MST."""
        agent_1, agent_2 = two_agent_profile

        assert is_mst(two_agent_graph, agent_1, {AB, AC, CD})
        assert not is_mst(two_agent_graph, agent_1, {AB, AD, CD})
        assert is_mst(two_agent_graph, agent_2, {AB, AD, CD})
        assert not is_mst(two_agent_graph, agent_2, {AB, AC, AD, CD})


class TestPerfectCover:
    """Test the lexicographic perfect cover."""

    def test_no_perfect_cover(self, two_agent_graph, two_agent_profile):
        """Test the two agents' differing unique MSTs admit no common tree."""
        assert perfect_cover(two_agent_graph, two_agent_profile) is None

    def test_identical_preferences(self, k4):
        """Test agents sharing one preference get its Kruskal tree."""
        pref = Preference((2, 1, 3, 1, 2, 3))
        tree = perfect_cover(k4, Profile((pref, pref, pref)))

        assert tree == kruskal(k4, pref)

    def test_compatible_preferences(self, triangle):
        """Test a tie in one agent lets the other agent decide."""
        profile = Profile((Preference((1, 1, 1)), Preference((1, 2, 1))))
        tree = perfect_cover(triangle, profile)

        assert tree is not None
        assert tree.edge_ids == frozenset({0, 2})
        assert all(is_mst(triangle, pref, tree.edge_ids) for pref in profile)


class TestGreedyCover:
    """Test the plural voting greedy."""

    def test_two_agent_trace(self, two_agent_graph, two_agent_profile):
        """Test ab and cd earn two votes each, then ac and ad one each."""
        solution = greedy_cover(two_agent_graph, two_agent_profile)

        assert solution.selected == frozenset({AB, AC, AD, CD})
        assert [round_.edge for round_ in solution.rounds] == [AB, CD, AC, AD]
        assert [round_.gain for round_ in solution.rounds] == [2, 2, 1, 1]
        assert solution.rounds[0] == GreedyRound(AB, 2, ((AB, 2), (AC, 1), (AD, 1), (CD, 2)))
        assert solution.rounds[3].votes == ((AD, 1),)
        assert [tree.edge_ids for tree in solution.witnesses] == [
            frozenset({AB, AC, CD}),
            frozenset({AB, AD, CD}),
        ]

    def test_single_agent_gets_an_mst(self, random_instance):
        """Test k = 1 selects exactly one MST."""
        instance = random_instance(11)
        pref = instance.profile[0]
        solution = greedy_cover(instance.graph, Profile((pref,)))

        assert solution.size == instance.graph.node_count - 1
        assert is_mst(instance.graph, pref, solution.selected)

    def test_single_node(self):
        """Test n = 1 returns the empty cover immediately."""
        solution = greedy_cover(Graph(1, ()), Profile((Preference(()),)))

        assert solution.selected == frozenset()
        assert solution.rounds == ()

    def test_profile_must_match_graph(self, two_agent_graph):
        """Test a profile over another edge set is rejected."""
        with pytest.raises(LengthMismatchError):
            greedy_cover(two_agent_graph, Profile((Preference((1, 2, 3)),)))

    @pytest.mark.parametrize("seed", range(30))
    def test_feasible_and_gains_sum_to_target(self, random_instance, seed):
        """Test the output is feasible and the gains add up to k(n - 1)."""
        instance = random_instance(seed)
        graph, profile = instance.graph, instance.profile
        solution = greedy_cover(graph, profile)

        assert is_feasible(graph, profile, solution.selected)
        assert sum(round_.gain for round_ in solution.rounds) == profile.k * (graph.node_count - 1)
        assert all(1 <= round_.gain <= profile.k for round_ in solution.rounds)
        assert len(solution.rounds) == solution.size
        for tree, pref in zip(solution.witnesses, profile):
            assert tree.edge_ids <= solution.selected
            assert is_spanning_tree(graph, tree.edge_ids)
            assert is_mst(graph, pref, tree.edge_ids)

    def test_parallel_agents_give_same_trace(self, random_instance):
        """Test the per-agent thread pool does not change the result."""
        instance = random_instance(5)
        serial = greedy_cover(instance.graph, instance.profile)
        with ThreadPoolExecutor(max_workers=3) as pool:
            parallel = greedy_cover(instance.graph, instance.profile, pool)

        assert parallel == serial


class TestWeightedGreedyCover:
    """Test the cost-aware greedy."""

    def test_expensive_edge_postponed(self, two_agent_graph, two_agent_profile):
        """Test c(ab) = 10 makes cd the first pick and ab the last."""
        cost = CostModel.additive([10, 1, 1, 1])
        solution = weighted_greedy_cover(two_agent_graph, two_agent_profile, cost)

        assert [round_.edge for round_ in solution.rounds] == [CD, AC, AD, AB]
        assert solution.size == 4
        assert solution.cost(cost) == 13

    def test_unit_costs_match_plain_greedy(self, random_instance):
        """Test dividing by 1 keeps the greedy trace."""
        for seed in range(10):
            instance = random_instance(seed)
            plain = greedy_cover(instance.graph, instance.profile)
            weighted = weighted_greedy_cover(
                instance.graph, instance.profile, CostModel.unit(instance.graph.edge_count)
            )
            assert weighted == plain

    @pytest.mark.parametrize("costs", [[0, 1, 1, 1], [1, -2, 1, 1]])
    def test_non_positive_costs_rejected(self, costs):
        """Test singleton costs must be strictly positive."""
        with pytest.raises(InvalidCostError):
            CostModel.additive(costs)

    def test_cost_length_must_match(self, two_agent_graph, two_agent_profile):
        """Test a cost vector for another edge set is rejected."""
        with pytest.raises(LengthMismatchError):
            weighted_greedy_cover(two_agent_graph, two_agent_profile, CostModel.unit(3))


class TestCostModel:
    """Test the cost families."""

    def test_additive(self):
        """Test additive set cost and exact fractions."""
        cost = CostModel.additive([1, "1/2", 0.25])

        assert cost.singleton_costs == (Fraction(1), Fraction(1, 2), Fraction(1, 4))
        assert cost.set_cost({0, 1, 2}) == Fraction(7, 4)
        assert cost.set_cost(set()) == 0

    def test_max_of(self):
        """Test c(S) is the largest singleton cost."""
        cost = CostModel.max_of([1, 3, 2])

        assert cost.set_cost({0, 2}) == 2
        assert cost.set_cost(set()) == 0
        assert cost.singleton_costs == (1, 3, 2)

    def test_coverage(self):
        """Test weighted coverage of item groups."""
        cost = CostModel.coverage([{"x", "y"}, {"y"}, {"z"}], {"x": 2, "y": 3})

        assert cost.singleton_costs == (5, 3, 1)
        assert cost.set_cost({0, 1}) == 5
        assert cost.set_cost({1, 2}) == 4

    def test_oracle_mode_needs_oracle(self):
        """Test the oracle mode cannot be built without a set cost function."""
        with pytest.raises(MalformedInstanceError):
            CostModel((1, 1), "oracle")

    def test_solution_cost(self):
        """Test a solution costs its size without a cost model."""
        solution = CoverSolution(frozenset({0, 2}))

        assert solution.cost() == 2
        assert solution.cost(CostModel.additive([5, 5, 7])) == 12
        assert solution.sorted_selected() == [0, 2]


class TestGreedyEngine:
    """Test the shared submodular cover greedy."""

    def test_stall_raises(self):
        """Test a target no element can reach signals a solver error."""
        with pytest.raises(SolverError):
            submodular_cover_greedy(3, [lambda elements: 0], [1])

    def test_mismatched_targets(self):
        """Test one target is needed per agent value function."""
        with pytest.raises(LengthMismatchError):
            submodular_cover_greedy(3, [len, len], [1])

    def test_coverage_functions(self):
        """Test a plain coverage objective picks the largest set first."""
        sets = [{0}, {0, 1, 2}, {2, 3}]

        def covered(elements):
            return len(set().union(*(sets[e] for e in elements)))

        selected, rounds = submodular_cover_greedy(3, [covered], [4])

        assert selected == frozenset({1, 2})
        assert [round_.edge for round_ in rounds] == [1, 2]

    def test_bounds(self):
        """Test harmonic numbers are exact."""
        assert harmonic(0) == 0
        assert harmonic(3) == Fraction(11, 6)
        assert wolsey_bound(1) == 1

    def test_witness_free_solution_defaults(self):
        """Test the solution container defaults."""
        solution = CoverSolution(frozenset({1}), (SpanningTree(frozenset({1})),))

        assert solution.size == 1
        assert solution.rounds == ()
