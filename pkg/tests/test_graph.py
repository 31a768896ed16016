"""Tests for graph construction, union-find and preference-driven Kruskal."""
import pytest

from mst_cover.exceptions import DisconnectedGraphError, LengthMismatchError, MalformedInstanceError
from mst_cover.graph import DisjointSets, Graph, SpanningTree, is_spanning_tree, kruskal, tree_path
from mst_cover.oracle import enumerate_spanning_trees
from mst_cover.preferences import Preference, WeightFunction

AB, AC, AD, CD = range(4)


class TestGraph:
    """Test Graph validation and helpers."""

    def test_edges_are_normalized_to_int_tuples(self):
        """Test edges given as lists become tuples of ints."""
        graph = Graph(3, [[0, 1], [1, 2]])

        assert graph.edges == ((0, 1), (1, 2))
        assert graph.edge_count == 2
        assert list(graph.edge_ids) == [0, 1]

    def test_parallel_edges_allowed(self):
        """Test parallel edges are kept as distinct ids."""
        graph = Graph(2, ((0, 1), (1, 0), (0, 1)))

        assert graph.edge_count == 3
        assert graph.endpoints(1) == (1, 0)

    def test_single_node_without_edges(self):
        """Test the one-node graph is connected."""
        graph = Graph(1, ())

        assert graph.edge_count == 0
        assert kruskal(graph, ()).edge_ids == frozenset()

    @pytest.mark.parametrize("node_count,edges", [
        (0, ()),
        (3, ((0, 3), (1, 2))),
        (3, ((0, -1), (1, 2))),
        (3, ((0, 0), (0, 1), (1, 2))),
    ])
    def test_malformed_graphs_rejected(self, node_count, edges):
        """Test invalid node counts, endpoints and self-loops."""
        with pytest.raises(MalformedInstanceError):
            Graph(node_count, edges)

    def test_disconnected_graph_rejected(self):
        """Test connectivity is checked at construction."""
        with pytest.raises(DisconnectedGraphError) as excinfo:
            Graph(4, ((0, 1), (2, 3)))

        assert excinfo.value.code == "disconnected"

    def test_check_edge_ids(self, two_agent_graph):
        """Test edge id validation."""
        assert two_agent_graph.check_edge_ids([3, 0, 3]) == frozenset({0, 3})

        with pytest.raises(MalformedInstanceError):
            two_agent_graph.check_edge_ids([4])

    def test_to_networkx_keys_edges_by_id(self):
        """Test the networkx view keeps parallel edges apart."""
        graph = Graph(2, ((0, 1), (0, 1)))
        multigraph = graph.to_networkx()

        assert multigraph.number_of_edges() == 2
        assert sorted(key for _, _, key in multigraph.edges(keys=True)) == [0, 1]
        assert graph.to_networkx([1]).number_of_edges() == 1


class TestDisjointSets:
    """Test the union-find scratch structure."""

    def test_join_and_find(self):
        """Test joins report whether they merged."""
        forest = DisjointSets(4)

        assert forest.join(0, 1)
        assert forest.join(2, 3)
        assert not forest.join(1, 0)
        assert forest.find(0) == forest.find(1)
        assert forest.find(0) != forest.find(2)

        assert forest.join(1, 2)
        assert len({forest.find(node) for node in range(4)}) == 1

    def test_find_is_idempotent(self):
        """Test find on a root returns the root."""
        forest = DisjointSets(3)
        forest.join(0, 2)

        root = forest.find(2)
        assert forest.find(root) == root


class TestKruskal:
    """Test Kruskal under total preorders."""

    def test_agent_one_tree(self, two_agent_graph):
        """Test ad ranked last leaves the tree {ab, ac, cd}."""
        tree = kruskal(two_agent_graph, Preference((1, 1, 2, 1)))

        assert tree.edge_ids == frozenset({AB, AC, CD})

    def test_single_edge(self):
        """Test the only spanning tree of a 2-node graph."""
        assert kruskal(Graph(2, ((0, 1),)), [7]).sorted_ids() == [0]

    def test_all_tied_takes_lowest_ids(self, k4):
        """Test ties break by ascending id: the star at node 0."""
        tree = kruskal(k4, Preference((1,) * 6))

        assert tree.sorted_ids() == [0, 1, 2]
        assert len(list(enumerate_spanning_trees(k4))) == 16

    def test_plain_key_vector(self, two_agent_graph):
        """Test a bare key sequence works like a preference."""
        assert kruskal(two_agent_graph, [1, 1, 2, 1]) == kruskal(two_agent_graph, Preference((5, 5, 9, 5)))

    def test_order_length_mismatch(self, two_agent_graph):
        """Test an order not covering every edge is rejected."""
        with pytest.raises(LengthMismatchError):
            kruskal(two_agent_graph, [1, 1, 1])

    @pytest.mark.parametrize("seed", range(20))
    def test_consistent_weights_give_minimum_total(self, random_instance, seed):
        """Test the Kruskal tree of a preference is minimum under any consistent weights."""
        instance = random_instance(seed, max_m=9)
        graph = instance.graph
        for pref in instance.profile:
            weights = WeightFunction(tuple(3 ** value + seed for value in pref.rank))
            tree = kruskal(graph, pref)
            best = min(weights.total(candidate.edge_ids) for candidate in enumerate_spanning_trees(graph))

            assert is_spanning_tree(graph, tree.edge_ids)
            assert weights.total(tree.edge_ids) == best

    def test_deterministic(self, random_instance):
        """Test identical inputs give identical trees."""
        instance = random_instance(3)
        pref = instance.profile[0]

        assert kruskal(instance.graph, pref) == kruskal(instance.graph, pref)


class TestSpanningTrees:
    """Test spanning tree recognition and tree paths."""

    @pytest.mark.parametrize("edge_ids,expected", [
        ({AB, AC, CD}, True),
        ({AB, AC, AD, CD}, False),
        ({AC, AD, CD}, False),
        ({AB, AD, CD}, True),
        (set(), False),
    ])
    def test_is_spanning_tree(self, two_agent_graph, edge_ids, expected):
        """Test cardinality, acyclicity and spanning."""
        assert is_spanning_tree(two_agent_graph, edge_ids) is expected

    def test_is_spanning_tree_rejects_unknown_ids(self, two_agent_graph):
        """Test ids outside the graph raise."""
        with pytest.raises(MalformedInstanceError):
            is_spanning_tree(two_agent_graph, {0, 1, 9})

    def test_tree_path(self, two_agent_graph):
        """Test the b to d path in {ab, ac, cd} walks ab, ac, cd."""
        assert tree_path(two_agent_graph, {AB, AC, CD}, 1, 3) == [AB, AC, CD]
        assert tree_path(two_agent_graph, {AB, AC, CD}, 2, 2) == []

    def test_spanning_tree_container(self):
        """Test SpanningTree iterates in id order."""
        tree = SpanningTree(frozenset({4, 1, 2}))

        assert list(tree) == [1, 2, 4]
        assert len(tree) == 3
        assert 2 in tree
        assert 3 not in tree
