import pytest

from tokenflow import (
    INT_TIMES,
    PAIR_TIMES,
    DataflowTopology,
    Location,
    compute_location_summaries,
)
from tokenflow.errors import TopologyError


def linear_chain(names):
    """input-less chain op0 -> op1 -> ... with identity edges."""
    topo = DataflowTopology(INT_TIMES)
    for i, name in enumerate(names):
        topo.add_node(name, inputs=1 if i else 0, outputs=0 if i == len(names) - 1 else 1)
    for i in range(len(names) - 1):
        topo.add_edge(i, 0, i + 1, 0)
    return topo.freeze()


class TestBuilding:
    def test_port_out_of_range(self):
        topo = DataflowTopology(INT_TIMES)
        topo.add_node("a", 0, 1)
        topo.add_node("b", 1, 0)
        with pytest.raises(TopologyError):
            topo.add_edge(0, 1, 1, 0)
        with pytest.raises(TopologyError):
            topo.add_edge(0, 0, 1, 3)
        with pytest.raises(TopologyError):
            topo.add_edge(0, 0, 5, 0)

    def test_frozen_rejects_mutation(self):
        topo = linear_chain(["a", "b"])
        with pytest.raises(TopologyError):
            topo.add_node("c", 1, 1)


class TestSummaries:
    def test_direct_edge_identity(self):
        topo = linear_chain(["A", "B"])
        a, b = Location.node(0), Location.node(1)
        assert topo.summaries_between(a, b) == (INT_TIMES.identity,)

    def test_chain_composes_identities(self):
        topo = linear_chain(["A", "B", "C"])
        a, c = Location.node(0), Location.node(2)
        assert topo.summaries_between(a, c) == (INT_TIMES.identity,)

    def test_unreachable_is_empty(self):
        topo = linear_chain(["A", "B"])
        assert topo.summaries_between(Location.node(1), Location.node(0)) == ()

    def test_self_loop_with_advancing_edge(self):
        # one node whose out-edge feeds its own input, advancing by 1;
        # hand enumeration of paths of length <= 2 gives {+1} to itself
        topo = DataflowTopology(INT_TIMES)
        topo.add_node("loop", 1, 1)
        topo.add_edge(0, 0, 0, 0, summary=1)
        topo.freeze()
        n = Location.node(0)
        e = Location.edge(0)
        assert topo.summaries_between(n, n) == (1,)
        assert topo.summaries_between(n, e) == (0,)
        assert topo.summaries_between(e, e) == (1,)
        assert topo.summaries_between(e, n) == (1,)

    def test_flat_cycle_rejected_naming_the_cycle(self):
        topo = DataflowTopology(INT_TIMES)
        topo.add_node("a", 1, 1)
        topo.add_node("b", 1, 1)
        topo.add_edge(0, 0, 1, 0)
        topo.add_edge(1, 0, 0, 0)
        with pytest.raises(TopologyError, match="cycle"):
            topo.freeze()

    def test_cycle_advancing_through_node_summary(self):
        topo = DataflowTopology(INT_TIMES)
        topo.add_node("fwd", 1, 1)
        topo.add_node("bump", 1, 1, internal={(0, 0): 1})
        topo.add_edge(0, 0, 1, 0)
        topo.add_edge(1, 0, 0, 0)
        topo.freeze()
        a = Location.node(0)
        assert topo.summaries_between(a, a) == (1,)

    def test_pair_summaries_compose_componentwise(self):
        topo = DataflowTopology(PAIR_TIMES)
        topo.add_node("src", 0, 1)
        topo.add_node("mid", 1, 1, internal={(0, 0): (1, 0)})
        topo.add_node("out", 1, 0)
        topo.add_edge(0, 0, 1, 0, summary=(0, 1))
        topo.add_edge(1, 0, 2, 0)
        topo.freeze()
        src, out = Location.node(0), Location.node(2)
        assert topo.summaries_between(src, out) == ((1, 1),)

    def test_internal_summary_gap_blocks_path(self):
        # two-input operator where input 1 never reaches the output
        topo = DataflowTopology(INT_TIMES)
        topo.add_node("a", 0, 1)
        topo.add_node("b", 0, 1)
        topo.add_node("join", 2, 1, internal={(0, 0): 0})
        topo.add_node("sink", 1, 0)
        topo.add_edge(0, 0, 2, 0)
        topo.add_edge(1, 0, 2, 1)
        topo.add_edge(2, 0, 3, 0)
        topo.freeze()
        assert topo.summaries_between(Location.node(0), Location.node(3)) == (0,)
        assert topo.summaries_between(Location.node(1), Location.node(3)) == ()

    def test_summary_map_shape(self):
        topo = linear_chain(["A", "B"])
        summaries = compute_location_summaries(topo)
        assert summaries[Location.node(0)][Location.node(1)] == (0,)
        # no empty-path self summaries: A cannot reach itself acyclically
        assert Location.node(0) not in summaries.get(Location.node(0), {})
