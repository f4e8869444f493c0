"""Dataflow graphs and path-summary reachability.

A topology is a directed graph of operator nodes and edges between their
ports, possibly cyclic. Each node declares, per (input port, output port)
pair, an optional summary describing how timestamps advance through it; each
edge may carry its own summary (feedback edges usually advance by one).

Construction computes, for every ordered pair of locations, the minimal
antichain of summaries over all nonempty directed paths. Any cycle must
strictly advance timestamps; a flat cycle is rejected here rather than left
to stall the tracker at runtime.
"""

from collections import deque
from typing import NamedTuple

from .errors import TopologyError
from .progress import Location, PortRef


class NodeSpec(NamedTuple):
    name: str
    inputs: int
    outputs: int
    # (input port, output port) -> summary; absent pair means no path through
    internal: dict


class EdgeSpec(NamedTuple):
    src: int
    src_port: int
    dst: int
    dst_port: int
    summary: object


def _insert_minimal(store, key, summary, summary_leq):
    """Keep store[key] a minimal antichain of summaries. Returns True if the
    candidate was inserted (not dominated by an existing entry)."""
    cur = store.get(key)
    if cur is None:
        store[key] = [summary]
        return True
    for c in cur:
        if summary_leq(c, summary):
            return False
    cur[:] = [c for c in cur if not summary_leq(summary, c)]
    cur.append(summary)
    return True


class DataflowTopology:
    """The static shape of a dataflow: nodes, edges, and their summaries."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.nodes = []
        self.edges = []
        self._frozen = False
        self._edge_paths = None
        self._loc_summaries = None
        self._reach = None

    # -- construction ------------------------------------------------------

    def add_node(self, name, inputs, outputs, internal=None):
        """Add an operator node; returns its index.

        `internal` maps (input port, output port) to a summary. By default
        every input reaches every output with the identity summary.
        """
        self._check_mutable()
        if internal is None:
            internal = {
                (i, o): self.algebra.identity
                for i in range(inputs)
                for o in range(outputs)
            }
        else:
            internal = dict(internal)
            for (i, o), s in internal.items():
                if not (0 <= i < inputs and 0 <= o < outputs):
                    raise TopologyError(
                        f"internal summary for {name} names port ({i},{o}) out of range"
                    )
                self.algebra.check_summary(s)
        self.nodes.append(NodeSpec(name, inputs, outputs, internal))
        return len(self.nodes) - 1

    def add_edge(self, src, src_port, dst, dst_port, summary=None):
        """Connect an output port to an input port; returns the edge index."""
        self._check_mutable()
        if summary is None:
            summary = self.algebra.identity
        else:
            self.algebra.check_summary(summary)
        if not 0 <= src < len(self.nodes):
            raise TopologyError(f"source node {src} out of range")
        if not 0 <= dst < len(self.nodes):
            raise TopologyError(f"target node {dst} out of range")
        if not 0 <= src_port < self.nodes[src].outputs:
            raise TopologyError(
                f"output port {src_port} out of range for node {src} "
                f"({self.nodes[src].name})"
            )
        if not 0 <= dst_port < self.nodes[dst].inputs:
            raise TopologyError(
                f"input port {dst_port} out of range for node {dst} "
                f"({self.nodes[dst].name})"
            )
        self.edges.append(EdgeSpec(src, src_port, dst, dst_port, summary))
        return len(self.edges) - 1

    def _check_mutable(self):
        if self._frozen:
            raise TopologyError("topology is frozen; no mutation after freeze()")

    # -- queries -----------------------------------------------------------

    def out_edges(self, node, port=None):
        return [
            i
            for i, e in enumerate(self.edges)
            if e.src == node and (port is None or e.src_port == port)
        ]

    def in_edges(self, node, port=None):
        return [
            i
            for i, e in enumerate(self.edges)
            if e.dst == node and (port is None or e.dst_port == port)
        ]

    def locations(self):
        return [Location.node(i) for i in range(len(self.nodes))] + [
            Location.edge(i) for i in range(len(self.edges))
        ]

    def describe(self, loc):
        """Human-readable name for a location, for diagnostics."""
        if loc.kind == "node":
            return f"node {loc.id} ({self.nodes[loc.id].name})"
        e = self.edges[loc.id]
        return (
            f"edge {loc.id} ({self.nodes[e.src].name} -> {self.nodes[e.dst].name})"
        )

    # -- reachability ------------------------------------------------------

    def freeze(self):
        """Validate the graph and compute path summaries. Idempotent."""
        if not self._frozen:
            self._edge_paths = self._close_edges()
            self._loc_summaries = self._assemble_location_summaries()
            self._reach = self._assemble_reach()
            self._frozen = True
        return self

    def _hops(self):
        """Direct edge-to-edge hops: a pointstamp on edge e may, after
        delivery and one pass through the target node, appear on edge e2."""
        alg = self.algebra
        hops = [[] for _ in self.edges]
        for i, e in enumerate(self.edges):
            node = self.nodes[e.dst]
            for j in self.out_edges(e.dst):
                e2 = self.edges[j]
                internal = node.internal.get((e.dst_port, e2.src_port))
                if internal is None:
                    continue
                hops[i].append((j, alg.compose(e.summary, internal)))
        return hops

    def _close_edges(self):
        """Minimal path summaries between every pair of edges, over nonempty
        hop sequences. Raises on a cycle that fails to advance timestamps."""
        alg = self.algebra
        advances = alg.advances
        compose = alg.compose
        summary_leq = alg.summary_leq
        hops = self._hops()
        paths = {}
        work = deque()

        def add(a, b, s):
            if a == b and not advances(s):
                cycle = self._trace_cycle(hops, a)
                raise TopologyError(
                    f"cycle {cycle} never advances timestamps "
                    f"(net summary {s!r}); every cycle needs a strictly "
                    f"advancing edge or node summary"
                )
            if _insert_minimal(paths, (a, b), s, summary_leq):
                work.append((a, b, s))

        for i in range(len(self.edges)):
            for j, s in hops[i]:
                add(i, j, s)
        while work:
            a, b, s = work.popleft()
            if paths.get((a, b)) is not None and s not in paths[(a, b)]:
                continue  # superseded while queued
            for c, h in hops[b]:
                add(a, c, compose(s, h))
        return paths

    def _trace_cycle(self, hops, start):
        """Shortest hop cycle through `start`, as an edge description list."""
        prev = {start: None}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt, _ in hops[cur]:
                if nxt == start:
                    path = [start, cur] if cur != start else [start]
                    node = cur
                    while prev.get(node) is not None:
                        node = prev[node]
                        path.append(node)
                    path.reverse()
                    return [self.describe(Location.edge(e)) for e in path]
                if nxt not in prev:
                    prev[nxt] = cur
                    queue.append(nxt)
        return [self.describe(Location.edge(start))]

    def _edge_to_edge(self, a, b):
        """Summaries from edge a to edge b, including the empty path when
        a == b (used as a building block, not exposed on its own)."""
        out = list(self._edge_paths.get((a, b), ()))
        if a == b:
            out.append(self.algebra.identity)
        return out

    def _assemble_location_summaries(self):
        """Location-to-location minimal summaries over nonempty paths.

        A node location stands for pending work at the node, able to emit on
        any of its output edges at the pointstamp's own time; an edge location
        stands for a message or token on that edge, delivered to the target
        node through the edge's summary.
        """
        alg = self.algebra
        compose = alg.compose
        summary_leq = alg.summary_leq
        n_nodes = len(self.nodes)
        n_edges = len(self.edges)
        node_out = [self.out_edges(n) for n in range(n_nodes)]
        node_in = [self.in_edges(n) for n in range(n_nodes)]

        result = {}

        def insert(src, dst, s):
            store = result.setdefault(src, {})
            _insert_minimal(store, dst, s, summary_leq)

        for a in range(n_edges):
            la = Location.edge(a)
            # edge -> edge
            for b in range(n_edges):
                for s in self._edge_paths.get((a, b), ()):
                    insert(la, Location.edge(b), s)
            # edge -> node: any path to an in-edge, then delivery
            for m in range(n_nodes):
                lm = Location.node(m)
                for f in node_in[m]:
                    sf = self.edges[f].summary
                    for s in self._edge_to_edge(a, f):
                        insert(la, lm, compose(s, sf))
        for n in range(n_nodes):
            ln = Location.node(n)
            for e in node_out[n]:
                # node -> edge: may emit on its own outputs at the same time
                for b in range(n_edges):
                    for s in self._edge_to_edge(e, b):
                        insert(ln, Location.edge(b), s)
                # node -> node
                for m in range(n_nodes):
                    lm = Location.node(m)
                    for f in node_in[m]:
                        sf = self.edges[f].summary
                        for s in self._edge_to_edge(e, f):
                            insert(ln, lm, compose(s, sf))
        return {
            src: {dst: tuple(sorted(v)) for dst, v in store.items()}
            for src, store in result.items()
        }

    def _assemble_reach(self):
        """Per-source list of (target key, summaries) the tracker iterates.

        Targets are every Location plus a PortRef sink per input port, so the
        runtime can hand each operator a per-port frontier.
        """
        alg = self.algebra
        compose = alg.compose
        summary_leq = alg.summary_leq
        per_src = {
            src: {dst: list(v) for dst, v in store.items()}
            for src, store in self._loc_summaries.items()
        }

        def insert(src, dst, s):
            store = per_src.setdefault(src, {})
            _insert_minimal(store, dst, s, summary_leq)

        for m, node in enumerate(self.nodes):
            for p in range(node.inputs):
                sink = PortRef(m, p)
                for f in self.in_edges(m, p):
                    sf = self.edges[f].summary
                    # pointstamps on the edge itself
                    insert(Location.edge(f), sink, sf)
                    for a in range(len(self.edges)):
                        for s in self._edge_paths.get((a, f), ()):
                            insert(Location.edge(a), sink, compose(s, sf))
                    for n in range(len(self.nodes)):
                        for e in self.out_edges(n):
                            for s in self._edge_to_edge(e, f):
                                insert(Location.node(n), sink, compose(s, sf))
        return {
            src: tuple((dst, tuple(sorted(v))) for dst, v in store.items())
            for src, store in per_src.items()
        }

    def location_summaries(self):
        """Map src Location -> dst Location -> minimal summary antichain."""
        self.freeze()
        return self._loc_summaries

    def summaries_between(self, src, dst):
        self.freeze()
        return self._loc_summaries.get(src, {}).get(dst, ())

    def reach_from(self):
        """Map src Location -> ((target key, summaries), ...) where target
        keys are Locations and PortRefs."""
        self.freeze()
        return self._reach

    def sink_keys(self):
        """All frontier targets: every location plus every input port."""
        self.freeze()
        keys = list(self.locations())
        for m, node in enumerate(self.nodes):
            for p in range(node.inputs):
                keys.append(PortRef(m, p))
        return keys


def compute_location_summaries(topology):
    """Minimal path summaries for every ordered location pair; pairs with no
    connecting path are absent."""
    return topology.location_summaries()
