"""Frontier tracking: live pointstamp counts turned into per-location lower
bounds.

The tracker is incremental. It precomputes, once per topology, which frontier
targets each location can reach and through which minimal summaries; applying
a change batch then touches only the affected counted antichains. The brute
force companion recomputes every frontier from the full live set by direct
enumeration and is the oracle the tracker is tested against.

Each worker owns exactly one tracker. Workers never share one; they converge
by applying the same broadcast change batches.
"""

from .errors import ProtocolError
from .progress import Location, MutableAntichain, Pointstamp, minimal_antichain


class FrontierTracker:
    """Per-location frontiers maintained from pointstamp count changes."""

    def __init__(self, topology):
        topology.freeze()
        self.topology = topology
        self._alg = topology.algebra
        self._reach = topology.reach_from()
        self._counts = {}
        self._chains = {key: MutableAntichain(self._alg) for key in topology.sink_keys()}

    def apply(self, batch):
        """Apply a change batch; returns {target key: [(time, sign), ...]} for
        every frontier that moved. Target keys are Locations plus the PortRef
        input-port sinks the runtime reads.

        Driving any pointstamp count negative raises: that is a protocol bug,
        not a recoverable condition.
        """
        counts = self._counts
        reach = self._reach
        chains = self._chains
        apply_s = self._alg.apply
        moved = {}
        for ps, delta in batch.items():
            if delta == 0:
                continue
            c = counts.get(ps, 0) + delta
            if c < 0:
                raise ProtocolError(
                    f"pointstamp count underflow: {ps!r} would reach {c}"
                )
            if c:
                counts[ps] = c
            else:
                del counts[ps]
            time, loc = ps
            for target, summaries in reach.get(loc, ()):
                chain = chains[target]
                for s in summaries:
                    changes = chain.update(apply_s(s, time), delta)
                    if changes:
                        moved.setdefault(target, []).extend(changes)
        # compact per-target churn within the batch
        out = {}
        for target, changes in moved.items():
            net = {}
            for t, sign in changes:
                n = net.get(t, 0) + sign
                if n:
                    net[t] = n
                else:
                    net.pop(t, None)
            if net:
                out[target] = sorted(net.items())
        return out

    def frontier(self, key):
        """Current frontier at a Location or PortRef, as a sorted tuple."""
        return self._chains[key].frontier()

    def frontier_leq(self, key, time):
        return self._chains[key].frontier_leq(time)

    def antichain(self, key):
        """The live counted antichain for a target; read-only by convention."""
        return self._chains[key]

    def frontiers(self):
        """All location frontiers (PortRef sinks excluded)."""
        return {
            key: chain.frontier()
            for key, chain in self._chains.items()
            if isinstance(key, Location)
        }

    def live(self):
        """Live pointstamp counts; empty at quiescence."""
        return dict(self._counts)

    def count(self, pointstamp):
        return self._counts.get(pointstamp, 0)

    def is_quiescent(self):
        return not self._counts


def brute_force_frontier(topology, live):
    """Frontier at every location, recomputed from scratch.

    For each location, enumerate every live pointstamp, push its time through
    every minimal summary connecting the two locations, and keep the minimal
    elements. No incremental state; this is the reference the incremental
    tracker must match exactly.
    """
    topology.freeze()
    alg = topology.algebra
    summaries = topology.location_summaries()
    positive = [(ps.time, ps.loc) for ps, c in live.items() if c > 0]
    out = {}
    for loc in topology.locations():
        times = []
        for time, src in positive:
            for s in summaries.get(src, {}).get(loc, ()):
                times.append(alg.apply(s, time))
        out[loc] = minimal_antichain(times, alg.leq)
    return out
