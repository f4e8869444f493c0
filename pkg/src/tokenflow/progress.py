"""Pointstamps, change batches, and counted antichains.

These are the data carriers of the coordination layer. A pointstamp names a
(timestamp, location) pair; a change batch is a compacted multiset of signed
pointstamp count deltas, the only currency exchanged between operators,
workers, and the frontier tracker; a mutable antichain counts timestamps and
exposes the minimal ones.
"""

from typing import NamedTuple

from .errors import ProtocolError


class Location(NamedTuple):
    """A place in the dataflow graph: a node or an edge, by index."""

    kind: str  # "node" or "edge"
    id: int

    @classmethod
    def node(cls, i):
        return cls("node", i)

    @classmethod
    def edge(cls, i):
        return cls("edge", i)

    def __repr__(self):
        return f"{self.kind}:{self.id}"


class PortRef(NamedTuple):
    """An input port of a node. Not a Location; used for the operator-facing
    frontiers the runtime reads, with edge pointstamps feeding into them."""

    node: int
    port: int

    def __repr__(self):
        return f"port:{self.node}.{self.port}"


class Pointstamp(NamedTuple):
    """The unit of outstanding-work accounting."""

    time: object
    loc: Location

    def __repr__(self):
        return f"({self.time} @ {self.loc!r})"


class ChangeBatch:
    """A compacted map from pointstamp to signed count delta.

    Entries that sum to zero vanish, so merging a +1 and a -1 for the same
    pointstamp leaves nothing, which is what makes whole-batch application
    atomic and safe to interleave.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries=None):
        self._entries = dict(entries) if entries else {}

    def update(self, pointstamp, delta):
        e = self._entries
        n = e.get(pointstamp, 0) + delta
        if n:
            e[pointstamp] = n
        else:
            e.pop(pointstamp, None)

    def extend(self, other):
        for ps, delta in other.items():
            self.update(ps, delta)

    def items(self):
        return self._entries.items()

    def is_empty(self):
        return not self._entries

    def __len__(self):
        return len(self._entries)

    def as_dict(self):
        return dict(self._entries)

    def drain(self):
        """Take the accumulated entries, leaving the batch empty."""
        out = self._entries
        self._entries = {}
        return out

    def __repr__(self):
        inner = ", ".join(f"{ps!r}: {d:+d}" for ps, d in self._entries.items())
        return f"ChangeBatch({{{inner}}})"

    def __eq__(self, other):
        if isinstance(other, ChangeBatch):
            return self._entries == other._entries
        return NotImplemented


def minimal_antichain(times, leq):
    """Minimal elements of `times` under `leq`, as a sorted tuple.

    Duplicates collapse; dominated elements drop. Quadratic, fine for the
    small sets a frontier ever holds.
    """
    out = []
    for t in times:
        dominated = False
        for o in out:
            if leq(o, t):
                dominated = True
                break
        if dominated:
            continue
        out = [o for o in out if not leq(t, o)]
        out.append(t)
    out.sort()
    return tuple(out)


class MutableAntichain:
    """Counted multiset of timestamps with a cached frontier.

    Counts never go negative; an underflow means some protocol accounting is
    wrong and raises immediately. ``update`` reports exactly the additions and
    removals to the minimal-element set, so a listener replaying the changes
    tracks the frontier without recomputing it.
    """

    __slots__ = ("_leq", "_total", "_counts", "_frontier")

    def __init__(self, algebra):
        self._leq = algebra.leq
        self._total = algebra.total
        self._counts = {}
        self._frontier = ()

    def frontier(self):
        return self._frontier

    def is_empty(self):
        return not self._counts

    def count(self, time):
        return self._counts.get(time, 0)

    def frontier_leq(self, time):
        """True when some frontier element is leq `time`, meaning `time` may
        still be observed here."""
        fr = self._frontier
        if not fr:
            return False
        if self._total:
            return fr[0] <= time
        leq = self._leq
        for f in fr:
            if leq(f, time):
                return True
        return False

    def update(self, time, delta):
        """Adjust the count for `time` by `delta`; return frontier changes as
        a list of (time, sign) pairs, removals before additions."""
        counts = self._counts
        c0 = counts.get(time, 0)
        c1 = c0 + delta
        if c1 < 0:
            raise ProtocolError(
                f"count underflow at time {time!r}: {c0} {delta:+d}"
            )
        if c1:
            counts[time] = c1
        else:
            counts.pop(time, None)

        fr = self._frontier
        if delta > 0:
            if c0 > 0 or self.frontier_leq(time):
                # already counted, or dominated by the existing frontier
                return []
            leq = self._leq
            dropped = [f for f in fr if leq(time, f)]
            new_fr = tuple(sorted([f for f in fr if not leq(time, f)] + [time]))
            self._frontier = new_fr
            return [(f, -1) for f in dropped] + [(time, +1)]
        if delta < 0 and c1 == 0 and time in fr:
            if self._total:
                new_fr = (min(counts),) if counts else ()
            else:
                new_fr = minimal_antichain(counts.keys(), self._leq)
            self._frontier = new_fr
            old_set = set(fr)
            new_set = set(new_fr)
            changes = [(t, -1) for t in fr if t not in new_set]
            changes += [(t, +1) for t in new_fr if t not in old_set]
            return changes
        return []

    def __repr__(self):
        return f"MutableAntichain(frontier={self._frontier}, counts={self._counts})"
