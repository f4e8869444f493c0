"""Timestamp tokens and their shared bookkeeping.

A token is a held capability: it names a (time, location) pointstamp and
entitles its holder to send messages at that time and place. Duplicating,
downgrading, and discarding a token are the only ways user code changes
pointstamp counts, and each records signed deltas into a bookkeeping ledger
shared with the runtime. The runtime drains ledgers between operator
invocations, on the same thread, so every drained batch reflects whole
operator actions.

Python cannot consume a value the way an affine type system would, so a
discarded token stays reachable but raises on any further use. Tokens also
work as context managers; leaving the block discards the token if the body
has not already done so. There is no reliance on garbage collection: discard
is always an explicit, deterministic act.
"""

from .errors import ProtocolError, TokenError
from .progress import ChangeBatch, Pointstamp


class TokenBookkeeping:
    """Ledger of pending pointstamp deltas for one dataflow location.

    Only token operations running on the owning worker's thread append to it,
    and the runtime drains it to empty after each operator invocation. The
    dirty flag tells the runtime a drain is worthwhile. An optional
    ``on_commit`` hook turns tokens minted against this ledger into the eager
    variant: the hook fires after each complete mutation, which dataflow
    input handles use to push updates without waiting for a scheduler pass.
    """

    __slots__ = (
        "location",
        "algebra",
        "dirty",
        "busy",
        "live_tokens",
        "events",
        "on_commit",
        "_pending",
    )

    def __init__(self, location, algebra, on_commit=None):
        self.location = location
        self.algebra = algebra
        self.dirty = False
        self.busy = False  # set by the runtime while operator logic runs
        self.live_tokens = 0
        self.events = 0  # token life-cycle operations recorded here
        self.on_commit = on_commit
        self._pending = ChangeBatch()

    def record(self, time, delta):
        self._pending.update(Pointstamp(time, self.location), delta)
        self.dirty = True

    def commit(self):
        if self.on_commit is not None:
            self.on_commit(self)

    def drain(self):
        """Take the accumulated batch, leaving the ledger empty.

        Only legal between invocations; draining mid-invocation would split
        an operator action across batches and break atomicity.
        """
        if self.busy:
            raise ProtocolError(
                f"drain of {self.location!r} bookkeeping during an invocation"
            )
        out = ChangeBatch(self._pending.drain())
        self.dirty = False
        return out


class TimestampToken:
    """The ability to send data at a certain timestamp on a dataflow edge.

    The wrapped time only moves through ``downgrade`` and only forward;
    ``duplicate`` and ``discard`` adjust pointstamp counts through the
    bookkeeping. While pinned by an open send session the token cannot be
    downgraded or discarded.
    """

    __slots__ = ("_time", "_bk", "_pins", "_dead")

    def __init__(self, time, bookkeeping, _record=True):
        self._time = time
        self._bk = bookkeeping
        self._pins = 0
        self._dead = False
        if _record:
            bookkeeping.record(time, +1)
            bookkeeping.live_tokens += 1
            bookkeeping.events += 1
            bookkeeping.commit()

    @property
    def time(self):
        return self._time

    @property
    def location(self):
        return self._bk.location

    @property
    def discarded(self):
        return self._dead

    def _check_alive(self):
        if self._dead:
            raise TokenError("token already discarded")

    def _check_unpinned(self):
        if self._pins:
            raise TokenError("token is pinned by an open session")

    def downgrade(self, new_time):
        """Move the token to `new_time`, which must be geq the current time.

        Downgrading to an equal time is allowed and leaves no trace after
        compaction. Downgrading to an incomparable or earlier time is an
        error: a capability only ever shrinks.
        """
        self._check_alive()
        self._check_unpinned()
        bk = self._bk
        bk.algebra.check_time(new_time)
        cur = self._time
        if new_time == cur:
            return
        if not bk.algebra.leq(cur, new_time):
            raise TokenError(
                f"cannot downgrade from {cur!r} to {new_time!r}: not geq"
            )
        bk.record(cur, -1)
        bk.record(new_time, +1)
        bk.events += 1
        self._time = new_time
        bk.commit()

    def duplicate(self):
        """A second, independently discardable token at the same pointstamp."""
        self._check_alive()
        return TimestampToken(self._time, self._bk)

    def discard(self):
        """Give up the capability. Exactly once per token."""
        self._check_alive()
        self._check_unpinned()
        bk = self._bk
        bk.record(self._time, -1)
        bk.live_tokens -= 1
        bk.events += 1
        self._dead = True
        bk.commit()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if not self._dead:
            self.discard()
        return False

    def _pin(self):
        self._check_alive()
        self._pins += 1

    def _unpin(self):
        self._pins -= 1

    def __repr__(self):
        state = "discarded" if self._dead else f"time={self._time!r}"
        return f"TimestampToken({state}, loc={self._bk.location!r})"


def mint_initial(bookkeeping):
    """The startup token for one output edge, at the algebra's zero time."""
    return TimestampToken(bookkeeping.algebra.zero, bookkeeping)


class _Scope:
    """Lexical extent of one input batch; closed by the runtime afterwards."""

    __slots__ = ("active",)

    def __init__(self):
        self.active = True

    def close(self):
        self.active = False


class TimestampTokenRef:
    """Borrowed token view delivered alongside an input batch.

    Usable only while the batch is being processed. Reading the time or
    opening a send session costs nothing; ``retain`` is the explicit step
    that takes ownership and bumps the pointstamp count.
    """

    __slots__ = ("_scope", "_arrival", "_ports")

    def __init__(self, scope, arrival, ports):
        # ports: per output port, (bookkeeping, send time) or None when the
        # operator declares no path from this input to that output
        self._scope = scope
        self._arrival = arrival
        self._ports = ports

    def _check_scope(self):
        if not self._scope.active:
            raise TokenError("token ref used outside its input batch")

    @property
    def time(self):
        self._check_scope()
        return self._arrival

    def retain(self, port=0):
        """An owned token for the given output, at the earliest time this
        input can still justify there."""
        self._check_scope()
        entry = self._ports[port]
        if entry is None:
            raise TokenError(f"no declared path from this input to output {port}")
        bk, send_time = entry
        return TimestampToken(send_time, bk)

    def _grant(self, port):
        """(bookkeeping, base time) for session creation; no count change."""
        self._check_scope()
        entry = self._ports[port]
        if entry is None:
            raise TokenError(f"no declared path from this input to output {port}")
        return entry

    def __repr__(self):
        live = "live" if self._scope.active else "expired"
        return f"TimestampTokenRef({live}, arrival={self._arrival!r})"
