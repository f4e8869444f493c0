"""Rival coordination idioms rebuilt as library code on top of tokens.

Nothing here touches the engine: a notificator is a map of retained tokens,
a watermark stage is one held token downgraded in lockstep with the input
frontier, and an output budget is a queue of retained tokens with a cursor.
That these are ordinary operator-side data structures, rather than engine
features, is the claim the benchmarks put numbers on.
"""

from collections import deque

from .errors import TokenError
from .tokens import TimestampToken, TimestampTokenRef


class Notificator:
    """Callback-on-completion scheduling: request a time, get called back
    once the input frontier can no longer produce it.

    Each pending time holds one retained token, so requests keep downstream
    frontiers honest while the operator waits. Requests for a time the
    frontier has already passed are delivered at the next drain rather than
    rejected. Incomparable pending times release in lexicographic order so
    runs are repeatable.

    Hazard: a callback that unconditionally re-requests its own time recreates
    the token it just gave up and the operator never goes quiet.
    """

    def __init__(self):
        self._pending = {}  # time -> retained token
        self.interactions = 0  # requests plus deliveries

    def __len__(self):
        return len(self._pending)

    def pending_times(self):
        return sorted(self._pending)

    def request(self, grant, port=0):
        """Ask to be notified once `grant.time` is complete. Accepts an owned
        token (ownership transfers here) or a token ref (retained here).
        Duplicate requests for one time coalesce into a single callback."""
        self.interactions += 1
        time = grant.time
        if time in self._pending:
            if isinstance(grant, TimestampToken):
                grant.discard()  # already covered by the stored token
            return
        if isinstance(grant, TimestampTokenRef):
            self._pending[time] = grant.retain(port)
        elif isinstance(grant, TimestampToken):
            self._pending[time] = grant
        else:
            raise TokenError(f"cannot request a notification from {grant!r}")

    def ready(self, frontier):
        """True when some pending time is already complete."""
        for time in self._pending:
            if not frontier.frontier_leq(time):
                return True
        return False

    def drain(self, frontier, callback, limit=None):
        """Deliver completed notifications in ascending time order.

        Each callback receives (time, token); the token is discarded
        afterwards unless the callback already did so. Re-checks readiness
        after every delivery because callbacks may request new times. With
        `limit` set, delivers at most that many and leaves the rest pending.
        Returns the number delivered.
        """
        delivered = 0
        while limit is None or delivered < limit:
            ready = [
                t for t in self._pending if not frontier.frontier_leq(t)
            ]
            if not ready:
                break
            time = min(ready)
            token = self._pending.pop(time)
            callback(time, token)
            if not token.discarded:
                token.discard()
            self.interactions += 1
            delivered += 1
        return delivered


class WatermarkStage:
    """One operator's output watermark, carried by a single held token.

    Downgrade the token whenever the input watermark advances; that is the
    whole idiom, and it is also its cost, because the stage must run on every
    frontier movement even when no data arrived. Restricted to totally
    ordered timestamps.
    """

    def __init__(self, token, algebra):
        if not algebra.total:
            raise TokenError("watermarks need totally ordered timestamps")
        self._token = token
        self._algebra = algebra
        self.forwards = 0

    @property
    def watermark(self):
        """Current output watermark, or None once the stage has closed."""
        return None if self._token.discarded else self._token.time

    @property
    def closed(self):
        return self._token.discarded

    def forward(self, frontier):
        """Bring the output watermark in line with the input frontier. An
        empty frontier closes the stream and releases the token."""
        if self._token.discarded:
            return
        bound = frontier.frontier()
        if not bound:
            self._token.discard()
            self.forwards += 1
            return
        target = bound[0]
        if target != self._token.time:
            self._token.downgrade(target)
            self.forwards += 1


def watermark_forward(stage, frontier):
    """Free-function spelling of WatermarkStage.forward."""
    stage.forward(frontier)


class OutputBudget:
    """Flow control in operator code: emit up to a fixed number of records
    per invocation and retain tokens covering everything not yet emitted.

    Feed it work with add(); call emit() each invocation and request a
    reschedule while it reports work remaining.
    """

    def __init__(self, limit):
        if limit < 1:
            raise ValueError("budget must be positive")
        self.limit = limit
        self._queue = deque()  # (token, deque of records)

    def add(self, grant, records, port=0):
        """Queue records under the capability of `grant` (token or ref)."""
        if not records:
            return
        if isinstance(grant, TimestampTokenRef):
            token = grant.retain(port)
        else:
            token = grant
        self._queue.append((token, deque(records)))

    def pending(self):
        return sum(len(records) for _, records in self._queue)

    def emit(self, output):
        """Send up to the budget through `output`; returns True while work
        (and therefore retained tokens) remain."""
        remaining = self.limit
        queue = self._queue
        while queue and remaining:
            token, records = queue[0]
            with output.session(token) as session:
                while records and remaining:
                    session.give(records.popleft())
                    remaining -= 1
            if not records:
                token.discard()
                queue.popleft()
        return bool(queue)
