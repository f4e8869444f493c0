"""Exception types shared across the engine."""


class ProtocolError(RuntimeError):
    """A coordination invariant was violated. Always an engine bug, never
    recoverable: a negative pointstamp count, a drain during an invocation."""


class TokenError(RuntimeError):
    """Misuse of a timestamp token: double discard, downgrade to a time that
    is not ahead of the current one, use of an expired reference."""


class TopologyError(ValueError):
    """The dataflow graph is malformed, for example a cycle whose path
    summaries never advance timestamps."""


class DeadlockError(RuntimeError):
    """The engine stalled with live pointstamps remaining. Carries the leaked
    pointstamps so the holder can be found."""

    def __init__(self, message, pointstamps):
        super().__init__(message)
        self.pointstamps = pointstamps
