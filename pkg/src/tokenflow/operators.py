"""Worked operators: tumbling windowed average, rolling counts, pass-throughs.

These are written the way a system implementor would write reusable operator
libraries: each takes a stream, wires up a construct function, and returns
the output stream. End users call these; they do not write them.
"""

from .idioms import Notificator, WatermarkStage
from .timestamps import INT_TIMES


def frontier_floor(frontier, algebra=INT_TIMES):
    """The unique lower bound of a totally ordered frontier, or the
    algebra's top when the frontier is empty (input exhausted, everything
    complete)."""
    bound = frontier.frontier()
    if not bound:
        return algebra.top
    return bound[0]


def window_end(time, width):
    """The exclusive end of the tumbling window containing `time`.

    Windows are [k*width, (k+1)*width), labeled by their end. A time sitting
    exactly on a boundary belongs to the following window, so output at a
    window's end never shares a timestamp with a contributing record.
    Saturates at the top of the integer time domain.
    """
    if width <= 0:
        raise ValueError("window width must be positive")
    end = (time // width + 1) * width
    return end if end < INT_TIMES.top else INT_TIMES.top


def windowed_average(stream, width, routing=None):
    """Mean of integer samples per tumbling window of `width` time units.

    Emits (sum / count) as a float at each window's end timestamp once the
    input frontier has passed it; windows that saw no data produce nothing.
    The open-window map holds one token per window, downgraded to the window
    end on first sight, so downstream always knows which outputs are still
    possible. A sudden frontier jump retires all affected windows in one
    invocation, in ascending order.
    """

    def construct(ctx, tokens):
        token = tokens[0]
        assert token.time == ctx.algebra.zero
        token.discard()  # this operator only speaks in response to input
        windows = {}  # window end -> (token held at that end, [sum, count])

        def invoke(inp, out):
            for ref, records in inp:
                end = window_end(ref.time, width)
                entry = windows.get(end)
                if entry is None:
                    held = ref.retain()
                    held.downgrade(end)
                    entry = windows[end] = (held, [0, 0])
                acc = entry[1]
                for value in records:
                    acc[0] += value
                    acc[1] += 1
            bound = frontier_floor(inp.frontier(), ctx.algebra)
            if windows:
                for end in sorted(k for k in windows if k < bound):
                    held, (total, count) = windows.pop(end)
                    with out.session(held) as session:
                        session.give(total / count)
                    held.discard()
                assert all(held.time == end for end, (held, _) in windows.items())

        return invoke

    return stream.unary("windowed_average", construct, routing=routing)


def rolling_count(stream, key=None, routing=None):
    """Running occurrence count per key; emits (record, count so far) at the
    record's own timestamp, straight off the batch's token ref. No tokens are
    ever retained, so idle frontier traffic never wakes this operator."""
    key = key or (lambda record: record)

    def construct(ctx, tokens):
        tokens[0].discard()
        counts = {}

        def invoke(inp, out):
            for ref, records in inp:
                with out.session(ref) as session:
                    for record in records:
                        k = key(record)
                        n = counts.get(k, 0) + 1
                        counts[k] = n
                        session.give((record, n))

        return invoke

    return stream.unary("rolling_count", construct, routing=routing)


def rolling_count_notified(stream, key=None, routing=None):
    """Rolling count that defers to completion notifications.

    Input buffers per timestamp; a notification is requested for each
    distinct time, and one completed time is processed per invocation, in
    ascending order. Functionally identical to rolling_count on in-order
    input, at the cost of one operator-system interaction per distinct
    timestamp.
    """
    key = key or (lambda record: record)

    def construct(ctx, tokens):
        tokens[0].discard()
        notificator = Notificator()
        counts = {}
        buffered = {}

        def invoke(inp, out):
            for ref, records in inp:
                time = ref.time
                if time not in buffered:
                    buffered[time] = []
                    notificator.request(ref)
                buffered[time].extend(records)

            def flush(time, token):
                batch = buffered.pop(time, ())
                if not batch:
                    return
                with out.session(token) as session:
                    for record in batch:
                        k = key(record)
                        n = counts.get(k, 0) + 1
                        counts[k] = n
                        session.give((record, n))

            notificator.drain(inp.frontier(), flush, limit=1)
            return notificator.ready(inp.frontier())

        return invoke

    return stream.unary("rolling_count_notified", construct, routing=routing)


def rolling_count_watermarked(stream, key=None, routing=None):
    """Rolling count in watermark style: counts flow out eagerly, and the
    operator keeps a held token as its output watermark, downgraded to the
    input frontier on every invocation, data or not."""
    key = key or (lambda record: record)

    def construct(ctx, tokens):
        stage = WatermarkStage(tokens[0], ctx.algebra)
        counts = {}

        def invoke(inp, out):
            for ref, records in inp:
                with out.session(ref) as session:
                    for record in records:
                        k = key(record)
                        n = counts.get(k, 0) + 1
                        counts[k] = n
                        session.give((record, n))
            stage.forward(inp.frontier())

        return invoke

    return stream.unary("rolling_count_watermarked", construct, routing=routing)


def noop_forward(stream, name="noop", routing=None):
    """Forward batches untouched at their own timestamps. Holds nothing, so
    under token coordination it is never even invoked while idle."""

    def construct(ctx, tokens):
        tokens[0].discard()

        def invoke(inp, out):
            for ref, records in inp:
                with out.session(ref) as session:
                    session.give_many(records)

        return invoke

    return stream.unary(name, construct, routing=routing)


def watermark_noop(stream, name="wm_stage", routing=None):
    """Pass-through stage in watermark style: forwards data eagerly but must
    run on every frontier movement to downgrade its held watermark token.
    A chain of these turns each upstream tick into one invocation per stage,
    which is the linear cost the benchmarks demonstrate."""

    def construct(ctx, tokens):
        stage = WatermarkStage(tokens[0], ctx.algebra)

        def invoke(inp, out):
            for ref, records in inp:
                with out.session(ref) as session:
                    session.give_many(records)
            stage.forward(inp.frontier())

        return invoke

    return stream.unary(name, construct, routing=routing)


def map_records(stream, fn, name="map", routing=None):
    """Stateless per-record transform."""

    def construct(ctx, tokens):
        tokens[0].discard()

        def invoke(inp, out):
            for ref, records in inp:
                with out.session(ref) as session:
                    for record in records:
                        session.give(fn(record))

        return invoke

    return stream.unary(name, construct, routing=routing)


def filter_records(stream, predicate, name="filter", routing=None):
    """Stateless per-record filter."""

    def construct(ctx, tokens):
        tokens[0].discard()

        def invoke(inp, out):
            for ref, records in inp:
                with out.session(ref) as session:
                    for record in records:
                        if predicate(record):
                            session.give(record)

        return invoke

    return stream.unary(name, construct, routing=routing)


class Captured:
    """Capture sink: collects (time, record) pairs per worker."""

    def __init__(self):
        self.per_worker = {}

    def records(self):
        """All captured (time, record) pairs, merged and sorted."""
        out = []
        for bucket in self.per_worker.values():
            out.extend(bucket)
        out.sort(key=lambda pair: (pair[0], repr(pair[1])))
        return out

    def by_time(self):
        """Multiset of records per timestamp, as {time: sorted list}."""
        out = {}
        for bucket in self.per_worker.values():
            for time, record in bucket:
                out.setdefault(time, []).append(record)
        for records in out.values():
            records.sort(key=repr)
        return out


def capture(stream, name="capture", routing=None):
    """Attach a capture sink and return the Captured handle."""
    captured = Captured()

    def construct(ctx, tokens):
        bucket = captured.per_worker.setdefault(ctx.worker, [])

        def invoke(inp):
            for ref, records in inp:
                time = ref.time
                for record in records:
                    bucket.append((time, record))

        return invoke

    stream.sink(name, construct, routing=routing)
    return captured
