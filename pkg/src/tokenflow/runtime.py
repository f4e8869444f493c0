"""Workers, operator construction, data channels, and the scheduler loop.

All workers live in one process. Each owns its operator instances, its
message queues, and one frontier tracker; the only things crossing worker
boundaries are data messages (bounded queues) and broadcast change batches
(progress queues). The engine can run single-threaded with round-robin
stepping, which is the deterministic mode every test uses, or with one
thread per worker.

Scheduling policy: an operator is invoked when it has pending input, when it
asked to be rescheduled, or when an input frontier moved while the operator
holds live tokens. Operators holding nothing are bypassed entirely on pure
frontier traffic; that asymmetry is the point of the token design and the
benchmarks measure it.
"""

import threading
import time as _time
import zlib
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DeadlockError, ProtocolError, TokenError, TopologyError
from .progress import ChangeBatch, Location, Pointstamp, PortRef
from .timestamps import INT_TIMES
from .tokens import (
    TimestampToken,
    TimestampTokenRef,
    TokenBookkeeping,
    _Scope,
    mint_initial,
)
from .topology import DataflowTopology
from .tracker import FrontierTracker


@dataclass
class EngineConfig:
    workers: int = 1
    max_message_size: int = 256
    deterministic: bool = True  # False: one thread per worker
    safety_checks: bool = False  # per-delivery frontier asserts, global count audit
    algebra: object = INT_TIMES


# -- routing ----------------------------------------------------------------


def _route_hash(value):
    if isinstance(value, str):
        return zlib.crc32(value.encode())
    if isinstance(value, bytes):
        return zlib.crc32(value)
    if isinstance(value, int):
        return value
    return zlib.crc32(repr(value).encode())


class Exchange:
    """Route each record to hash(key(record)) modulo the worker count."""

    def __init__(self, key):
        self.key = key

    def targets(self, record, sender, workers):
        return (_route_hash(self.key(record)) % workers,)


class Pipeline:
    """Keep records on the sending worker."""

    def targets(self, record, sender, workers):
        return (sender,)


class Broadcast:
    """Deliver every record to every worker."""

    def targets(self, record, sender, workers):
        return range(workers)


class Message(NamedTuple):
    edge: int
    time: object
    records: tuple


# -- dataflow description ----------------------------------------------------


class _NodeDef:
    __slots__ = ("name", "inputs", "outputs", "construct", "internal", "style")

    def __init__(self, name, inputs, outputs, construct, internal, style):
        self.name = name
        self.inputs = inputs
        self.outputs = outputs
        self.construct = construct
        self.internal = internal
        self.style = style


class _EdgeDef(NamedTuple):
    src: int
    src_port: int
    dst: int
    dst_port: int
    routing: object


class Stream:
    """One operator output during dataflow construction. Consumed exactly
    once; add an explicit copy operator to fan out."""

    __slots__ = ("builder", "node", "port")

    def __init__(self, builder, node, port):
        self.builder = builder
        self.node = node
        self.port = port

    def unary(self, name, construct, routing=None):
        """A one-input one-output operator.

        `construct(ctx, tokens)` runs once per worker at build time with the
        freshly minted output tokens and returns the invocation function
        `invoke(input, output)`.
        """
        return self.builder.operator(
            name, [self], 1, construct, routings=[routing], style="unary"
        )[0]

    def sink(self, name, construct, routing=None):
        """A one-input terminal operator; `construct(ctx, tokens)` returns
        `invoke(input)`. Sinks mint no tokens."""
        self.builder.operator(
            name, [self], 0, construct, routings=[routing], style="sink"
        )


class FeedbackHandle:
    """The dangling input of a feedback operator; call connect() to close the
    loop."""

    def __init__(self, builder, node):
        self._builder = builder
        self._node = node
        self._connected = False

    def connect(self, stream, routing=None):
        if self._connected:
            raise TopologyError("feedback input already connected")
        self._builder._connect(stream, self._node, 0, routing)
        self._connected = True


class DataflowBuilder:
    """Collects nodes and edges; the engine turns it into per-worker
    instances over one shared topology."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.nodes = []
        self.edges = []
        self.input_nodes = {}  # name -> node id
        self._consumed = set()  # (node, port) output endpoints already wired

    def new_input(self, name="input"):
        """An externally driven source. Returns its output stream; after
        build, the engine hands back a driver for injecting data."""
        if name in self.input_nodes:
            raise TopologyError(f"duplicate input name {name!r}")
        node = len(self.nodes)
        self.nodes.append(_NodeDef(name, 0, 1, None, None, "input"))
        self.input_nodes[name] = node
        return Stream(self, node, 0)

    def operator(
        self, name, inputs, outputs, construct, routings=None, internal=None,
        style="general",
    ):
        """Add an operator consuming the given streams. Returns its output
        streams. `internal` optionally narrows which (input port, output
        port) pairs have a path and with what summary."""
        node = len(self.nodes)
        self.nodes.append(
            _NodeDef(name, len(inputs), outputs, construct, internal, style)
        )
        if routings is None:
            routings = [None] * len(inputs)
        for port, (stream, routing) in enumerate(zip(inputs, routings)):
            self._connect(stream, node, port, routing)
        return [Stream(self, node, p) for p in range(outputs)]

    def feedback(self, name="feedback", summary=1):
        """A loop variable: an operator whose output is available now and
        whose input is connected later. Records passing through it advance by
        `summary`, which keeps the cycle live."""
        self.algebra.check_summary(summary)
        if not self.algebra.advances(summary):
            raise TopologyError("feedback summary must strictly advance times")

        def construct(ctx, tokens):
            tokens[0].discard()

            def invoke(inp, out):
                for ref, records in inp:
                    with out.session(ref) as session:
                        session.give_many(records)

            return invoke

        node = len(self.nodes)
        self.nodes.append(
            _NodeDef(name, 1, 1, construct, {(0, 0): summary}, "unary")
        )
        return Stream(self, node, 0), FeedbackHandle(self, node)

    def _connect(self, stream, dst, dst_port, routing):
        if stream.builder is not self:
            raise TopologyError("stream belongs to a different dataflow")
        key = (stream.node, stream.port)
        if key in self._consumed:
            raise TopologyError(
                f"output {key} consumed twice; insert a copy operator to fan out"
            )
        self._consumed.add(key)
        if routing is None:
            routing = Pipeline()
        self.edges.append(
            _EdgeDef(stream.node, stream.port, dst, dst_port, routing)
        )

    def finish(self):
        """Validate wiring and build the frozen topology."""
        for n, node in enumerate(self.nodes):
            for p in range(node.outputs):
                if (n, p) not in self._consumed:
                    raise TopologyError(
                        f"output port {p} of {node.name!r} is not connected"
                    )
        topo = DataflowTopology(self.algebra)
        for node in self.nodes:
            internal = node.internal
            topo.add_node(node.name, node.inputs, node.outputs, internal)
        for e in self.edges:
            topo.add_edge(e.src, e.src_port, e.dst, e.dst_port)
        return topo.freeze()


# -- per-worker runtime pieces ------------------------------------------------


class OperatorContext:
    """What construct() learns about where it is running."""

    __slots__ = ("worker", "workers", "node", "name", "algebra")

    def __init__(self, worker, workers, node, name, algebra):
        self.worker = worker
        self.workers = workers
        self.node = node
        self.name = name
        self.algebra = algebra


class Session:
    """An open send grant on one output, pinned to a token's timestamp.

    Records buffer per (time, destination worker); closing the session turns
    them into messages of at most the configured batch size and records one
    +1 pointstamp delta per message. Use as a context manager; the runtime
    force-closes sessions leaked past the end of an invocation.
    """

    __slots__ = ("_handle", "_token", "_base", "_buffer", "_closed")

    def __init__(self, handle, grant):
        bookkeeping = handle.bookkeeping
        if isinstance(grant, TimestampToken):
            if grant._bk is not bookkeeping:
                raise TokenError("token does not match this output")
            grant._pin()
            self._token = grant
            self._base = grant.time
        elif isinstance(grant, TimestampTokenRef):
            bk, base = grant._grant(handle.port)
            if bk is not bookkeeping:
                raise TokenError("token ref does not match this output")
            self._token = None
            self._base = base
        else:
            raise TokenError(f"cannot open a session from {grant!r}")
        self._handle = handle
        self._buffer = {}
        self._closed = False
        handle._open.append(self)

    def give(self, record):
        self.give_at(self._base, record)

    def give_many(self, records):
        base = self._base
        for record in records:
            self.give_at(base, record)

    def give_at(self, time, record):
        """Send at an explicitly later time than the pinned one."""
        if self._closed:
            raise TokenError("session already closed")
        handle = self._handle
        if time != self._base and not handle.algebra.leq(self._base, time):
            raise TokenError(
                f"session at {self._base!r} cannot send at {time!r}"
            )
        for target in handle.routing.targets(record, handle.worker_index, handle.workers):
            self._buffer.setdefault((time, target), []).append(record)

    def close(self):
        if self._closed:
            return
        self._closed = True
        handle = self._handle
        handle._open.remove(self)
        bookkeeping = handle.bookkeeping
        size = handle.max_message_size
        sent = False
        out = []
        for (time, target), records in self._buffer.items():
            for lo in range(0, len(records), size):
                chunk = tuple(records[lo : lo + size])
                bookkeeping.record(time, +1)
                out.append((target, Message(handle.edge, time, chunk)))
                sent = True
        self._buffer.clear()
        if self._token is not None:
            self._token._unpin()
        if sent:
            bookkeeping.commit()
        for target, message in out:
            handle.emit(target, message)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False


class OutputHandle:
    """One output port of one operator instance."""

    __slots__ = (
        "port",
        "edge",
        "routing",
        "bookkeeping",
        "algebra",
        "worker_index",
        "workers",
        "max_message_size",
        "emit",
        "_open",
    )

    def __init__(self, port, edge, routing, bookkeeping, algebra, worker_index,
                 workers, max_message_size, emit):
        self.port = port
        self.edge = edge
        self.routing = routing
        self.bookkeeping = bookkeeping
        self.algebra = algebra
        self.worker_index = worker_index
        self.workers = workers
        self.max_message_size = max_message_size
        self.emit = emit
        self._open = []

    def session(self, grant):
        """Open a Session from a token or a token ref; sends are stamped with
        the pinned timestamp or any explicitly later one."""
        return Session(self, grant)

    def give(self, grant, record):
        """One-shot session for a single record."""
        with Session(self, grant) as session:
            session.give(record)

    def _close_leftovers(self):
        while self._open:
            self._open[-1].close()


class InputHandle:
    """The messages and frontier one operator input sees for one invocation.

    Iterating yields (token ref, record batch) pairs; the ref is valid only
    within the batch's lexical extent and is how the operator retains
    capabilities or opens sessions without extra bookkeeping. Messages not
    iterated stay queued for the next invocation. Consumption is accounted
    when the invocation completes, so retains and sends land in the same
    drained batch as the -1 for the message that justified them.
    """

    __slots__ = ("_worker", "_inst", "port", "_edges", "_scope", "_consumed")

    def __init__(self, worker, inst, port, scope, consumed):
        self._worker = worker
        self._inst = inst
        self.port = port
        self._edges = inst.in_ports[port]
        self._scope = scope
        self._consumed = consumed

    def frontier(self):
        """Live view of this port's frontier (a MutableAntichain)."""
        return self._worker.tracker.antichain(PortRef(self._inst.node, self.port))

    def has_data(self):
        queues = self._worker.in_queues
        return any(queues[e] for e in self._edges)

    def __iter__(self):
        worker = self._worker
        inst = self._inst
        queues = worker.in_queues
        check = worker.safety_checks
        port = self.port
        for edge in self._edges:
            queue = queues[edge]
            while queue:
                message = queue.popleft()
                if check:
                    worker._check_delivery(inst.node, port, message)
                self._consumed.append((edge, message.time))
                ref = TimestampTokenRef(
                    self._scope, message.time, inst.ref_ports(port, message.time)
                )
                yield ref, message.records


class _OpInstance:
    __slots__ = (
        "node",
        "name",
        "style",
        "invoke",
        "in_ports",
        "out_handles",
        "bookkeepings",
        "internal",
        "_algebra",
    )

    def __init__(self, node, name, style, in_ports, out_handles, bookkeepings,
                 internal, algebra):
        self.node = node
        self.name = name
        self.style = style
        self.invoke = None
        self.in_ports = in_ports
        self.out_handles = out_handles
        self.bookkeepings = bookkeepings
        self.internal = internal
        self._algebra = algebra

    def holds_tokens(self):
        for bk in self.bookkeepings:
            if bk.live_tokens:
                return True
        return False

    def ref_ports(self, in_port, time):
        """Per output port, (bookkeeping, send time) reachable from this
        input at the message's time, or None when no path is declared."""
        apply_s = self._algebra.apply
        internal = self.internal
        out = []
        for q, bk in enumerate(self.bookkeepings):
            s = internal.get((in_port, q))
            if s is None:
                out.append(None)
            else:
                out.append((bk, apply_s(s, time)))
        return out

    def coordination_events(self):
        return sum(bk.events for bk in self.bookkeepings)


class Counters:
    """Per-worker tallies of scheduler and channel activity."""

    __slots__ = (
        "invocations",
        "batches_sent",
        "batches_applied",
        "messages_sent",
        "messages_consumed",
    )

    def __init__(self, nodes):
        self.invocations = [0] * nodes
        self.batches_sent = 0
        self.batches_applied = 0
        self.messages_sent = 0
        self.messages_consumed = 0


class Worker:
    """One thread of control: operators, queues, and a frontier tracker."""

    def __init__(self, engine, index, topology):
        self.engine = engine
        self.index = index
        self.tracker = FrontierTracker(topology)
        self.instances = []
        self.in_queues = {e: deque() for e in range(len(topology.edges))}
        self.inbox = deque()
        self.counters = Counters(len(topology.nodes))
        self.port_watches = {}
        self.safety_checks = engine.config.safety_checks
        self._dirty = deque()
        self._dirty_set = set()
        self._outbox = []
        self._edge_dst = [e.dst for e in topology.edges]

    # -- channel endpoints ---------------------------------------------------

    def enqueue_message(self, message):
        self.in_queues[message.edge].append(message)
        self._mark_dirty(self._edge_dst[message.edge])

    def enqueue_progress(self, batch):
        self.inbox.append(batch)

    def _mark_dirty(self, node):
        if node not in self._dirty_set:
            self._dirty_set.add(node)
            self._dirty.append(node)

    # -- stepping --------------------------------------------------------------

    def step(self):
        """Drain progress, then run every operator that has a reason to run.
        Returns whether anything happened."""
        worked = False
        inbox = self.inbox
        while inbox:
            self._apply_progress(inbox.popleft())
            worked = True
        for _ in range(len(self._dirty)):
            node = self._dirty.popleft()
            self._dirty_set.discard(node)
            self._invoke(node)
            worked = True
        return worked

    def _apply_progress(self, batch):
        moved = self.tracker.apply(batch)
        self.counters.batches_applied += 1
        if not moved:
            return
        instances = self.instances
        watches = self.port_watches
        for key, changes in moved.items():
            if type(key) is not PortRef:
                continue
            inst = instances[key.node]
            if inst is not None and inst.holds_tokens():
                self._mark_dirty(key.node)
            watch = watches.get(key)
            if watch is not None:
                watch(self.index, changes, self.tracker.frontier(key))

    def _check_delivery(self, node, port, message):
        chain = self.tracker.antichain(PortRef(node, port))
        if not chain.frontier_leq(message.time):
            raise ProtocolError(
                f"delivery at {message.time!r} on edge {message.edge} not "
                f"covered by the input frontier {chain.frontier()!r}"
            )

    def _invoke(self, node):
        inst = self.instances[node]
        if inst is None or inst.invoke is None:
            return
        self.counters.invocations[node] += 1
        scope = _Scope()
        consumed = []
        inputs = [
            InputHandle(self, inst, port, scope, consumed)
            for port in range(len(inst.in_ports))
        ]
        for bk in inst.bookkeepings:
            bk.busy = True
        try:
            reschedule = inst.invoke(inputs, inst.out_handles)
        finally:
            for handle in inst.out_handles:
                handle._close_leftovers()
            scope.close()
            for bk in inst.bookkeepings:
                bk.busy = False
        batch = ChangeBatch()
        for bk in inst.bookkeepings:
            if bk.dirty:
                batch.extend(bk.drain())
        if consumed:
            self.counters.messages_consumed += len(consumed)
            for edge, time in consumed:
                batch.update(Pointstamp(time, Location.edge(edge)), -1)
        if not batch.is_empty():
            self.counters.batches_sent += 1
            self.engine._audit(batch)
            self._apply_progress(batch)
            self.engine._broadcast_from(batch, self.index)
        if self._outbox:
            workers = self.engine.workers
            self.counters.messages_sent += len(self._outbox)
            for target, message in self._outbox:
                workers[target].enqueue_message(message)
            self._outbox.clear()
        if reschedule:
            self._mark_dirty(node)
        else:
            for edges in inst.in_ports:
                for e in edges:
                    if self.in_queues[e]:
                        self._mark_dirty(node)
                        break

    def _emit(self, target, message):
        self._outbox.append((target, message))

    def is_idle(self):
        return not self.inbox and not self._dirty

    def queued_messages(self):
        return sum(len(q) for q in self.in_queues.values())


class InputDriver:
    """Manual control of one dataflow input, from outside any operator.

    Holds the input's token against an eager ledger: every downgrade or send
    is pushed to all workers immediately, without waiting for a scheduler
    pass, so the driver can run on its own thread of control.
    """

    def __init__(self, engine, name, node, edge, handle, token):
        self.engine = engine
        self.name = name
        self.node = node
        self.edge = edge
        self._handle = handle
        self._token = token

    @property
    def time(self):
        return self._token.time

    @property
    def closed(self):
        return self._token.discarded

    def send(self, time, records):
        """Inject records at `time`, which must be geq the input's current
        time. Does not advance the input."""
        with self._handle.session(self._token) as session:
            for record in records:
                session.give_at(time, record)

    def advance_to(self, time):
        """Promise that no further records will be sent below `time`."""
        self._token.downgrade(time)

    def close(self):
        """No further records at all; releases the input's token."""
        self._token.discard()


class Engine:
    """A set of workers sharing one dataflow."""

    def __init__(self, config=None):
        self.config = config or EngineConfig()
        if self.config.workers < 1:
            raise ValueError("need at least one worker")
        self.topology = None
        self.workers = []
        self.inputs = {}
        self._plock = threading.Lock()
        self._audit_counts = {} if self.config.safety_checks else None

    # -- construction --------------------------------------------------------

    def build(self, define):
        """Run `define(builder)` once, then instantiate the dataflow on every
        worker. Returns {input name: InputDriver}."""
        if self.topology is not None:
            raise ProtocolError("engine already built")
        cfg = self.config
        builder = DataflowBuilder(cfg.algebra)
        define(builder)
        self.topology = builder.finish()
        self.workers = [Worker(self, i, self.topology) for i in range(cfg.workers)]
        for worker in self.workers:
            self._instantiate(worker, builder)
        return self.inputs

    def _instantiate(self, worker, builder):
        cfg = self.config
        algebra = cfg.algebra
        topo = self.topology
        startup = ChangeBatch()
        for node, spec in enumerate(builder.nodes):
            out_edges = [topo.out_edges(node, p)[0] for p in range(spec.outputs)]
            in_ports = [topo.in_edges(node, p) for p in range(spec.inputs)]
            eager = spec.style == "input" and worker.index == 0
            bookkeepings = [
                TokenBookkeeping(
                    Location.edge(e),
                    algebra,
                    on_commit=self._eager_flush if eager else None,
                )
                for e in out_edges
            ]
            handles = [
                OutputHandle(
                    p,
                    e,
                    builder.edges[e].routing,
                    bookkeepings[p],
                    algebra,
                    worker.index,
                    cfg.workers,
                    cfg.max_message_size,
                    worker._emit,
                )
                for p, e in enumerate(out_edges)
            ]
            inst = _OpInstance(
                node,
                spec.name,
                spec.style,
                in_ports,
                handles,
                bookkeepings,
                self.topology.nodes[node].internal,
                algebra,
            )
            if spec.style == "input":
                worker.instances.append(inst)
                if worker.index == 0:
                    token = mint_initial(bookkeepings[0])
                    driver = InputDriver(
                        self, spec.name, node, out_edges[0], handles[0], token
                    )
                    driver._handle.emit = self._driver_emit
                    self.inputs[spec.name] = driver
                continue
            ctx = OperatorContext(
                worker.index, cfg.workers, node, spec.name, algebra
            )
            tokens = [TimestampToken(algebra.zero, bk, _record=False) for bk in bookkeepings]
            for bk, token in zip(bookkeepings, tokens):
                bk.record(algebra.zero, +1)
                bk.live_tokens += 1
                bk.events += 1
            raw = spec.construct(ctx, tokens)
            inst.invoke = self._wrap(spec.style, raw)
            worker.instances.append(inst)
        for inst in worker.instances:
            for bk in inst.bookkeepings:
                if bk.dirty and bk.on_commit is None:
                    startup.extend(bk.drain())
        if not startup.is_empty():
            self._audit(startup)
            worker._apply_progress(startup)
            self._broadcast_from(startup, worker.index)

    @staticmethod
    def _wrap(style, raw):
        if style == "unary":
            return lambda inputs, outputs: raw(inputs[0], outputs[0])
        if style == "sink":
            return lambda inputs, outputs: raw(inputs[0])
        return raw

    # -- progress fan-out ------------------------------------------------------

    def _broadcast_from(self, batch, origin):
        with self._plock:
            for worker in self.workers:
                if worker.index != origin:
                    worker.enqueue_progress(batch)

    def _eager_flush(self, bookkeeping):
        batch = bookkeeping.drain()
        if batch.is_empty():
            return
        self._audit(batch)
        with self._plock:
            for worker in self.workers:
                worker.enqueue_progress(batch)

    def _driver_emit(self, target, message):
        self.workers[target].enqueue_message(message)

    def _audit(self, batch):
        counts = self._audit_counts
        if counts is None:
            return
        for ps, delta in batch.items():
            n = counts.get(ps, 0) + delta
            if n < 0:
                raise ProtocolError(f"global count for {ps!r} went negative")
            if n:
                counts[ps] = n
            else:
                del counts[ps]

    # -- driving ----------------------------------------------------------------

    def step_all(self):
        """One round-robin pass over all workers; True if any did work."""
        worked = False
        for worker in self.workers:
            if worker.step():
                worked = True
        return worked

    def run_until_quiescent(self):
        """Step until nothing moves, then check that the dataflow is done:
        every message consumed, every token discarded, every frontier empty.
        Anything left is reported as a leak."""
        while self.step_all():
            pass
        queued = sum(w.queued_messages() for w in self.workers)
        if queued:
            raise ProtocolError(f"stalled with {queued} undelivered messages")
        live = self.workers[0].tracker.live()
        if live:
            topo = self.topology
            listed = ", ".join(
                f"time {ps.time!r} at {topo.describe(ps.loc)}"
                for ps in sorted(live, key=repr)[:8]
            )
            raise DeadlockError(
                f"no runnable work but {len(live)} pointstamp(s) remain live "
                f"(a token was likely lost): {listed}",
                sorted(live, key=repr),
            )

    def run_threaded(self, driver, drain_timeout=30.0):
        """One thread per worker stepping continuously; `driver()` runs on the
        calling thread. After it returns, wait for quiescence (bounded by
        `drain_timeout`), stop the workers, and report whether the dataflow
        drained completely."""
        stop = threading.Event()

        def loop(worker):
            while not stop.is_set():
                if not worker.step():
                    _time.sleep(0.0002)

        threads = [
            threading.Thread(target=loop, args=(w,), daemon=True)
            for w in self.workers
        ]
        for t in threads:
            t.start()
        try:
            driver()
            deadline = _time.monotonic() + drain_timeout
            quiet = 0
            drained = False
            while _time.monotonic() < deadline:
                idle = all(
                    w.is_idle() and w.queued_messages() == 0 for w in self.workers
                ) and all(w.tracker.is_quiescent() for w in self.workers)
                quiet = quiet + 1 if idle else 0
                if quiet >= 3:
                    drained = True
                    break
                _time.sleep(0.002)
            return drained
        finally:
            stop.set()
            for t in threads:
                t.join()

    # -- observation ------------------------------------------------------------

    def watch_port(self, node, port, callback):
        """Invoke `callback(worker index, changes, frontier)` whenever the
        given input port's frontier moves on any worker."""
        key = PortRef(node, port)
        for worker in self.workers:
            worker.port_watches[key] = callback

    def node_invocations(self, node):
        return sum(w.counters.invocations[node] for w in self.workers)

    def coordination_events(self, node):
        return sum(
            w.instances[node].coordination_events()
            for w in self.workers
            if w.instances[node] is not None
        )

    def frontiers_agree(self):
        """True when every worker's tracker reports identical frontiers."""
        base = self.workers[0].tracker.frontiers()
        return all(w.tracker.frontiers() == base for w in self.workers[1:])
