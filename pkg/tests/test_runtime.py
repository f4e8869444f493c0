import random
from collections import Counter

import pytest

from tokenflow import (
    ChangeBatch,
    DeadlockError,
    Engine,
    EngineConfig,
    Exchange,
    Location,
    Pipeline,
    Pointstamp,
    TokenError,
    capture,
    map_records,
    noop_forward,
    rolling_count,
)
from tokenflow.errors import ProtocolError, TopologyError


def build_engine(build, workers=1, **kwargs):
    engine = Engine(EngineConfig(workers=workers, **kwargs))
    inputs = engine.build(build)
    return engine, inputs


class TestBuild:
    def test_input_map_sink(self):
        def build(df):
            stream = df.new_input()
            doubled = map_records(stream, lambda x: 2 * x)
            capture(doubled)

        engine, inputs = build_engine(build)
        assert len(engine.topology.nodes) == 3
        assert len(engine.topology.edges) == 2
        # the stateless map discarded its startup token, so closing the
        # input is all it takes to drain
        inp = inputs["input"]
        inp.close()
        engine.run_until_quiescent()

    def test_flat_cycle_rejected(self):
        def build(df):
            stream = df.new_input()
            loop, handle = df.feedback(summary=0)
            handle.connect(loop)
            capture(stream)

        engine = Engine(EngineConfig())
        with pytest.raises(TopologyError):
            engine.build(build)

    def test_stream_consumed_twice_rejected(self):
        def build(df):
            stream = df.new_input()
            capture(stream)
            capture(stream)

        with pytest.raises(TopologyError):
            Engine(EngineConfig()).build(build)

    def test_unconnected_output_rejected(self):
        def build(df):
            df.new_input()

        with pytest.raises(TopologyError):
            Engine(EngineConfig()).build(build)


class TestSessions:
    def test_chunking_1000_records_max_256(self):
        def build(df):
            stream = df.new_input()
            capture(stream)

        engine, inputs = build_engine(build)
        inp = inputs["input"]
        worker = engine.workers[0]
        baseline = len(worker.inbox)
        inp.send(0, list(range(1000)))
        # ceil(1000/256) messages, one +1 each, on the input's edge
        edge = inp.edge
        assert len(worker.in_queues[edge]) == 4
        assert [len(m.records) for m in worker.in_queues[edge]] == [256, 256, 256, 232]
        sent = ChangeBatch()
        for batch in list(worker.inbox)[baseline:]:
            sent.extend(batch)
        assert sent.as_dict() == {Pointstamp(0, Location.edge(edge)): 4}
        inp.close()
        engine.run_until_quiescent()

    def test_empty_session_no_message(self):
        def build(df):
            stream = df.new_input()
            capture(stream)

        engine, inputs = build_engine(build)
        inp = inputs["input"]
        inp.send(0, [])
        assert engine.workers[0].queued_messages() == 0
        inp.close()
        engine.run_until_quiescent()

    def test_send_below_capability_rejected(self):
        def build(df):
            stream = df.new_input()
            capture(stream)

        engine, inputs = build_engine(build)
        inp = inputs["input"]
        inp.advance_to(10)
        with pytest.raises(TokenError):
            inp.send(9, [1])
        inp.send(10, [1])
        inp.close()
        engine.run_until_quiescent()


class TestDeliver:
    def test_passthrough_accounting(self):
        def build(df):
            stream = df.new_input()
            fwd = noop_forward(stream)
            capture(fwd)

        engine, inputs = build_engine(build)
        inp = inputs["input"]
        inp.send(7, ["x"])
        engine.step_all()
        worker = engine.workers[0]
        e_in, e_out = 0, 1
        # consumed at 7 on the inbound edge, re-sent at 7 on the outbound
        assert worker.tracker.count(Pointstamp(7, Location.edge(e_in))) == 0
        assert worker.tracker.count(Pointstamp(7, Location.edge(e_out))) == 1
        inp.close()
        engine.run_until_quiescent()

    def test_two_messages_one_invocation(self):
        def build(df):
            stream = df.new_input()
            capture(noop_forward(stream))

        engine, inputs = build_engine(build)
        inp = inputs["input"]
        inp.send(7, ["a"])
        inp.send(7, ["b"])
        noop_node = 1
        before = engine.node_invocations(noop_node)
        engine.step_all()
        assert engine.node_invocations(noop_node) == before + 1
        assert engine.workers[0].counters.messages_consumed >= 2
        inp.close()
        engine.run_until_quiescent()


class TestStepping:
    def test_quiescent_step_returns_false(self):
        def build(df):
            capture(df.new_input())

        engine, inputs = build_engine(build)
        engine.step_all()
        assert engine.step_all() is False
        inputs["input"].close()
        engine.run_until_quiescent()
        assert engine.step_all() is False

    def test_single_worker_drains_to_quiescence(self):
        def build(df):
            capture(noop_forward(df.new_input()))

        engine, inputs = build_engine(build)
        inp = inputs["input"]
        for t in range(5):
            inp.send(t, [t])
            inp.advance_to(t + 1)
        inp.close()
        engine.run_until_quiescent()
        assert engine.workers[0].tracker.is_quiescent()
        assert engine.frontiers_agree()

    def test_exchange_routes_across_workers(self):
        collected = capture_holder = {}

        def build(df):
            stream = df.new_input()
            fwd = noop_forward(stream, routing=Exchange(lambda r: r))
            capture_holder["cap"] = capture(fwd)

        engine, inputs = build_engine(build, workers=2, safety_checks=True)
        inp = inputs["input"]
        inp.send(0, list(range(8)))
        inp.close()
        engine.run_until_quiescent()
        cap = capture_holder["cap"]
        assert sorted(r for _, r in cap.records()) == list(range(8))
        # both workers saw some records (crc32 spreads 0..7)
        assert len(cap.per_worker) == 2
        assert engine.frontiers_agree()


class TestQuiescence:
    def test_empty_dataflow_immediate(self):
        def build(df):
            capture(df.new_input())

        engine, inputs = build_engine(build)
        inputs["input"].close()
        engine.run_until_quiescent()

    def test_word_count_10_records(self):
        holder = {}

        def build(df):
            stream = df.new_input()
            counted = rolling_count(stream, routing=Exchange(lambda w: w))
            holder["cap"] = capture(counted)

        engine, inputs = build_engine(build, workers=2)
        words = ["a", "b", "a", "c", "b", "a", "d", "a", "c", "b"]
        inp = inputs["input"]
        for t, word in enumerate(words):
            inp.send(t, [word])
            inp.advance_to(t + 1)
        inp.close()
        engine.run_until_quiescent()
        got = [r for _, r in holder["cap"].records()]
        offline = Counter()
        expected = []
        for word in words:
            offline[word] += 1
            expected.append((word, offline[word]))
        assert sorted(got) == sorted(expected)

    def test_forever_retained_token_reported(self):
        def build(df):
            stream = df.new_input()

            def construct(ctx, tokens):
                tokens[0].discard()
                hoard = []

                def invoke(inp, out):
                    for ref, records in inp:
                        hoard.append(ref.retain())  # never released

                return invoke

            leaky = stream.unary("leaky", construct)
            capture(leaky)

        engine, inputs = build_engine(build)
        inp = inputs["input"]
        inp.send(5, ["x"])
        inp.close()
        with pytest.raises(DeadlockError) as excinfo:
            engine.run_until_quiescent()
        leaked = excinfo.value.pointstamps
        assert Pointstamp(5, Location.edge(1)) in leaked
        assert "5" in str(excinfo.value)
        assert "leaky" in str(excinfo.value)


class TestSafetyInstrumentation:
    def test_randomized_pipelines_safe_and_quiescent(self):
        rng = random.Random(31)
        for trial in range(25):
            workers = rng.choice([2, 3, 4])
            holder = {}

            def build(df):
                stream = df.new_input()
                stages = rng.randint(1, 3)
                for i in range(stages):
                    routing = Exchange(lambda r: r) if rng.random() < 0.5 else None
                    stream2 = noop_forward(stream, name=f"noop{i}", routing=routing)
                    stream = stream2
                holder["cap"] = capture(stream)

            engine, inputs = build_engine(
                build, workers=workers, safety_checks=True
            )
            inp = inputs["input"]
            t = 0
            sent = []
            for _ in range(rng.randint(3, 20)):
                t += rng.randint(0, 3)
                value = rng.randint(0, 99)
                inp.send(t, [value])
                sent.append(value)
                if rng.random() < 0.6:
                    inp.advance_to(t)
                if rng.random() < 0.5:
                    engine.step_all()
            inp.close()
            engine.run_until_quiescent()
            assert sorted(r for _, r in holder["cap"].records()) == sorted(sent)
            assert engine.frontiers_agree()
            for worker in engine.workers:
                assert worker.tracker.is_quiescent()


class TestDeterminismOfAccounting:
    def test_net_deltas_independent_of_step_order(self):
        def run(step_orders):
            holder = {}

            def build(df):
                stream = df.new_input()
                counted = rolling_count(stream, routing=Exchange(lambda w: w))
                holder["cap"] = capture(counted)

            engine, inputs = build_engine(build, workers=2, safety_checks=True)
            audits = []
            original_audit = engine._audit

            def spy(batch):
                audits.extend(batch.items())
                original_audit(batch)

            engine._audit = spy
            inp = inputs["input"]
            order_iter = iter(step_orders)
            for t, word in enumerate(["a", "b", "a", "c"]):
                inp.send(t, [word])
                inp.advance_to(t + 1)
                for index in next(order_iter, [0, 1]):
                    engine.workers[index].step()
            inp.close()
            engine.run_until_quiescent()
            net = Counter()
            for pointstamp, delta in audits:
                net[pointstamp] += delta
            return holder["cap"].by_time(), Counter(
                pointstamp for pointstamp, _ in audits
            )

        out_a, touched_a = run([[0, 1], [1, 0], [0, 1], [1, 0]])
        out_b, touched_b = run([[1, 0], [0, 1], [1, 0], [0, 1]])
        assert out_a == out_b
        assert touched_a == touched_b


class TestThreaded:
    def test_threaded_run_drains(self):
        holder = {}

        def build(df):
            stream = df.new_input()
            counted = rolling_count(stream, routing=Exchange(lambda w: w))
            holder["cap"] = capture(counted)

        engine = Engine(EngineConfig(workers=2, deterministic=False))
        inputs = engine.build(build)
        inp = inputs["input"]

        def driver():
            for t, word in enumerate(["a", "b", "a", "b", "c"] * 20):
                inp.send(t, [word])
                inp.advance_to(t + 1)
            inp.close()

        assert engine.run_threaded(driver)
        counts = [r for _, r in holder["cap"].records()]
        assert len(counts) == 100
        assert engine.frontiers_agree()
