"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

import functools
import math
import re
import struct
import subprocess
import sys
import time
import tracemalloc

import numpy as np
import pytest

import dyncore as dc
from dyncore import (
    ClassFactoredSoftmax,
    GradientSlots,
    ParallelPlan,
    RNNBuilder,
    Trainer,
    TreeLSTM,
    TreeNode,
    average_slots,
    ops,
    train_parallel,
)
from dyncore.bench import Vocab, generate
from dyncore.bench.tasks import (
    TaskConfig,
    pairclass_batch_loss,
    pairclass_loss,
    rnnlm_batch_nll,
    rnnlm_sentence_nll,
    run_earlystop,
    run_tagger,
    run_treelstm,
)
from dyncore.errors import PoolExhausted, RosterMismatch

from util import make_ctx, scalarize

EPOCH_RE = re.compile(r"^epoch=(\d+) loss=([-\d.e+]+) metric=([-\d.e+]+) speed=([-\d.e+]+)$")


def criterion(number, description):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] criterion {number}: FAIL - {description}")
                raise
            print(f"[acceptance] criterion {number}: PASS - {description}")

        return wrapper

    return deco


def dctx(seed):
    return make_ctx(dtype=np.float64, mb=2.0, seed=seed)


# ---------------------------------------------------------------------------
# criterion 1: finite-difference gradient suite over the whole catalog
# ---------------------------------------------------------------------------


def _rand_dims(rng, lo=1, hi=4):
    return int(rng.integers(lo, hi + 1))


def _batched_source(model, rng, dim, batch):
    """A batched-expression factory with gradient flow (lookup-table rows);
    the table and ids are fixed once so the loss is stable across FD calls."""
    rows = max(3, batch)
    E = model.add_lookup_parameters(rows, dim, f"E{len(model.lookups)}")
    ids = [int(i) for i in rng.integers(0, rows, size=batch)]
    return lambda cg: ops.lookup_batch(cg, E, ids)


def _op_cases(name, rng, weights):
    """Build (cg, model, build_loss) exercising `name` with random shapes."""
    cg, model = dctx(int(rng.integers(0, 2**31)))
    n = _rand_dims(rng, 2, 4)
    batch = _rand_dims(rng, 2, 3)

    if name == "input":
        p = model.add_parameters((n,), "p")
        const = dc.from_values(dc.Shape((n,)), rng.normal(size=n))
        build = lambda cg: scalarize(cg, ops.add(ops.parameter(cg, p), ops.input(cg, const)), weights)
    elif name == "parameter":
        p = model.add_parameters((n,), "p")
        build = lambda cg: scalarize(cg, ops.tanh(ops.parameter(cg, p)), weights)
    elif name == "lookup":
        E = model.add_lookup_parameters(4, n, "E")
        row = int(rng.integers(0, 4))
        build = lambda cg: scalarize(cg, ops.tanh(ops.lookup(cg, E, row)), weights)
    elif name == "lookup_batch":
        E = model.add_lookup_parameters(3, n, "E")
        ids = [int(i) for i in rng.integers(0, 3, size=batch + 1)] + [1, 1]  # force repeats
        build = lambda cg: scalarize(cg, ops.lookup_batch(cg, E, ids), weights)
    elif name in ("add", "cmult"):
        fn = getattr(ops, name)
        p = model.add_parameters((n,), "p")
        style = int(rng.integers(0, 3))
        if style == 0:  # both unbatched
            q = model.add_parameters((n,), "q")
            build = lambda cg: scalarize(cg, fn(ops.parameter(cg, p), ops.parameter(cg, q)), weights)
        elif style == 1:  # batch-1 parameter against a batched operand
            src = _batched_source(model, rng, n, batch)
            build = lambda cg: scalarize(cg, fn(ops.parameter(cg, p), src(cg)), weights)
        else:  # batched against batch-1, other order
            src = _batched_source(model, rng, n, batch)
            build = lambda cg: scalarize(cg, fn(src(cg), ops.parameter(cg, p)), weights)
    elif name == "scalar_mul":
        p = model.add_parameters((n,), "p")
        c = float(rng.choice([-1.7, 0.0, 1.0, 2.5]))
        build = lambda cg: scalarize(cg, ops.scalar_mul(ops.parameter(cg, p), c), weights)
    elif name == "matmul":
        m = _rand_dims(rng, 1, 3)
        A = model.add_parameters((m, n), "A")
        style = int(rng.integers(0, 3))
        if style == 0:  # matrix @ vector
            x = model.add_parameters((n,), "x")
            build = lambda cg: scalarize(cg, ops.matmul(ops.parameter(cg, A), ops.parameter(cg, x)), weights)
        elif style == 1:  # matrix @ matrix
            p2 = _rand_dims(rng, 1, 3)
            X = model.add_parameters((n, p2), "X")
            build = lambda cg: scalarize(cg, ops.matmul(ops.parameter(cg, A), ops.parameter(cg, X)), weights)
        else:  # batch-1 matrix @ batched vectors
            src = _batched_source(model, rng, n, batch)
            build = lambda cg: scalarize(cg, ops.matmul(ops.parameter(cg, A), src(cg)), weights)
    elif name == "affine":
        m = _rand_dims(rng, 1, 3)
        b = model.add_parameters((m,), "b")
        W = model.add_parameters((m, n), "W")
        if rng.integers(0, 2):  # one term, batched input
            src = _batched_source(model, rng, n, batch)
            build = lambda cg: scalarize(
                cg, ops.affine(ops.parameter(cg, b), ops.parameter(cg, W), src(cg)), weights
            )
        else:  # two unbatched terms
            n2 = _rand_dims(rng, 1, 3)
            W2 = model.add_parameters((m, n2), "W2")
            x1 = model.add_parameters((n,), "x1")
            x2 = model.add_parameters((n2,), "x2")
            build = lambda cg: scalarize(
                cg,
                ops.affine(
                    ops.parameter(cg, b),
                    ops.parameter(cg, W), ops.parameter(cg, x1),
                    ops.parameter(cg, W2), ops.parameter(cg, x2),
                ),
                weights,
            )
    elif name == "concatenate":
        parts = [model.add_parameters((_rand_dims(rng, 1, 3),), f"p{i}") for i in range(int(rng.integers(2, 4)))]
        build = lambda cg: scalarize(cg, ops.concatenate([ops.parameter(cg, p) for p in parts]), weights)
    elif name in ("tanh", "logistic"):
        fn = getattr(ops, name)
        if rng.integers(0, 2):
            p = model.add_parameters((n,), "p")
            build = lambda cg: scalarize(cg, fn(ops.parameter(cg, p)), weights)
        else:
            src = _batched_source(model, rng, n, batch)
            build = lambda cg: scalarize(cg, fn(src(cg)), weights)
    elif name == "softmax":
        if rng.integers(0, 2):
            p = model.add_parameters((n,), "p")
            build = lambda cg: scalarize(cg, ops.softmax(ops.parameter(cg, p)), weights)
        else:
            src = _batched_source(model, rng, n, batch)
            build = lambda cg: scalarize(cg, ops.softmax(src(cg)), weights)
    elif name == "pickneglogsoftmax":
        p = model.add_parameters((n,), "p")
        label = int(rng.integers(0, n))
        build = lambda cg: ops.pickneglogsoftmax(ops.parameter(cg, p), label)
    elif name == "pickneglogsoftmax_batch":
        E = model.add_lookup_parameters(3, n, "E")
        ids = [int(i) for i in rng.integers(0, 3, size=batch)]
        labels = [int(i) for i in rng.integers(0, n, size=batch)]
        build = lambda cg: scalarize(
            cg, ops.pickneglogsoftmax_batch(ops.lookup_batch(cg, E, ids), labels), weights
        )
    elif name == "sum_batches":
        src = _batched_source(model, rng, n, batch)
        build = lambda cg: scalarize(cg, ops.sum_batches(src(cg)), weights)
    elif name == "pick_range":
        size = n + 2
        p = model.add_parameters((size,), "p")
        lo = int(rng.integers(0, size - 1))
        hi = int(rng.integers(lo + 1, size + 1))
        build = lambda cg: scalarize(cg, ops.pick_range(ops.parameter(cg, p), lo, hi), weights)
    else:
        raise AssertionError(name)
    return cg, model, build


ALL_OPS = (
    "input", "parameter", "lookup", "lookup_batch", "add", "cmult", "scalar_mul",
    "matmul", "affine", "concatenate", "tanh", "logistic", "softmax",
    "pickneglogsoftmax", "pickneglogsoftmax_batch", "sum_batches", "pick_range",
)


@criterion(1, "gradient suite: ops + builders vs central finite differences")
def test_criterion_1_gradient_suite():
    started = time.perf_counter()
    master = np.random.default_rng(2024)
    weights = master.normal(size=64)
    for name in ALL_OPS:
        for _ in range(20):
            cg, model, build = _op_cases(name, master, weights)
            dc.assert_gradients_match(build, model, cg, rtol=1e-5, atol=1e-7)

    for cell in ("simple", "lstm", "gru"):
        for layers in (1, 2):
            for batch in (1, 2):
                cg, model = dctx(int(master.integers(0, 2**31)))
                rnn = RNNBuilder(model, layers, 2, 3, cell, "rnn")
                consts = [
                    dc.from_values(dc.Shape((2,), batch), master.normal(size=2 * batch))
                    for _ in range(4)
                ]

                def build_rnn(cg, rnn=rnn, consts=consts):
                    outs = rnn.initial_state(cg).transduce([ops.input(cg, c) for c in consts])
                    return scalarize(cg, outs[-1], weights)

                dc.assert_gradients_match(build_rnn, model, cg, rtol=1e-5, atol=1e-7)

    # 7-node tree: three internal nodes over four leaves
    tree = TreeNode.binary(
        TreeNode.binary(TreeNode.leaf("a"), TreeNode.leaf("b")),
        TreeNode.binary(TreeNode.leaf("c"), TreeNode.leaf("d")),
    )
    vocab = {"<unk>": 0, "a": 1, "b": 2, "c": 3, "d": 4}
    for seed in range(3):
        cg, model = dctx(100 + seed)
        tl = TreeLSTM(model, vocab, 2, 3, "tl")

        def build_tree(cg, tl=tl):
            h, _ = tl.encode(cg, tree)
            return scalarize(cg, h, weights)

        dc.assert_gradients_match(build_tree, model, cg, rtol=1e-5, atol=1e-7)

    for seed in range(3):
        cg, model = dctx(200 + seed)
        cf = ClassFactoredSoftmax(model, 3, {"w0": 0, "w1": 0, "w2": 1, "w3": 1}, "cf")
        h = model.add_parameters((3,), "h")

        def build_cf(cg, cf=cf, h=h):
            return cf.neg_log_softmax(cg, ops.parameter(cg, h), "w1")

        dc.assert_gradients_match(build_cf, model, cg, rtol=1e-5, atol=1e-7)

    elapsed = time.perf_counter() - started
    assert elapsed < 120, f"gradient suite took {elapsed:.1f}s (budget 120s)"


# ---------------------------------------------------------------------------
# criterion 2: minibatch equivalence
# ---------------------------------------------------------------------------


@criterion(2, "minibatch equivalence: batched loss == summed unbatched losses")
def test_criterion_2_minibatch_equivalence():
    rng = np.random.default_rng(11)
    cg, model = make_ctx(dtype=np.float64, mb=8.0, seed=3)
    W = model.add_parameters((4, 12), "W")
    b = model.add_parameters((4,), "b")
    E = model.add_lookup_parameters(9, 6, "E")
    examples = [
        (int(rng.integers(0, 9)), int(rng.integers(0, 9)), int(rng.integers(0, 4)))
        for _ in range(16)
    ]
    for batch_size in (1, 4, 16):
        batch = examples[:batch_size]
        cg.renew()
        batched = float(
            cg.value(
                pairclass_batch_loss(
                    cg, W, b, E,
                    [e[0] for e in batch], [e[1] for e in batch], [e[2] for e in batch],
                )
            ).data[0]
        )
        summed = 0.0
        for e in batch:
            cg.renew()
            summed += float(cg.value(pairclass_loss(cg, W, b, E, *e)).data[0])
        assert abs(batched - summed) < 1e-5, (batch_size, batched, summed)

    # rnnlm: lock-step padding + masking against the per-sentence loop
    cg2, model2 = make_ctx(dtype=np.float64, mb=8.0, seed=4)
    E2 = model2.add_lookup_parameters(7, 5, "E")
    rnn = RNNBuilder(model2, 1, 5, 6, "lstm", "rnn")
    W2 = model2.add_parameters((7, 6), "W")
    b2 = model2.add_parameters((7,), "b")
    sentences = [
        [int(i) for i in rng.integers(0, 7, size=int(rng.integers(2, 9)))] for _ in range(5)
    ]
    cg2.renew()
    batched = float(cg2.value(rnnlm_batch_nll(cg2, rnn, E2, W2, b2, sentences, pad_id=0)).data[0])
    summed = 0.0
    for ids in sentences:
        cg2.renew()
        summed += float(cg2.value(rnnlm_sentence_nll(cg2, rnn, E2, W2, b2, ids)).data[0])
    assert abs(batched - summed) < 1e-5, (batched, summed)


# ---------------------------------------------------------------------------
# criterion 3: sparse-update correctness
# ---------------------------------------------------------------------------


def _read_saved(path):
    blob = open(path, "rb").read()
    assert blob[:4] == b"DYN1"
    _, count = struct.unpack_from("<II", blob, 4)
    pos = 12
    out = {}
    for _ in range(count):
        kind, nlen = struct.unpack_from("<BH", blob, pos)
        pos += 3
        name = blob[pos : pos + nlen].decode()
        pos += nlen
        (rank,) = struct.unpack_from("<B", blob, pos)
        pos += 1
        dims = struct.unpack_from(f"<{rank}I", blob, pos)
        pos += 4 * rank
        size = int(np.prod(dims))
        out[name] = np.frombuffer(blob, "<f4", size, pos).copy()
        pos += 4 * size
    return out


@criterion(3, "sparse updates: sgd/adagrad identical to dense; adam diverges on untouched rows")
def test_criterion_3_sparse_updates(tmp_path):
    train = str(tmp_path / "tag.train")
    dev = str(tmp_path / "tag.dev")
    generate("tagger", 17, train, dev, sentences=60)

    def tagger_tables(rule, sparse, path):
        cfg = TaskConfig.for_task(
            "tagger", train, dev, epochs=2, trainer=rule, seed=5, sparse=sparse,
            embed=16, hidden=8, mlp=8, save=path,
        )
        run_tagger(cfg)
        return _read_saved(path)

    for rule in ("sgd", "adagrad"):
        dense = tagger_tables(rule, False, str(tmp_path / f"{rule}.dense"))
        sparse = tagger_tables(rule, True, str(tmp_path / f"{rule}.sparse"))
        assert dense.keys() == sparse.keys()
        for name in dense:
            assert np.allclose(dense[name], sparse[name], atol=1e-6), (rule, name)

    # adam: a row touched at step 1 and untouched at step 2 keeps moving under
    # the dense rule (decaying moments) but must stay bitwise frozen when sparse
    def two_step(sparse):
        cg, model = make_ctx(dtype=np.float64, seed=6)
        E = model.add_lookup_parameters(2, 3, "E")
        tr = Trainer(model, "adam", sparse=sparse)
        for rows in ((0, 1), (0,)):
            cg.renew()
            loss = None
            for row in rows:
                term = ops.pickneglogsoftmax(ops.lookup(cg, E, row), 0)
                loss = term if loss is None else ops.add(loss, term)
            cg.backward(loss)
            tr.update()
            yield E.values.copy()

    sparse_steps = list(two_step(sparse=True))
    dense_steps = list(two_step(sparse=False))
    assert np.array_equal(sparse_steps[1][1], sparse_steps[0][1])  # bitwise unchanged
    assert not np.array_equal(dense_steps[1][1], dense_steps[0][1])  # dense moved it


# ---------------------------------------------------------------------------
# criterion 4: arena behavior
# ---------------------------------------------------------------------------


@criterion(4, "arena: no allocations during construction, flat memory over 10k graphs, exhaustion error")
def test_criterion_4_arena():
    pools = dc.new_poolset(4, 4, 4)
    cg = dc.ComputationGraph(pools)
    model = dc.Model(pools, seed=1)
    p = model.add_parameters((8,), "p")

    def build_100_nodes():
        e = ops.parameter(cg, p)
        for _ in range(99):
            e = ops.tanh(e)
        return e

    # graph construction claims nothing from any pool
    cg.renew()
    counters = (pools.forward.alloc_count, pools.backward.alloc_count, pools.parameters.alloc_count)
    tip = build_100_nodes()
    assert len(cg.nodes) == 100
    assert all(n.value is None for n in cg.nodes)
    after = (pools.forward.alloc_count, pools.backward.alloc_count, pools.parameters.alloc_count)
    assert counters == after
    cg.value(tip)
    assert pools.forward.alloc_count == counters[0] + 99  # parameter node aliases storage

    # flat steady-state memory across 10,000 build/discard cycles
    for _ in range(200):  # warmup
        cg.renew()
        cg.value(build_100_nodes())
    tracemalloc.start()
    cg.renew()
    cg.value(build_100_nodes())
    baseline = tracemalloc.get_traced_memory()[0]
    for _ in range(9_800):
        cg.renew()
        cg.value(build_100_nodes())
    final = tracemalloc.get_traced_memory()[0]
    tracemalloc.stop()
    growth = final - baseline
    assert growth < 256 * 1024, f"steady-state memory grew by {growth} bytes"

    # exhaustion raises the documented error
    tiny = dc.new_poolset(0.001, 0.001, 0.5)
    cg2 = dc.ComputationGraph(tiny)
    big = ops.input(cg2, dc.from_values(dc.Shape((4096,)), np.zeros(4096)))
    with pytest.raises(PoolExhausted, match="--mem"):
        cg2.value(big)


# ---------------------------------------------------------------------------
# criterion 5: dynamic structure (tree networks)
# ---------------------------------------------------------------------------


@criterion(5, "tree networks reach 100% train root accuracy on 20 toy trees within 30 epochs")
def test_criterion_5_tree_structures(tmp_path):
    started = time.perf_counter()
    train = str(tmp_path / "trees.train")
    dev = str(tmp_path / "trees.dev")
    generate("treelstm", 23, train, dev, sentences=20)
    cfg = TaskConfig.for_task(
        "treelstm", train, train, epochs=30, trainer="adam", lr=0.02,
        embed=48, hidden=48, seed=7,
    )
    report = run_treelstm(cfg)
    assert max(r.metric for r in report.epochs) == 1.0
    assert time.perf_counter() - started < 60


# ---------------------------------------------------------------------------
# criterion 6: dynamic flow control (early stopping)
# ---------------------------------------------------------------------------


@criterion(6, "early-stop inference reads strictly fewer words at comparable accuracy")
def test_criterion_6_early_stop(tmp_path):
    train = str(tmp_path / "es.train")
    dev = str(tmp_path / "es.dev")
    generate("earlystop", 29, train, dev, sentences=150)
    base = dict(epochs=3, trainer="sgd", lr=0.5, embed=16, seed=8)
    full = run_earlystop(TaskConfig.for_task("earlystop", train, dev, threshold=math.inf, **base))
    early = run_earlystop(TaskConfig.for_task("earlystop", train, dev, threshold=1.0, **base))
    assert full.extra["mean_words_read"] == full.extra["mean_doc_len"]
    assert early.extra["mean_words_read"] < full.extra["mean_doc_len"]
    assert abs(early.epochs[-1].metric - full.epochs[-1].metric) <= 0.02


# ---------------------------------------------------------------------------
# criterion 7: analytic perplexity through the full pipeline
# ---------------------------------------------------------------------------


@criterion(7, "forced-uniform language model reports dev perplexity == |V|")
def test_criterion_7_uniform_perplexity(tmp_path):
    train = str(tmp_path / "lm.train")
    dev = str(tmp_path / "lm.dev")
    proc = subprocess.run(
        [
            sys.executable, "-m", "dyncore.bench.cli", "rnnlm",
            "--train", train, "--dev", dev, "--gen", "--gen-sentences", "30",
            "--epochs", "1", "--trainer", "sgd", "--lr", "0", "--init-zero",
        ],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    tokens = (t for line in open(train) for t in line.split())
    vocab_size = len(Vocab.build(tokens, 1, specials=("<s>", "</s>")))
    lines = proc.stdout.strip().splitlines()
    metric = float(EPOCH_RE.match(lines[1]).group(3))
    assert abs(metric - vocab_size) / vocab_size < 1e-3, (metric, vocab_size)


# ---------------------------------------------------------------------------
# criterion 8: parallel trainer
# ---------------------------------------------------------------------------


@criterion(8, "parallel: W=1 bitwise-serial, W=4 in the serial accuracy band, exact averaging")
def test_criterion_8_parallel(tmp_path):
    # exact slot averaging
    _, m = make_ctx()
    p = m.add_parameters((2,), "p")
    s1, s2 = GradientSlots(m), GradientSlots(m)
    s1.params[id(p)][:] = [1.0, 3.0]
    s2.params[id(p)][:] = [3.0, 5.0]
    assert np.array_equal(average_slots([s1, s2]).params[id(p)], [2.0, 4.0])

    # W=1 bitwise equals the plain serial loop
    data = [(i % 5, (i * 3) % 5, i % 3) for i in range(30)]

    def build(seed):
        cg, model = make_ctx(seed=seed)
        W = model.add_parameters((3, 8), "W")
        b = model.add_parameters((3,), "b")
        E = model.add_lookup_parameters(5, 4, "E")
        return cg, model, lambda cg, _m, ex: pairclass_loss(cg, W, b, E, *ex)

    cg_a, model_a, loss_a = build(41)
    tr_a = Trainer(model_a, "sgd", lr=0.1, sparse=False)
    for ex in data:
        cg_a.renew()
        cg_a.backward(loss_a(cg_a, model_a, ex))
        tr_a.update()

    cg_b, model_b, loss_b = build(41)
    tr_b = Trainer(model_b, "sgd", lr=0.1, sparse=False)
    train_parallel(ParallelPlan(1, loss_b, parent_cg=cg_b), model_b, tr_b, data, 1)
    for pa, pb in zip(model_a.parameters, model_b.parameters):
        assert np.array_equal(pa.values.data, pb.values.data)
    assert np.array_equal(model_a.lookups[0].values, model_b.lookups[0].values)

    # W=4 reaches the serial accuracy band on the toy classifier
    train = str(tmp_path / "pc.train")
    dev = str(tmp_path / "pc.dev")
    generate("pairclass", 31, train, dev, sentences=240)
    from dyncore.bench.tasks import run_pairclass

    base = dict(epochs=8, trainer="adam", lr=0.01, sparse=False, embed=16, seed=9)
    serial = run_pairclass(TaskConfig.for_task("pairclass", train, dev, workers=1, **base))
    pooled = run_pairclass(TaskConfig.for_task("pairclass", train, dev, workers=4, **base))
    assert abs(serial.epochs[-1].metric - pooled.epochs[-1].metric) <= 0.02, (
        serial.epochs[-1].metric,
        pooled.epochs[-1].metric,
    )


# ---------------------------------------------------------------------------
# criterion 9: persistence
# ---------------------------------------------------------------------------


@criterion(9, "persistence: bitwise save/load round trip; mismatched roster rejected")
def test_criterion_9_persistence(tmp_path):
    def roster(seed):
        _, model = make_ctx(seed=seed)
        model.add_parameters((3, 4), "W")
        model.add_parameters((5,), "b")
        model.add_lookup_parameters(6, 2, "E")
        return model

    source = roster(51)
    path = str(tmp_path / "model.bin")
    source.save(path)
    twin = roster(99)
    twin.load(path)
    for a, b in zip(source.parameters, twin.parameters):
        assert a.values.data.tobytes() == b.values.data.tobytes()
    assert source.lookups[0].values.tobytes() == twin.lookups[0].values.tobytes()

    _, mismatched = make_ctx(seed=1)
    mismatched.add_parameters((3, 4), "W")
    with pytest.raises(RosterMismatch):
        mismatched.load(path)


# ---------------------------------------------------------------------------
# criterion 10: learning trends with the default task configuration
# ---------------------------------------------------------------------------


@criterion(10, "learning trends at default widths: perplexity < 1.5 in 5 epochs; tagger >= 99% in 10")
def test_criterion_10_learning_trends(tmp_path):
    from dyncore.bench.tasks import run_rnnlm

    started = time.perf_counter()
    train = str(tmp_path / "lm.train")
    dev = str(tmp_path / "lm.dev")
    generate("rnnlm", 37, train, dev, sentences=200, vocab=10)
    cfg = TaskConfig.for_task("rnnlm", train, dev, epochs=5, trainer="adam", seed=11)
    assert cfg.embed == 128 and cfg.hidden == 256  # documented task defaults
    report = run_rnnlm(cfg)
    assert min(r.metric for r in report.epochs) < 1.5, [r.metric for r in report.epochs]
    lm_elapsed = time.perf_counter() - started
    assert lm_elapsed < 180, f"rnnlm run took {lm_elapsed:.0f}s"

    started = time.perf_counter()
    ttrain = str(tmp_path / "tag.train")
    tdev = str(tmp_path / "tag.dev")
    generate("tagger", 41, ttrain, tdev, sentences=500)
    tcfg = TaskConfig.for_task("tagger", ttrain, tdev, epochs=10, trainer="adam", seed=12)
    assert (tcfg.embed, tcfg.hidden, tcfg.mlp) == (128, 50, 32)
    treport = run_tagger(tcfg)
    assert max(r.metric for r in treport.epochs) >= 0.99, [r.metric for r in treport.epochs]
    tag_elapsed = time.perf_counter() - started
    assert tag_elapsed < 180, f"tagger run took {tag_elapsed:.0f}s"


# ---------------------------------------------------------------------------
# criterion 11: throughput report format and startup bound
# ---------------------------------------------------------------------------


@criterion(11, "bench emits startup_secs + epoch lines in the documented format; startup < 2s")
def test_criterion_11_throughput_report(tmp_path):
    train = str(tmp_path / "pc.train")
    dev = str(tmp_path / "pc.dev")
    proc = subprocess.run(
        [
            sys.executable, "-m", "dyncore.bench.cli", "pairclass",
            "--train", train, "--dev", dev, "--gen", "--gen-sentences", "80", "--epochs", "2",
        ],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.strip().splitlines()
    startup = re.match(r"^startup_secs=([\d.e+-]+)$", lines[0])
    assert startup, lines[0]
    assert float(startup.group(1)) < 2.0
    epoch_lines = [EPOCH_RE.match(line) for line in lines[1:3]]
    assert all(epoch_lines), lines[1:3]
    assert all(float(m.group(4)) > 0 for m in epoch_lines)  # words/sec reported
