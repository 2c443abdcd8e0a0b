"""The four benchmark tasks plus the two demo programs, at desk scale.

Every runner reports one record per epoch (mean training loss, the task
metric, and words/sec or sents/sec over training wall-clock) after an initial
startup line measuring time from program start to the first training instance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .. import ops
from ..arena import poolset_from_mem_flag
from ..builders import RNNBuilder, TreeLSTM, TreeNode
from ..errors import ConfigError, DataError, FileError
from ..graph import ComputationGraph
from ..params import Model
from ..parallel import ParallelPlan, train_parallel
from ..tensor import Shape, Tensor
from ..trainers import Trainer
from .vocab import Vocab

TASKS = ("rnnlm", "tagger", "tagger-char", "treelstm", "pairclass", "earlystop")
PARALLEL_TASKS = ("tagger", "tagger-char", "pairclass")

# default widths per task (word embedding / recurrent nodes / perceptron /
# char embedding); the two demo programs use the smaller classifier sizes
DEFAULT_DIMS = {
    "rnnlm": {"embed": 128, "hidden": 256},
    "tagger": {"embed": 128, "hidden": 50, "mlp": 32},
    "tagger-char": {"embed": 128, "hidden": 50, "mlp": 32, "char_dim": 20, "char_hidden": 50},
    "treelstm": {"embed": 128, "hidden": 128},
    "pairclass": {"embed": 50, "hidden": 0},
    "earlystop": {"embed": 50, "hidden": 0},
}

BOS = "<s>"
EOS = "</s>"


@dataclass
class TaskConfig:
    task: str
    train: str
    dev: str
    embed: int = 128
    hidden: int = 128
    mlp: int = 32
    char_dim: int = 20
    char_hidden: int = 50
    layers: int = 1
    batch_size: int = 1
    epochs: int = 5
    trainer: str = "adam"
    lr: float | None = None
    sparse: bool = True
    workers: int = 1
    mem: str = "128"
    seed: int = 1
    unk_threshold: int = 1
    threshold: float = math.inf
    save: str | None = None
    load: str | None = None
    init_zero: bool = False
    t0: float | None = None  # program start; startup_secs is measured against it

    @classmethod
    def for_task(cls, task: str, train: str, dev: str, **overrides) -> "TaskConfig":
        if task not in TASKS:
            raise ConfigError(f"unknown task {task!r}; pick one of {TASKS}")
        merged = dict(DEFAULT_DIMS[task])
        merged.update(overrides)
        return cls(task=task, train=train, dev=dev, **merged)


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    metric: float
    speed: float


@dataclass
class MetricsReport:
    startup_secs: float = 0.0
    epochs: list[EpochRecord] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


class _Run:
    """Shared runner plumbing: context setup, epoch-line emission, timing."""

    def __init__(self, cfg: TaskConfig, out=None):
        if cfg.workers > 1 and cfg.task not in PARALLEL_TASKS:
            raise ConfigError(f"--workers > 1 supports only {PARALLEL_TASKS}, not {cfg.task}")
        if cfg.workers > 1 and cfg.sparse:
            raise ConfigError("sparse updates are undefined across workers; use --sparse off")
        self.cfg = cfg
        self.out = out
        self.t0 = cfg.t0 if cfg.t0 is not None else time.perf_counter()
        self.pools = poolset_from_mem_flag(cfg.mem)
        self.cg = ComputationGraph(self.pools)
        self.model = Model(self.pools, seed=cfg.seed, init_zero=cfg.init_zero)
        self.report = MetricsReport()

    def trainer(self) -> Trainer:
        return Trainer(self.model, self.cfg.trainer, self.cfg.lr, sparse=self.cfg.sparse)

    def _print(self, line: str) -> None:
        if self.out is not None:
            print(line, file=self.out, flush=True)

    def mark_started(self) -> None:
        self.report.startup_secs = time.perf_counter() - self.t0
        self._print(f"startup_secs={self.report.startup_secs:.6g}")

    def record(self, epoch: int, loss: float, metric: float, speed: float) -> None:
        self.report.epochs.append(EpochRecord(epoch, loss, metric, speed))
        self._print(f"epoch={epoch} loss={loss:.10g} metric={metric:.10g} speed={speed:.6g}")

    def finish(self) -> MetricsReport:
        if self.cfg.save:
            self.model.save(self.cfg.save)
        return self.report


# ---------------------------------------------------------------------------
# data readers
# ---------------------------------------------------------------------------


def _open_data(path: str):
    try:
        return open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise FileError(f"cannot read {path}: {exc}") from exc


def _read_token_lines(path: str) -> list[list[str]]:
    sentences = []
    with _open_data(path) as fh:
        for line in fh:
            toks = line.split()
            if toks:
                sentences.append(toks)
    if not sentences:
        raise DataError(f"{path}: no sentences")
    return sentences


def _read_pairs(path: str) -> list[tuple[str, str, int]]:
    pairs = []
    with _open_data(path) as fh:
        for ln, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise DataError(f"{path}:{ln}: expected 'word1 word2 label'")
            try:
                pairs.append((parts[0], parts[1], int(parts[2])))
            except ValueError as exc:
                raise DataError(f"{path}:{ln}: label {parts[2]!r} is not an integer") from exc
    if not pairs:
        raise DataError(f"{path}: no examples")
    return pairs


def _read_tagged(path: str) -> list[list[tuple[str, str]]]:
    sentences: list[list[tuple[str, str]]] = []
    current: list[tuple[str, str]] = []
    with _open_data(path) as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                if current:
                    sentences.append(current)
                    current = []
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise DataError(f"{path}:{ln}: expected 'word<TAB>tag', got {line!r}")
            current.append((parts[0], parts[1]))
    if current:
        sentences.append(current)
    if not sentences:
        raise DataError(f"{path}: no sentences")
    return sentences


def _read_labeled_docs(path: str) -> list[tuple[list[str], int]]:
    docs = []
    with _open_data(path) as fh:
        for ln, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < 2:
                raise DataError(f"{path}:{ln}: expected 'word... label'")
            try:
                label = int(parts[-1])
            except ValueError as exc:
                raise DataError(f"{path}:{ln}: label {parts[-1]!r} is not an integer") from exc
            if label not in (-1, 1):
                raise DataError(f"{path}:{ln}: label must be -1 or 1, got {label}")
            docs.append((parts[:-1], label))
    if not docs:
        raise DataError(f"{path}: no documents")
    return docs


def parse_trees(path: str) -> list[TreeNode]:
    """One labeled s-expression per line: `(3 (2 word) (1 word))`."""
    trees = []
    with _open_data(path) as fh:
        for ln, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            toks = line.replace("(", " ( ").replace(")", " ) ").split()
            pos = [0]

            def fail(msg):
                raise DataError(f"{path}:{ln}: {msg}")

            def parse() -> TreeNode:
                if pos[0] >= len(toks) or toks[pos[0]] != "(":
                    fail(f"expected '(' at token {pos[0]}")
                pos[0] += 1
                if pos[0] >= len(toks):
                    fail("missing node label")
                try:
                    label = int(toks[pos[0]])
                except ValueError:
                    fail(f"node label {toks[pos[0]]!r} is not an integer")
                pos[0] += 1
                children = []
                token = None
                while pos[0] < len(toks) and toks[pos[0]] != ")":
                    if toks[pos[0]] == "(":
                        children.append(parse())
                    else:
                        token = toks[pos[0]]
                        pos[0] += 1
                if pos[0] >= len(toks):
                    fail("missing ')'")
                pos[0] += 1
                if token is not None and children:
                    fail("node mixes a leaf token with children")
                if token is not None:
                    return TreeNode.leaf(token, label)
                if not 1 <= len(children) <= 2:
                    fail(f"nodes are unary or binary, got {len(children)} children")
                return TreeNode(children=tuple(children), label=label)

            tree = parse()
            if pos[0] != len(toks):
                fail("trailing tokens after the tree")
            trees.append(tree)
    if not trees:
        raise DataError(f"{path}: no trees")
    return trees


# ---------------------------------------------------------------------------
# pairclass: the two-word classifier (Lines 9-17 style training loop)
# ---------------------------------------------------------------------------


def pairclass_scores(cg: ComputationGraph, W, b, E, id1: int, id2: int):
    we = ops.parameter(cg, W)
    be = ops.parameter(cg, b)
    x = ops.concatenate([ops.lookup(cg, E, id1), ops.lookup(cg, E, id2)])
    return ops.softmax(ops.add(ops.matmul(we, x), be))


def pairclass_loss(cg: ComputationGraph, W, b, E, id1: int, id2: int, label: int):
    return ops.pickneglogsoftmax(pairclass_scores(cg, W, b, E, id1, id2), label)


def pairclass_batch_loss(cg: ComputationGraph, W, b, E, ids1, ids2, labels):
    we = ops.parameter(cg, W)
    be = ops.parameter(cg, b)
    w1 = ops.lookup_batch(cg, E, ids1)
    w2 = ops.lookup_batch(cg, E, ids2)
    scores = ops.softmax(ops.add(ops.matmul(we, ops.concatenate([w1, w2])), be))
    return ops.sum_batches(ops.pickneglogsoftmax_batch(scores, labels))


def run_pairclass(cfg: TaskConfig, out=None) -> MetricsReport:
    run = _Run(cfg, out)
    train = _read_pairs(cfg.train)
    dev = _read_pairs(cfg.dev)
    vocab = Vocab.build((w for ex in train for w in ex[:2]), cfg.unk_threshold)
    n_classes = max(ex[2] for ex in train) + 1

    model = run.model
    W = model.add_parameters((n_classes, 2 * cfg.embed), "W")
    b = model.add_parameters((n_classes,), "b")
    E = model.add_lookup_parameters(len(vocab), cfg.embed, "E")
    if cfg.load:
        model.load(cfg.load)
    trainer = run.trainer()

    def example_loss(cg, _model, ex):
        return pairclass_loss(cg, W, b, E, vocab.id(ex[0]), vocab.id(ex[1]), ex[2])

    def batch_loss(cg, _model, batch):
        return pairclass_batch_loss(
            cg, W, b, E,
            [vocab.id(ex[0]) for ex in batch],
            [vocab.id(ex[1]) for ex in batch],
            [ex[2] for ex in batch],
        )

    if cfg.batch_size <= 1:
        data, loss_fn = train, example_loss
    else:
        data = [train[i : i + cfg.batch_size] for i in range(0, len(train), cfg.batch_size)]
        loss_fn = batch_loss
    plan = ParallelPlan(cfg.workers, loss_fn, parent_cg=run.cg)

    run.mark_started()
    for epoch in range(1, cfg.epochs + 1):
        tick = time.perf_counter()
        (loss_sum,) = train_parallel(plan, model, trainer, data, 1)
        train_secs = max(time.perf_counter() - tick, 1e-9)
        correct = 0
        for ex in dev:
            run.cg.renew()
            scores = pairclass_scores(run.cg, W, b, E, vocab.id(ex[0]), vocab.id(ex[1]))
            if np.argmax(run.cg.value(scores).data) == ex[2]:
                correct += 1
        run.record(epoch, loss_sum / len(train), correct / len(dev), 2 * len(train) / train_secs)
    return run.finish()


# ---------------------------------------------------------------------------
# earlystop: sum-of-embeddings binary classifier with test-time flow control
# ---------------------------------------------------------------------------


def run_earlystop(cfg: TaskConfig, out=None) -> MetricsReport:
    run = _Run(cfg, out)
    train = _read_labeled_docs(cfg.train)
    dev = _read_labeled_docs(cfg.dev)
    vocab = Vocab.build((w for doc, _ in train for w in doc), cfg.unk_threshold)

    model = run.model
    W = model.add_parameters((1, cfg.embed), "W")
    b = model.add_parameters((1,), "b")
    E = model.add_lookup_parameters(len(vocab), cfg.embed, "E")
    if cfg.load:
        model.load(cfg.load)
    trainer = run.trainer()

    def doc_loss(cg, _model, datum):
        words, label = datum
        we = ops.parameter(cg, W)
        be = ops.parameter(cg, b)
        emb_sum = None
        for w in words:
            e = ops.lookup(cg, E, vocab.id(w))
            emb_sum = e if emb_sum is None else ops.add(emb_sum, e)
        score = ops.add(ops.matmul(we, emb_sum), be)
        return ops.logistic(ops.scalar_mul(score, float(label)))

    plan = ParallelPlan(cfg.workers, doc_loss, parent_cg=run.cg)
    n_train_words = sum(len(doc) for doc, _ in train)

    run.mark_started()
    for epoch in range(1, cfg.epochs + 1):
        tick = time.perf_counter()
        (loss_sum,) = train_parallel(plan, model, trainer, train, 1)
        train_secs = max(time.perf_counter() - tick, 1e-9)

        # incremental inference: extend the graph one word at a time and stop
        # once the score magnitude clears the threshold
        correct = 0
        words_read = 0
        cg = run.cg
        for words, label in dev:
            cg.renew()
            we = ops.parameter(cg, W)
            score = ops.parameter(cg, b)
            val = float(cg.value(score).data[0])
            for w in words:
                score = ops.add(score, ops.matmul(we, ops.lookup(cg, E, vocab.id(w))))
                words_read += 1
                val = float(cg.value(score).data[0])
                if abs(val) > cfg.threshold:
                    break
            if label * val > 0:
                correct += 1
        run.record(epoch, loss_sum / len(train), correct / len(dev), n_train_words / train_secs)
        run.report.extra["mean_words_read"] = words_read / len(dev)
        run.report.extra["mean_doc_len"] = sum(len(d) for d, _ in dev) / len(dev)
    run._print(f"mean_words_read={run.report.extra['mean_words_read']:.6g}")
    return run.finish()


# ---------------------------------------------------------------------------
# rnnlm: LSTM language model, optionally minibatched in lock-step
# ---------------------------------------------------------------------------


def rnnlm_sentence_nll(cg: ComputationGraph, rnn: RNNBuilder, E, W, b, ids: list[int]):
    we = ops.parameter(cg, W)
    be = ops.parameter(cg, b)
    state = rnn.initial_state(cg)
    loss = None
    for t in range(len(ids) - 1):
        state = state.add_input(ops.lookup(cg, E, ids[t]))
        step = ops.pickneglogsoftmax(ops.affine(be, we, state.output()), ids[t + 1])
        loss = step if loss is None else ops.add(loss, step)
    return loss


def rnnlm_batch_nll(cg: ComputationGraph, rnn: RNNBuilder, E, W, b, batch_ids, pad_id: int):
    """Lock-step minibatching: shorter sentences are end-padded and their
    padded prediction steps contribute zero loss through the mask."""
    we = ops.parameter(cg, W)
    be = ops.parameter(cg, b)
    t_max = max(len(ids) for ids in batch_ids)
    state = rnn.initial_state(cg)
    loss = None
    for t in range(t_max - 1):
        xs = [ids[t] if t < len(ids) else pad_id for ids in batch_ids]
        labels = [ids[t + 1] if t + 1 < len(ids) else pad_id for ids in batch_ids]
        mask = np.array([1.0 if t + 1 < len(ids) else 0.0 for ids in batch_ids], dtype=cg.dtype)
        state = state.add_input(ops.lookup_batch(cg, E, xs))
        nll = ops.pickneglogsoftmax_batch(ops.affine(be, we, state.output()), labels)
        masked = ops.cmult(nll, ops.input(cg, Tensor(Shape((1,), len(batch_ids)), mask)))
        step = ops.sum_batches(masked)
        loss = step if loss is None else ops.add(loss, step)
    return loss


def run_rnnlm(cfg: TaskConfig, out=None) -> MetricsReport:
    run = _Run(cfg, out)
    train = _read_token_lines(cfg.train)
    dev = _read_token_lines(cfg.dev)
    vocab = Vocab.build((t for s in train for t in s), cfg.unk_threshold, specials=(BOS, EOS))
    n_vocab = len(vocab)

    model = run.model
    E = model.add_lookup_parameters(n_vocab, cfg.embed, "E")
    rnn = RNNBuilder(model, cfg.layers, cfg.embed, cfg.hidden, "lstm", "rnn")
    W = model.add_parameters((n_vocab, cfg.hidden), "W")
    b = model.add_parameters((n_vocab,), "b")
    if cfg.load:
        model.load(cfg.load)
    trainer = run.trainer()
    cg = run.cg

    def to_ids(toks):
        return [vocab.id(BOS)] + [vocab.id(t) for t in toks] + [vocab.id(EOS)]

    def dev_perplexity() -> float:
        total = 0.0
        count = 0
        for toks in dev:
            ids = to_ids(toks)
            cg.renew()
            total += float(cg.value(rnnlm_sentence_nll(cg, rnn, E, W, b, ids)).data[0])
            count += len(ids) - 1
        return math.exp(total / count)

    n_train_tokens = sum(len(to_ids(s)) - 1 for s in train)
    batches = [train[i : i + cfg.batch_size] for i in range(0, len(train), max(1, cfg.batch_size))]

    run.mark_started()
    for epoch in range(1, cfg.epochs + 1):
        tick = time.perf_counter()
        loss_sum = 0.0
        for batch in batches:
            cg.renew()
            if len(batch) == 1:
                loss = rnnlm_sentence_nll(cg, rnn, E, W, b, to_ids(batch[0]))
            else:
                loss = rnnlm_batch_nll(cg, rnn, E, W, b, [to_ids(s) for s in batch], vocab.id(EOS))
            cg.backward(loss)
            loss_sum += float(cg.value(loss).data[0])
            trainer.update()
        train_secs = max(time.perf_counter() - tick, 1e-9)
        run.record(epoch, loss_sum / len(train), dev_perplexity(), n_train_tokens / train_secs)
    return run.finish()


# ---------------------------------------------------------------------------
# tagger: BiLSTM -> perceptron -> tag softmax, optional char-composed embeddings
# ---------------------------------------------------------------------------


def run_tagger(cfg: TaskConfig, out=None, char_features: bool | None = None) -> MetricsReport:
    if char_features is None:
        char_features = cfg.task == "tagger-char"
    run = _Run(cfg, out)
    train = _read_tagged(cfg.train)
    dev = _read_tagged(cfg.dev)
    vocab = Vocab.build((w for s in train for w, _ in s), cfg.unk_threshold)
    tags: list[str] = []
    for s in train:
        for _, t in s:
            if t not in tags:
                tags.append(t)
    tag2i = {t: i for i, t in enumerate(tags)}

    model = run.model
    E = model.add_lookup_parameters(len(vocab), cfg.embed, "E")
    fwd = RNNBuilder(model, cfg.layers, cfg.embed, cfg.hidden, "lstm", "fwd")
    bwd = RNNBuilder(model, cfg.layers, cfg.embed, cfg.hidden, "lstm", "bwd")
    W1 = model.add_parameters((cfg.mlp, 2 * cfg.hidden), "W1")
    b1 = model.add_parameters((cfg.mlp,), "b1")
    W2 = model.add_parameters((len(tags), cfg.mlp), "W2")
    b2 = model.add_parameters((len(tags),), "b2")
    if char_features:
        cvocab = Vocab.build((ch for s in train for w, _ in s for ch in w), 1)
        CE = model.add_lookup_parameters(len(cvocab), cfg.char_dim, "CE")
        cfwd = RNNBuilder(model, 1, cfg.char_dim, cfg.char_hidden, "lstm", "cfwd")
        cbwd = RNNBuilder(model, 1, cfg.char_dim, cfg.char_hidden, "lstm", "cbwd")
        Wp = model.add_parameters((cfg.embed, 2 * cfg.char_hidden), "Wp")
        bp = model.add_parameters((cfg.embed,), "bp")
    if cfg.load:
        model.load(cfg.load)
    trainer = run.trainer()

    def embed_word(cg, word: str):
        if not char_features or vocab.known(word):
            return ops.lookup(cg, E, vocab.id(word))
        chars = [ops.lookup(cg, CE, cvocab.id(ch)) for ch in word]
        f_last = cfwd.initial_state(cg).transduce(chars)[-1]
        b_last = cbwd.initial_state(cg).transduce(list(reversed(chars)))[-1]
        return ops.affine(
            ops.parameter(cg, bp), ops.parameter(cg, Wp), ops.concatenate([f_last, b_last])
        )

    def token_scores(cg, words: list[str]) -> list:
        embs = [embed_word(cg, w) for w in words]
        f_outs = fwd.initial_state(cg).transduce(embs)
        b_outs = bwd.initial_state(cg).transduce(list(reversed(embs)))[::-1]
        w1e, b1e = ops.parameter(cg, W1), ops.parameter(cg, b1)
        w2e, b2e = ops.parameter(cg, W2), ops.parameter(cg, b2)
        scores = []
        for f, bk in zip(f_outs, b_outs):
            h = ops.tanh(ops.affine(b1e, w1e, ops.concatenate([f, bk])))
            scores.append(ops.affine(b2e, w2e, h))
        return scores

    def sentence_loss(cg, _model, sent):
        loss = None
        for s, (_, tag) in zip(token_scores(cg, [w for w, _ in sent]), sent):
            step = ops.pickneglogsoftmax(s, tag2i[tag])
            loss = step if loss is None else ops.add(loss, step)
        return loss

    plan = ParallelPlan(cfg.workers, sentence_loss, parent_cg=run.cg)
    n_train_tokens = sum(len(s) for s in train)

    run.mark_started()
    for epoch in range(1, cfg.epochs + 1):
        tick = time.perf_counter()
        (loss_sum,) = train_parallel(plan, model, trainer, train, 1)
        train_secs = max(time.perf_counter() - tick, 1e-9)

        correct = total = 0
        rare_correct = rare_total = 0
        for sent in dev:
            run.cg.renew()
            for s, (word, tag) in zip(token_scores(run.cg, [w for w, _ in sent]), sent):
                pred = int(np.argmax(run.cg.value(s).data))
                hit = tag in tag2i and pred == tag2i[tag]
                correct += hit
                total += 1
                if not vocab.known(word):
                    rare_correct += hit
                    rare_total += 1
        run.record(epoch, loss_sum / len(train), correct / total, n_train_tokens / train_secs)
        if rare_total:
            run.report.extra["rare_accuracy"] = rare_correct / rare_total
            run.report.extra["rare_total"] = rare_total
    return run.finish()


# ---------------------------------------------------------------------------
# treelstm: tree-structured composition with a root-label loss
# ---------------------------------------------------------------------------


def run_treelstm(cfg: TaskConfig, out=None) -> MetricsReport:
    run = _Run(cfg, out)
    train = parse_trees(cfg.train)
    dev = parse_trees(cfg.dev)

    def leaves(tree: TreeNode):
        if tree.is_leaf():
            yield tree.token
        for child in tree.children:
            yield from leaves(child)

    vocab = Vocab.build((tok for tree in train for tok in leaves(tree)), cfg.unk_threshold)
    n_labels = max(t.label for t in train) + 1

    model = run.model
    encoder = TreeLSTM(model, vocab.t2i, cfg.embed, cfg.hidden, "enc")
    U = model.add_parameters((n_labels, cfg.hidden), "U")
    bu = model.add_parameters((n_labels,), "bu")
    if cfg.load:
        model.load(cfg.load)
    trainer = run.trainer()
    cg = run.cg

    def root_scores(tree: TreeNode):
        h, _ = encoder.encode(cg, tree)
        return ops.affine(ops.parameter(cg, bu), ops.parameter(cg, U), h)

    def accuracy(trees) -> float:
        hits = 0
        for tree in trees:
            cg.renew()
            hits += int(np.argmax(cg.value(root_scores(tree)).data)) == tree.label
        return hits / len(trees)

    run.mark_started()
    for epoch in range(1, cfg.epochs + 1):
        tick = time.perf_counter()
        loss_sum = 0.0
        for tree in train:
            cg.renew()
            loss = ops.pickneglogsoftmax(root_scores(tree), tree.label)
            cg.backward(loss)
            loss_sum += float(cg.value(loss).data[0])
            trainer.update()
        train_secs = max(time.perf_counter() - tick, 1e-9)
        run.record(epoch, loss_sum / len(train), accuracy(dev), len(train) / train_secs)
        run.report.extra["train_accuracy"] = accuracy(train)
    return run.finish()


RUNNERS = {
    "rnnlm": run_rnnlm,
    "tagger": run_tagger,
    "tagger-char": run_tagger,
    "treelstm": run_treelstm,
    "pairclass": run_pairclass,
    "earlystop": run_earlystop,
}
