"""Higher-level constructs layered on the op catalog: recurrent builders
(simple/LSTM/GRU) with stateful and whole-sequence interfaces, tree encoders,
and a class-factored softmax for large output vocabularies.

Builders register their parameters in the Model at construction and emit
sub-graphs when used; states form a tree, so branching continuations from one
state reuses the shared prefix without recomputation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ops
from .errors import BadShape, EmptyList, FileError, FormatError, UnknownWord
from .graph import ComputationGraph, Expression
from .params import Model
from .tensor import Shape, Tensor

GATE_COUNT = {"simple": 1, "lstm": 4, "gru": 3}


def _prefix(model: Model, name: str | None, kind: str) -> str:
    return name if name is not None else f"{kind}{len(model.parameters) + len(model.lookups)}"


class RNNBuilder:
    """Layered recurrent network; cell kind is simple, lstm, or gru.

    LSTM gate order is i, f, o, g with the forget-gate bias zeroed at init;
    GRU gate order is z, r, h-tilde. Layer l > 1 consumes layer l-1's output.
    """

    def __init__(
        self,
        model: Model,
        layers: int,
        input_dim: int,
        hidden_dim: int,
        cell: str = "lstm",
        name: str | None = None,
    ):
        if cell not in GATE_COUNT:
            raise BadShape(f"unknown cell kind {cell!r}")
        if layers < 1:
            raise BadShape(f"layers must be >= 1, got {layers}")
        self.cell = cell
        self.layers = layers
        self.input_dim = input_dim
        self.hidden_dim = hidden_dim
        prefix = _prefix(model, name, cell)
        rows = GATE_COUNT[cell] * hidden_dim
        self.params = []
        for layer in range(layers):
            in_dim = input_dim if layer == 0 else hidden_dim
            wx = model.add_parameters((rows, in_dim), f"{prefix}.l{layer}.Wx")
            wh = model.add_parameters((rows, hidden_dim), f"{prefix}.l{layer}.Wh")
            b = model.add_parameters((rows,), f"{prefix}.l{layer}.b")
            if cell == "lstm":
                b.values.data[hidden_dim : 2 * hidden_dim] = 0.0  # forget gate starts neutral
            self.params.append((wx, wh, b))
        self._zero = Tensor(Shape((hidden_dim,)), np.zeros(hidden_dim, dtype=model.dtype))
        self._ones = Tensor(Shape((hidden_dim,)), np.ones(hidden_dim, dtype=model.dtype))
        self._pexprs: dict = {}  # per-graph cache; workers each use their own graph

    def _graph_params(self, cg: ComputationGraph):
        cached = self._pexprs.get(id(cg))
        if cached is None or cached[0] != cg.generation:
            exprs = [tuple(ops.parameter(cg, p) for p in layer_params) for layer_params in self.params]
            self._pexprs[id(cg)] = (cg.generation, exprs)
            return exprs
        return cached[1]

    def initial_state(self, cg: ComputationGraph) -> "RNNState":
        zeros = [ops.input(cg, self._zero) for _ in range(self.layers)]
        cs = [ops.input(cg, self._zero) for _ in range(self.layers)] if self.cell == "lstm" else None
        return RNNState(self, cg, zeros, cs, None)

    def _step(self, state: "RNNState", x: Expression) -> "RNNState":
        cg = state.cg
        h_dim = self.hidden_dim
        pexprs = self._graph_params(cg)
        hs, cs = [], []
        inp = x
        for layer in range(self.layers):
            wx, wh, b = pexprs[layer]
            h = state.hs[layer]
            if self.cell == "simple":
                nh = ops.tanh(ops.affine(b, wx, inp, wh, h))
            elif self.cell == "lstm":
                c = state.cs[layer]
                gates = ops.affine(b, wx, inp, wh, h)
                i_g = ops.logistic(ops.pick_range(gates, 0, h_dim))
                f_g = ops.logistic(ops.pick_range(gates, h_dim, 2 * h_dim))
                o_g = ops.logistic(ops.pick_range(gates, 2 * h_dim, 3 * h_dim))
                g_g = ops.tanh(ops.pick_range(gates, 3 * h_dim, 4 * h_dim))
                nc = ops.add(ops.cmult(f_g, c), ops.cmult(i_g, g_g))
                nh = ops.cmult(o_g, ops.tanh(nc))
                cs.append(nc)
            else:  # gru
                zr = ops.affine(b, wx, inp, wh, h)
                z_g = ops.logistic(ops.pick_range(zr, 0, h_dim))
                r_g = ops.logistic(ops.pick_range(zr, h_dim, 2 * h_dim))
                cand_x = ops.pick_range(ops.affine(b, wx, inp), 2 * h_dim, 3 * h_dim)
                cand_h = ops.pick_range(ops.matmul(wh, ops.cmult(r_g, h)), 2 * h_dim, 3 * h_dim)
                cand = ops.tanh(ops.add(cand_x, cand_h))
                keep = ops.add(ops.input(cg, self._ones), ops.scalar_mul(z_g, -1.0))
                nh = ops.add(ops.cmult(keep, h), ops.cmult(z_g, cand))
            hs.append(nh)
            inp = nh
        return RNNState(self, cg, hs, cs if self.cell == "lstm" else None, state)


class RNNState:
    """Immutable per-step state; keeping old states enables beam-style branching."""

    __slots__ = ("builder", "cg", "hs", "cs", "prev")

    def __init__(self, builder, cg, hs, cs, prev):
        self.builder = builder
        self.cg = cg
        self.hs = hs
        self.cs = cs
        self.prev = prev

    def add_input(self, x: Expression) -> "RNNState":
        return self.builder._step(self, x)

    def output(self) -> Expression:
        return self.hs[-1]

    def transduce(self, xs) -> list[Expression]:
        xs = list(xs)
        if not xs:
            raise EmptyList("transduce needs at least one input")
        outputs = []
        state = self
        for x in xs:
            state = state.add_input(x)
            outputs.append(state.output())
        return outputs


# ---------------------------------------------------------------------------
# trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    """leaf(token) | unary(child) | binary(left, right), optional node label."""

    token: str | None = None
    children: tuple = ()
    label: int | None = None

    def __post_init__(self):
        if self.token is not None and self.children:
            raise BadShape("a tree node is a leaf or an internal node, not both")
        if self.token is None and not self.children:
            raise BadShape("internal tree node needs children")
        if len(self.children) > 2:
            raise BadShape("tree nodes are unary or binary")

    @staticmethod
    def leaf(token: str, label: int | None = None) -> "TreeNode":
        return TreeNode(token=token, label=label)

    @staticmethod
    def unary(child: "TreeNode", label: int | None = None) -> "TreeNode":
        return TreeNode(children=(child,), label=label)

    @staticmethod
    def binary(left: "TreeNode", right: "TreeNode", label: int | None = None) -> "TreeNode":
        return TreeNode(children=(left, right), label=label)

    def is_leaf(self) -> bool:
        return self.token is not None


class TreeRNN:
    """Recursive encoder: leaf -> embedding row, unary -> child, binary ->
    tanh(W [left; right]). Unknown tokens map to row 0."""

    def __init__(self, model: Model, word_vocab: dict, hidden_dim: int, name: str | None = None):
        prefix = _prefix(model, name, "treernn")
        self.w2i = dict(word_vocab)
        self.dim = hidden_dim
        self.W = model.add_parameters((hidden_dim, 2 * hidden_dim), f"{prefix}.W")
        self.E = model.add_lookup_parameters(max(1, len(self.w2i)), hidden_dim, f"{prefix}.E")
        self._wexprs: dict = {}

    def _w(self, cg: ComputationGraph) -> Expression:
        cached = self._wexprs.get(id(cg))
        if cached is None or cached[0] != cg.generation:
            expr = ops.parameter(cg, self.W)
            self._wexprs[id(cg)] = (cg.generation, expr)
            return expr
        return cached[1]

    def encode(self, cg: ComputationGraph, tree: TreeNode) -> Expression:
        if tree.is_leaf():
            return ops.lookup(cg, self.E, self.w2i.get(tree.token, 0))
        if len(tree.children) == 1:  # unary node, skip
            return self.encode(cg, tree.children[0])
        e1 = self.encode(cg, tree.children[0])
        e2 = self.encode(cg, tree.children[1])
        return ops.tanh(ops.matmul(self._w(cg), ops.concatenate([e1, e2])))


class TreeLSTM:
    """Binary N-ary tree LSTM with per-child forget gates.

    Gate stack order is i, f1, f2, o, g. Leaves consume the token embedding
    with zero children (so only i, o, g matter there); unary nodes pass (h, c)
    through unchanged.
    """

    def __init__(
        self,
        model: Model,
        word_vocab: dict,
        input_dim: int,
        hidden_dim: int,
        name: str | None = None,
    ):
        prefix = _prefix(model, name, "treelstm")
        self.w2i = dict(word_vocab)
        self.input_dim = input_dim
        self.hidden_dim = hidden_dim
        rows = 5 * hidden_dim
        self.Wx = model.add_parameters((rows, input_dim), f"{prefix}.Wx")
        self.U1 = model.add_parameters((rows, hidden_dim), f"{prefix}.U1")
        self.U2 = model.add_parameters((rows, hidden_dim), f"{prefix}.U2")
        self.b = model.add_parameters((rows,), f"{prefix}.b")
        self.b.values.data[hidden_dim : 3 * hidden_dim] = 0.0  # both forget gates start neutral
        self.E = model.add_lookup_parameters(max(1, len(self.w2i)), input_dim, f"{prefix}.E")
        self._pexprs: dict = {}

    def _graph_params(self, cg: ComputationGraph):
        cached = self._pexprs.get(id(cg))
        if cached is None or cached[0] != cg.generation:
            exprs = tuple(ops.parameter(cg, p) for p in (self.Wx, self.U1, self.U2, self.b))
            self._pexprs[id(cg)] = (cg.generation, exprs)
            return exprs
        return cached[1]

    def _compose(self, gates: Expression, cell_terms: list[Expression]) -> tuple[Expression, Expression]:
        h_dim = self.hidden_dim
        i_g = ops.logistic(ops.pick_range(gates, 0, h_dim))
        o_g = ops.logistic(ops.pick_range(gates, 3 * h_dim, 4 * h_dim))
        g_g = ops.tanh(ops.pick_range(gates, 4 * h_dim, 5 * h_dim))
        c = ops.cmult(i_g, g_g)
        for term in cell_terms:
            c = ops.add(c, term)
        return ops.cmult(o_g, ops.tanh(c)), c

    def encode(self, cg: ComputationGraph, tree: TreeNode) -> tuple[Expression, Expression]:
        wx, u1, u2, b = self._graph_params(cg)
        h_dim = self.hidden_dim
        if tree.is_leaf():
            x = ops.lookup(cg, self.E, self.w2i.get(tree.token, 0))
            h, c = self._compose(ops.affine(b, wx, x), [])
            return h, c
        if len(tree.children) == 1:
            return self.encode(cg, tree.children[0])
        h1, c1 = self.encode(cg, tree.children[0])
        h2, c2 = self.encode(cg, tree.children[1])
        gates = ops.affine(b, u1, h1, u2, h2)
        f1 = ops.logistic(ops.pick_range(gates, h_dim, 2 * h_dim))
        f2 = ops.logistic(ops.pick_range(gates, 2 * h_dim, 3 * h_dim))
        return self._compose(gates, [ops.cmult(f1, c1), ops.cmult(f2, c2)])


# ---------------------------------------------------------------------------
# class-factored softmax
# ---------------------------------------------------------------------------


class ClassFactoredSoftmax:
    """Two-level softmax p(w) = p(class | h) * p(w | class, h) over a
    vocabulary partition; loss is the sum of two picked negative logs."""

    def __init__(self, model: Model, hidden_dim: int, word_to_class: dict, name: str | None = None):
        if not word_to_class:
            raise EmptyList("class-factored softmax needs a nonempty word->class map")
        prefix = _prefix(model, name, "cfsm")
        self.hidden_dim = hidden_dim
        self.words = list(word_to_class)
        class_ids = sorted(set(word_to_class.values()))
        self._dense_class = {c: i for i, c in enumerate(class_ids)}
        self.n_classes = len(class_ids)
        self.members: list[list] = [[] for _ in range(self.n_classes)]
        self.word_slot: dict = {}
        for word, raw_class in word_to_class.items():
            c = self._dense_class[raw_class]
            self.word_slot[word] = (c, len(self.members[c]))
            self.members[c].append(word)
        self.Wc = model.add_parameters((self.n_classes, hidden_dim), f"{prefix}.Wc")
        self.bc = model.add_parameters((self.n_classes,), f"{prefix}.bc")
        self.Ww = [
            model.add_parameters((len(members), hidden_dim), f"{prefix}.Ww{c}")
            for c, members in enumerate(self.members)
        ]
        self.bw = [
            model.add_parameters((len(members),), f"{prefix}.bw{c}")
            for c, members in enumerate(self.members)
        ]
        self._score_cache: dict = {}

    def _scores(self, cg: ComputationGraph, h: Expression):
        key = (cg.generation, h.index)
        cached = self._score_cache.get(id(cg))
        if cached is None or cached[0] != key:
            class_scores = ops.affine(ops.parameter(cg, self.bc), ops.parameter(cg, self.Wc), h)
            word_scores = [
                ops.affine(ops.parameter(cg, self.bw[c]), ops.parameter(cg, self.Ww[c]), h)
                for c in range(self.n_classes)
            ]
            self._score_cache[id(cg)] = (key, (class_scores, word_scores))
            return class_scores, word_scores
        return cached[1]

    def neg_log_softmax(self, cg: ComputationGraph, h: Expression, word) -> Expression:
        if word not in self.word_slot:
            raise UnknownWord(f"word {word!r} is not in the class map")
        c, idx = self.word_slot[word]
        class_scores, word_scores = self._scores(cg, h)
        return ops.add(
            ops.pickneglogsoftmax(class_scores, c),
            ops.pickneglogsoftmax(word_scores[c], idx),
        )

    def log_distribution(self, cg: ComputationGraph, h: Expression) -> Expression:
        """log p(w) for every word, ordered like `self.words`."""
        class_scores, word_scores = self._scores(cg, h)
        parts = []
        for word in self.words:
            c, idx = self.word_slot[word]
            nll = ops.add(
                ops.pickneglogsoftmax(class_scores, c),
                ops.pickneglogsoftmax(word_scores[c], idx),
            )
            parts.append(ops.scalar_mul(nll, -1.0))
        return ops.concatenate(parts)

    def sample(self, cg: ComputationGraph, h: Expression, rng: np.random.Generator):
        """Draw a class from p(class | h), then a word within it."""
        class_scores, word_scores = self._scores(cg, h)
        c = int(rng.choice(self.n_classes, p=_softmax_1d(cg.value(class_scores).data)))
        probs = _softmax_1d(cg.value(word_scores[c]).data)
        return self.members[c][int(rng.choice(len(probs), p=probs))]

    @classmethod
    def from_class_map_file(
        cls, model: Model, hidden_dim: int, path: str, name: str | None = None
    ) -> "ClassFactoredSoftmax":
        """Load a `word<SPACE>class_id` text file."""
        mapping = {}
        try:
            fh = open(path, "r", encoding="utf-8")
        except OSError as exc:
            raise FileError(f"cannot read {path}: {exc}") from exc
        with fh:
            for ln, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise FormatError(f"{path}:{ln}: expected 'word class_id', got {line!r}")
                try:
                    mapping[parts[0]] = int(parts[1])
                except ValueError as exc:
                    raise FormatError(f"{path}:{ln}: class id {parts[1]!r} is not an integer") from exc
        return cls(model, hidden_dim, mapping, name=name)


def _softmax_1d(x: np.ndarray) -> np.ndarray:
    e = np.exp(x.astype(np.float64) - x.max())
    return e / e.sum()
