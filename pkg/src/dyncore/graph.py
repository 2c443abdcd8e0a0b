"""Computation graph engine: append-only nodes, lazy incremental forward,
reverse traversal with gradient accumulation into persistent storage.

Construction order is the topological order; `value()` evaluates only nodes
past the watermark, so interleaving construction with evaluation (dynamic flow
control) never recomputes. One live graph per engine instance; `renew()`
starts the next one by bumping the generation, which invalidates every
outstanding Expression.
"""

from __future__ import annotations

import numpy as np

from .errors import NonScalarLoss, ShapeError, StaleExpression
from .ops import get_op
from .tensor import Shape, Tensor


class Expression:
    """Handle to a graph node; valid for one graph generation."""

    __slots__ = ("graph", "index", "generation")

    def __init__(self, graph: "ComputationGraph", index: int, generation: int):
        self.graph = graph
        self.index = index
        self.generation = generation

    @property
    def shape(self) -> Shape:
        self.graph.check_current(self)
        return self.graph.nodes[self.index].shape

    def __repr__(self) -> str:
        return f"Expression(node={self.index}, gen={self.generation})"


class Node:
    __slots__ = ("kind", "inputs", "shape", "aux", "value", "grad")

    def __init__(self, kind: str, inputs: tuple[int, ...], shape: Shape, aux):
        self.kind = kind
        self.inputs = inputs
        self.shape = shape
        self.aux = aux
        self.value: Tensor | None = None
        self.grad: Tensor | None = None


class ModelGradientSink:
    """Default backward target: the parameters' own persistent gradient cells."""

    def add_param_grad(self, p, flat: np.ndarray) -> None:
        p.gradient.data += flat

    def add_lookup_row_grad(self, lp, row: int, vec: np.ndarray) -> None:
        lp.gradient[row] += vec
        lp.touched.add(row)

    def add_lookup_rows_grad(self, lp, ids, rows: np.ndarray) -> None:
        np.add.at(lp.gradient, list(ids), rows)  # repeated ids accumulate
        lp.touched.update(ids)


DIRECT_SINK = ModelGradientSink()


class ComputationGraph:
    """The engine: owns the node list, the pools, and the evaluation state."""

    def __init__(self, pools):
        self.pools = pools
        self.dtype = pools.dtype
        self.nodes: list[Node] = []
        self.generation = 0
        self.watermark = -1
        self.forward_calls = 0  # instrumentation: node-forward executions, ever
        self.sink = DIRECT_SINK  # backward gradient target; workers install slot sets

    # -- lifecycle ---------------------------------------------------------

    def renew(self) -> None:
        self.nodes.clear()
        self.generation += 1
        self.watermark = -1
        self.pools.reset_transient()

    def check_current(self, e: Expression) -> None:
        if e.graph is not self or e.generation != self.generation:
            raise StaleExpression(
                f"expression from generation {e.generation} used in generation {self.generation}"
            )

    # -- construction ------------------------------------------------------

    def add_node(self, kind: str, inputs=(), aux=None) -> Expression:
        in_shapes = []
        indices = []
        for e in inputs:
            self.check_current(e)
            in_shapes.append(self.nodes[e.index].shape)
            indices.append(e.index)
        shape = get_op(kind).shape(aux, in_shapes)
        self.nodes.append(Node(kind, tuple(indices), shape, aux))
        return Expression(self, len(self.nodes) - 1, self.generation)

    # -- evaluation --------------------------------------------------------

    def _alloc(self, pool, shape: Shape) -> Tensor:
        nbytes = shape.size() * self.dtype.itemsize
        offset, _ = pool.allocate(nbytes)
        return Tensor(shape, pool.view(offset, nbytes, self.dtype))

    def _run_forward(self, upto: int) -> None:
        for idx in range(self.watermark + 1, upto + 1):
            node = self.nodes[idx]
            od = get_op(node.kind)
            if od.alias is not None:
                node.value = od.alias(node.aux)
            else:
                node.value = self._alloc(self.pools.forward, node.shape)
                od.forward(node.value, [self.nodes[i].value for i in node.inputs], node.aux)
            self.forward_calls += 1
        if upto > self.watermark:
            self.watermark = upto

    def forward_to(self, e: Expression) -> None:
        self.check_current(e)
        self._run_forward(e.index)

    def value(self, e: Expression) -> Tensor:
        self.check_current(e)
        self._run_forward(e.index)
        return self.nodes[e.index].value.copy()  # defensive: survives renew()

    # -- differentiation ---------------------------------------------------

    def backward(self, e: Expression) -> None:
        self.check_current(e)
        loss = self.nodes[e.index]
        if loss.shape.elem_size() != 1 or loss.shape.batch != 1:
            raise NonScalarLoss(f"backward needs a scalar, got {loss.shape}")
        self._run_forward(e.index)

        # fresh backward slots are zero by the arena contract (pool zeroed at
        # reset, regions disjoint between resets), so repeated backward calls
        # in one generation accumulate additively into the persistent storage
        for idx in range(e.index + 1):
            self.nodes[idx].grad = self._alloc(self.pools.backward, self.nodes[idx].shape)
        loss.grad.data[0] += 1.0

        sink = self.sink
        nodes = self.nodes
        for idx in range(e.index, -1, -1):
            node = nodes[idx]
            od = get_op(node.kind)
            if od.flush is not None:
                od.flush(node.aux, node.grad, sink)
            elif node.inputs:
                in_nodes = [nodes[i] for i in node.inputs]
                in_vals = [n.value for n in in_nodes]
                for i, src in enumerate(in_nodes):
                    od.backward(i, src.grad, in_vals, node.value, node.grad, node.aux)

    def gradient(self, e: Expression) -> Tensor:
        """Debug accessor for a node's last backward slot."""
        self.check_current(e)
        g = self.nodes[e.index].grad
        if g is None:
            raise ShapeError("no backward pass has populated this node yet")
        return g.copy()
