"""Elementary-operation catalog: shape rules, batched forwards, backward rules.

Each op kind registers a shape rule (run at node-construction time), a forward
that writes into an arena-backed output tensor, and a backward that accumulates
the contribution for one input. Operands broadcast over the batch dimension
only: batch counts must be equal or one of them 1; a batch-1 operand is
logically replicated and its gradient is the sum over the batch.

New kinds register through `register()` with the same three pieces; that is
the extension contract (`pick_range` below is added that way for the stacked
gate layouts the recurrent builders use).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    BadShape,
    EmptyBatch,
    EmptyList,
    IndexOutOfBounds,
    LengthMismatch,
    ShapeError,
    StaleExpression,
)
from .tensor import Shape, Tensor


@dataclass(frozen=True)
class OpDef:
    name: str
    shape: Callable  # (aux, in_shapes) -> Shape
    forward: Optional[Callable] = None  # (out, ins, aux) -> None
    backward: Optional[Callable] = None  # (i, in_grad, in_vals, out_val, out_grad, aux) -> None
    alias: Optional[Callable] = None  # (aux) -> Tensor; node value aliases persistent storage
    flush: Optional[Callable] = None  # (aux, grad, sink) -> None; leaf pushes grad to the sink


REGISTRY: dict[str, OpDef] = {}


def register(op: OpDef) -> OpDef:
    REGISTRY[op.name] = op
    return op


def get_op(kind: str) -> OpDef:
    return REGISTRY[kind]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _broadcast_batch(kind: str, shapes) -> int:
    batch = 1
    for s in shapes:
        if s.batch != 1 and batch != 1 and s.batch != batch:
            raise ShapeError(f"{kind}: incompatible batch counts {[x.batch for x in shapes]}")
        batch = max(batch, s.batch)
    return batch


def _acc(in_grad: Tensor, contrib: np.ndarray) -> None:
    """Accumulate a (B, n) contribution into a possibly batch-1 gradient slot."""
    g2 = in_grad.elems()
    if g2.shape[0] == contrib.shape[0]:
        g2 += contrib
    else:
        g2 += contrib.sum(axis=0, keepdims=True)


def _sigmoid(x: np.ndarray, out: np.ndarray) -> None:
    np.clip(x, -60.0, 60.0, out=out)  # exp() overflow guard; sigmoid saturates far earlier
    np.negative(out, out=out)
    np.exp(out, out=out)
    out += 1.0
    np.reciprocal(out, out=out)


def _stable_softmax_rows(x2: np.ndarray) -> np.ndarray:
    m = x2.max(axis=1, keepdims=True)
    e = np.exp(x2 - m)
    e /= e.sum(axis=1, keepdims=True)
    return e


# ---------------------------------------------------------------------------
# leaves: input / parameter / lookup / lookup_batch
# ---------------------------------------------------------------------------


def _input_shape(aux, in_shapes):
    return aux.shape


def _input_fwd(out, ins, aux):
    out.data[:] = aux.data  # copy (and cast) the payload into the forward pool


register(OpDef("input", _input_shape, _input_fwd))


def _parameter_shape(aux, in_shapes):
    return aux.values.shape


register(
    OpDef(
        "parameter",
        _parameter_shape,
        alias=lambda p: p.values,
        flush=lambda p, grad, sink: sink.add_param_grad(p, grad.data),
    )
)


def _lookup_shape(aux, in_shapes):
    lp, idx = aux
    if not 0 <= idx < lp.rows:
        raise IndexOutOfBounds(f"lookup row {idx} out of range [0, {lp.rows})")
    return Shape((lp.dim,))


def _lookup_fwd(out, ins, aux):
    lp, idx = aux
    out.data[:] = lp.values[idx]


register(
    OpDef(
        "lookup",
        _lookup_shape,
        _lookup_fwd,
        flush=lambda aux, grad, sink: sink.add_lookup_row_grad(aux[0], aux[1], grad.data),
    )
)


def _lookup_batch_shape(aux, in_shapes):
    lp, ids = aux
    if len(ids) == 0:
        raise EmptyBatch("lookup_batch needs at least one id")
    for idx in ids:
        if not 0 <= idx < lp.rows:
            raise IndexOutOfBounds(f"lookup row {idx} out of range [0, {lp.rows})")
    return Shape((lp.dim,), batch=len(ids))


def _lookup_batch_fwd(out, ins, aux):
    lp, ids = aux
    out.elems()[:] = lp.values[list(ids)]


register(
    OpDef(
        "lookup_batch",
        _lookup_batch_shape,
        _lookup_batch_fwd,
        flush=lambda aux, grad, sink: sink.add_lookup_rows_grad(aux[0], aux[1], grad.elems()),
    )
)


# ---------------------------------------------------------------------------
# elementwise with batch broadcasting
# ---------------------------------------------------------------------------


def _elemwise_pair_shape(kind):
    def rule(aux, in_shapes):
        a, b = in_shapes
        if a.dims != b.dims:
            raise ShapeError(f"{kind}: dims differ {a} vs {b}")
        return Shape(a.dims, _broadcast_batch(kind, in_shapes))

    return rule


def _add_fwd(out, ins, aux):
    np.add(ins[0].elems(), ins[1].elems(), out=out.elems())


def _add_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    _acc(in_grad, out_grad.elems())


register(OpDef("add", _elemwise_pair_shape("add"), _add_fwd, _add_bwd))


def _cmult_fwd(out, ins, aux):
    np.multiply(ins[0].elems(), ins[1].elems(), out=out.elems())


def _cmult_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    other = in_vals[1 - i].elems()
    _acc(in_grad, out_grad.elems() * other)


register(OpDef("cmult", _elemwise_pair_shape("cmult"), _cmult_fwd, _cmult_bwd))


def _same_shape(aux, in_shapes):
    return in_shapes[0]


def _scalar_mul_fwd(out, ins, aux):
    np.multiply(ins[0].data, aux, out=out.data)


def _scalar_mul_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    in_grad.data += aux * out_grad.data


register(OpDef("scalar_mul", _same_shape, _scalar_mul_fwd, _scalar_mul_bwd))


def _tanh_fwd(out, ins, aux):
    np.tanh(ins[0].data, out=out.data)


def _tanh_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    y = out_val.data
    in_grad.data += (1.0 - y * y) * out_grad.data


register(OpDef("tanh", _same_shape, _tanh_fwd, _tanh_bwd))


def _logistic_fwd(out, ins, aux):
    _sigmoid(ins[0].data, out.data)


def _logistic_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    y = out_val.data
    in_grad.data += y * (1.0 - y) * out_grad.data


register(OpDef("logistic", _same_shape, _logistic_fwd, _logistic_bwd))


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------


def _matmul_shape(aux, in_shapes):
    a, x = in_shapes
    if len(a.dims) != 2:
        raise ShapeError(f"matmul: left operand must be a matrix, got {a}")
    m, n = a.dims
    if x.dims[0] != n:
        raise ShapeError(f"matmul: inner dims {n} vs {x.dims[0]} ({a} @ {x})")
    if len(x.dims) == 1:
        dims = (m,)
    elif len(x.dims) == 2:
        dims = (m, x.dims[1])
    else:
        raise ShapeError(f"matmul: right operand must be vector or matrix, got {x}")
    return Shape(dims, _broadcast_batch("matmul", in_shapes))


def _matmul_fwd(out, ins, aux):
    a, x = ins
    if a.shape.batch == 1 and len(x.shape.dims) == 1:
        # single BLAS call: (B,n) @ (n,m) -> (B,m)
        np.matmul(x.elems(), a.elem(0).T, out=out.elems())
        return
    ba, bx = a.shape.batch, x.shape.batch
    for j in range(out.shape.batch):
        np.matmul(a.elem(j if ba > 1 else 0), x.elem(j if bx > 1 else 0), out=out.elem(j))


def _matmul_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    a, x = in_vals
    ba, bx = a.shape.batch, x.shape.batch
    vector = len(x.shape.dims) == 1
    if i == 0:
        if ba == 1 and vector:
            if bx == out_grad.shape.batch:
                in_grad.elem(0)[...] += out_grad.elems().T @ x.elems()
            else:  # replicated batch-1 vector: sum the upstream first
                in_grad.elem(0)[...] += np.outer(out_grad.elems().sum(axis=0), x.elem(0))
            return
        for j in range(out_grad.shape.batch):
            ga = in_grad.elem(j if ba > 1 else 0)
            go = out_grad.elem(j)
            xv = x.elem(j if bx > 1 else 0)
            ga += np.outer(go, xv) if vector else go @ xv.T
    else:
        if ba == 1 and vector:
            _acc(in_grad, out_grad.elems() @ a.elem(0))
            return
        for j in range(out_grad.shape.batch):
            gx = in_grad.elem(j if bx > 1 else 0)
            gx += a.elem(j if ba > 1 else 0).T @ out_grad.elem(j)


register(OpDef("matmul", _matmul_shape, _matmul_fwd, _matmul_bwd))


def _affine_shape(aux, in_shapes):
    if len(in_shapes) < 3 or len(in_shapes) % 2 == 0:
        raise ShapeError(f"affine takes b, W1, x1[, W2, x2, ...]; got {len(in_shapes)} operands")
    b = in_shapes[0]
    if len(b.dims) != 1:
        raise ShapeError(f"affine: bias must be a vector, got {b}")
    m = b.dims[0]
    for k in range(1, len(in_shapes), 2):
        w, x = in_shapes[k], in_shapes[k + 1]
        if len(w.dims) != 2 or len(x.dims) != 1:
            raise ShapeError(f"affine: term {k // 2} needs matrix*vector, got {w} @ {x}")
        if w.dims != (m, x.dims[0]):
            raise ShapeError(f"affine: term {k // 2} shape chain broken: {w} @ {x} vs bias dim {m}")
    return Shape((m,), _broadcast_batch("affine", in_shapes))


def _affine_fwd(out, ins, aux):
    out2 = out.elems()
    np.copyto(out2, ins[0].elems())
    for k in range(1, len(ins), 2):
        w, x = ins[k], ins[k + 1]
        if w.shape.batch == 1:
            out2 += x.elems() @ w.elem(0).T
        else:
            for j in range(out.shape.batch):
                out.elem(j)[...] += w.elem(j) @ x.elem(j if x.shape.batch > 1 else 0)


def _affine_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    if i == 0:
        _acc(in_grad, out_grad.elems())
        return
    k = ((i - 1) // 2) * 2 + 1
    w, x = in_vals[k], in_vals[k + 1]
    if i == k:  # gradient of the matrix
        if w.shape.batch == 1:
            if x.shape.batch == out_grad.shape.batch:
                in_grad.elem(0)[...] += out_grad.elems().T @ x.elems()
            else:  # replicated batch-1 vector: sum the upstream first
                in_grad.elem(0)[...] += np.outer(out_grad.elems().sum(axis=0), x.elem(0))
        else:
            for j in range(out_grad.shape.batch):
                gw = in_grad.elem(j)
                gw += np.outer(out_grad.elem(j), x.elem(j if x.shape.batch > 1 else 0))
    else:  # gradient of the vector operand
        if w.shape.batch == 1:
            _acc(in_grad, out_grad.elems() @ w.elem(0))
        else:
            for j in range(out_grad.shape.batch):
                gx = in_grad.elem(j if x.shape.batch > 1 else 0)
                gx += w.elem(j).T @ out_grad.elem(j)


register(OpDef("affine", _affine_shape, _affine_fwd, _affine_bwd))


# ---------------------------------------------------------------------------
# concatenation and range picking
# ---------------------------------------------------------------------------


def _concatenate_shape(aux, in_shapes):
    if not in_shapes:
        raise EmptyList("concatenate of zero parts")
    batch = in_shapes[0].batch
    total = 0
    for s in in_shapes:
        if len(s.dims) != 1:
            raise ShapeError(f"concatenate parts must be vectors, got {s}")
        if s.batch != batch:
            raise ShapeError(f"concatenate parts must share a batch count, got {batch} vs {s.batch}")
        total += s.dims[0]
    return Shape((total,), batch)


def _concatenate_fwd(out, ins, aux):
    out2 = out.elems()
    off = 0
    for part in ins:
        n = part.shape.dims[0]
        out2[:, off : off + n] = part.elems()
        off += n


def _concatenate_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    off = sum(v.shape.dims[0] for v in in_vals[:i])
    n = in_vals[i].shape.dims[0]
    g2 = in_grad.elems()
    g2 += out_grad.elems()[:, off : off + n]


register(OpDef("concatenate", _concatenate_shape, _concatenate_fwd, _concatenate_bwd))


def _pick_range_shape(aux, in_shapes):
    lo, hi = aux
    (s,) = in_shapes
    if len(s.dims) != 1:
        raise ShapeError(f"pick_range needs a vector, got {s}")
    if not 0 <= lo < hi <= s.dims[0]:
        raise ShapeError(f"pick_range [{lo}, {hi}) out of range for {s}")
    return Shape((hi - lo,), s.batch)


def _pick_range_fwd(out, ins, aux):
    lo, hi = aux
    out.elems()[:] = ins[0].elems()[:, lo:hi]


def _pick_range_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    lo, hi = aux
    in_grad.elems()[:, lo:hi] += out_grad.elems()


register(OpDef("pick_range", _pick_range_shape, _pick_range_fwd, _pick_range_bwd))


# ---------------------------------------------------------------------------
# softmax family and batch reduction
# ---------------------------------------------------------------------------


def _vector_shape(kind):
    def rule(aux, in_shapes):
        (s,) = in_shapes
        if len(s.dims) != 1:
            raise ShapeError(f"{kind} needs a vector per batch element, got {s}")
        return s

    return rule


def _softmax_fwd(out, ins, aux):
    x2 = ins[0].elems()
    o2 = out.elems()
    m = x2.max(axis=1, keepdims=True)
    np.subtract(x2, m, out=o2)
    np.exp(o2, out=o2)
    o2 /= o2.sum(axis=1, keepdims=True)


def _softmax_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    y2 = out_val.elems()
    g2 = out_grad.elems()
    dot = (g2 * y2).sum(axis=1, keepdims=True)
    acc = in_grad.elems()
    acc += y2 * (g2 - dot)


register(OpDef("softmax", _vector_shape("softmax"), _softmax_fwd, _softmax_bwd))


def _pnls_shape(aux, in_shapes):
    (s,) = in_shapes
    if len(s.dims) != 1:
        raise ShapeError(f"pickneglogsoftmax needs a vector, got {s}")
    if s.batch != 1:
        raise BadShape("pickneglogsoftmax is unbatched; use pickneglogsoftmax_batch")
    if not 0 <= aux < s.dims[0]:
        raise IndexOutOfBounds(f"label {aux} out of range [0, {s.dims[0]})")
    return Shape((1,))


def _pnls_fwd(out, ins, aux):
    x = ins[0].data
    m = x.max()
    out.data[0] = m + np.log(np.exp(x - m).sum()) - x[aux]


def _pnls_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    p = _stable_softmax_rows(in_vals[0].elems())[0]
    p[aux] -= 1.0
    in_grad.data += out_grad.data[0] * p


register(OpDef("pickneglogsoftmax", _pnls_shape, _pnls_fwd, _pnls_bwd))


def _pnls_batch_shape(aux, in_shapes):
    (s,) = in_shapes
    if len(s.dims) != 1:
        raise ShapeError(f"pickneglogsoftmax_batch needs a vector per batch element, got {s}")
    if len(aux) != s.batch:
        raise LengthMismatch(f"{len(aux)} labels for batch count {s.batch}")
    for label in aux:
        if not 0 <= label < s.dims[0]:
            raise IndexOutOfBounds(f"label {label} out of range [0, {s.dims[0]})")
    return Shape((1,), s.batch)


def _pnls_batch_fwd(out, ins, aux):
    x2 = ins[0].elems()
    m = x2.max(axis=1)
    lse = m + np.log(np.exp(x2 - m[:, None]).sum(axis=1))
    out.data[:] = lse - x2[np.arange(len(aux)), list(aux)]


def _pnls_batch_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    p2 = _stable_softmax_rows(in_vals[0].elems())
    p2[np.arange(len(aux)), list(aux)] -= 1.0
    g2 = in_grad.elems()
    g2 += out_grad.data[:, None] * p2


register(OpDef("pickneglogsoftmax_batch", _pnls_batch_shape, _pnls_batch_fwd, _pnls_batch_bwd))


def _sum_batches_shape(aux, in_shapes):
    return Shape(in_shapes[0].dims, 1)


def _sum_batches_fwd(out, ins, aux):
    np.sum(ins[0].elems(), axis=0, out=out.data)


def _sum_batches_bwd(i, in_grad, in_vals, out_val, out_grad, aux):
    g2 = in_grad.elems()
    g2 += out_grad.elems()  # replicate across the batch


register(OpDef("sum_batches", _sum_batches_shape, _sum_batches_fwd, _sum_batches_bwd))


# ---------------------------------------------------------------------------
# expression-building surface
# ---------------------------------------------------------------------------


def input(cg, t: Tensor):  # noqa: A001 - catalog name
    return cg.add_node("input", (), t)


def parameter(cg, p):
    return cg.add_node("parameter", (), p)


def lookup(cg, lp, index: int):
    return cg.add_node("lookup", (), (lp, int(index)))


def lookup_batch(cg, lp, ids):
    return cg.add_node("lookup_batch", (), (lp, tuple(int(i) for i in ids)))


def _common_graph(exprs):
    cg = exprs[0].graph
    for e in exprs[1:]:
        if e.graph is not cg:
            raise StaleExpression("expressions belong to different graphs")
    return cg


def add(a, b):
    return _common_graph((a, b)).add_node("add", (a, b))


def cmult(a, b):
    return _common_graph((a, b)).add_node("cmult", (a, b))


def scalar_mul(e, c: float):
    return e.graph.add_node("scalar_mul", (e,), float(c))


def matmul(a, x):
    return _common_graph((a, x)).add_node("matmul", (a, x))


def affine(*exprs):
    return _common_graph(exprs).add_node("affine", exprs)


def concatenate(parts):
    parts = tuple(parts)
    if not parts:
        raise EmptyList("concatenate of zero parts")
    return _common_graph(parts).add_node("concatenate", parts)


def tanh(e):
    return e.graph.add_node("tanh", (e,))


def logistic(e):
    return e.graph.add_node("logistic", (e,))


def softmax(e):
    return e.graph.add_node("softmax", (e,))


def pickneglogsoftmax(e, label: int):
    return e.graph.add_node("pickneglogsoftmax", (e,), int(label))


def pickneglogsoftmax_batch(e, labels):
    return e.graph.add_node("pickneglogsoftmax_batch", (e,), tuple(int(x) for x in labels))


def sum_batches(e):
    return e.graph.add_node("sum_batches", (e,))


def pick_range(e, lo: int, hi: int):
    return e.graph.add_node("pick_range", (e,), (int(lo), int(hi)))
