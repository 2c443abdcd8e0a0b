"""Scripting surface over the core engine.

One implicit global graph, renewed per example with `renew_cg()`; expressions
overload `*` and `+` and lookup tables support bracket indexing, so training
scripts read like plain host-language code. Every call here delegates to
exactly one core operation; no numeric logic lives in this layer (tensor
payloads are copied only at explicit value()/npvalue() export).
"""

from __future__ import annotations

import numpy as np

import dyncore as _core
from dyncore import ops as _ops

__all__ = [
    "AdagradTrainer",
    "AdamTrainer",
    "Expression",
    "LookupParameters",
    "Model",
    "MomentumSGDTrainer",
    "Parameters",
    "SimpleSGDTrainer",
    "concatenate",
    "init",
    "inputVector",
    "logistic",
    "lookup",
    "model",
    "parameter",
    "pickneglogsoftmax",
    "renew_cg",
    "softmax",
    "tanh",
    "vectorInput",
]

_CTX = {"mem": "64", "seed": 0, "pools": None, "cg": None}


def init(mem: str = "64", seed: int = 0) -> None:
    """Configure pool sizes and the model seed; resets the global context."""
    _CTX.update(mem=str(mem), seed=int(seed), pools=None, cg=None)


def _pools():
    if _CTX["pools"] is None:
        _CTX["pools"] = _core.poolset_from_mem_flag(_CTX["mem"])
    return _CTX["pools"]


def _cg() -> _core.ComputationGraph:
    if _CTX["cg"] is None:
        _CTX["cg"] = _core.ComputationGraph(_pools())
    return _CTX["cg"]


def renew_cg() -> None:
    _cg().renew()


class Expression:
    """Thin handle over a core expression; generation checks live in the core."""

    __slots__ = ("inner",)

    def __init__(self, inner):
        self.inner = inner

    def value(self):
        t = _cg().value(self.inner)
        if t.shape.size() == 1:
            return float(t.data[0])
        return t.data.copy()

    def npvalue(self) -> np.ndarray:
        t = _cg().value(self.inner)
        dims = t.shape.dims
        if len(dims) > 1:
            return np.array(t.elem(0)) if t.shape.batch == 1 else t.data.copy()
        return t.data.copy()

    def forward(self) -> None:
        _cg().forward_to(self.inner)

    def backward(self) -> None:
        _cg().backward(self.inner)

    def __add__(self, other):
        if isinstance(other, Expression):
            return Expression(_ops.add(self.inner, other.inner))
        if other == 0:  # lets sum() fold expressions
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, Expression):
            return Expression(_ops.matmul(self.inner, other.inner))
        return Expression(_ops.scalar_mul(self.inner, float(other)))

    def __rmul__(self, other):
        return Expression(_ops.scalar_mul(self.inner, float(other)))


class Parameters:
    """Persistent parameter handle; turn into an Expression with parameter()."""

    __slots__ = ("core",)

    def __init__(self, core):
        self.core = core


class LookupParameters:
    """Embedding table; bracket indexing emits a lookup into the live graph."""

    __slots__ = ("core",)

    def __init__(self, core):
        self.core = core

    def __getitem__(self, index: int) -> Expression:
        return Expression(_ops.lookup(_cg(), self.core, int(index)))


class Model:
    def __init__(self):
        self.core = _core.Model(_pools(), seed=_CTX["seed"])

    def add_parameters(self, dims) -> Parameters:
        return Parameters(self.core.add_parameters(dims))

    def add_lookup_parameters(self, dims) -> LookupParameters:
        rows, dim = dims
        return LookupParameters(self.core.add_lookup_parameters(rows, dim))


model = Model  # both spellings appear in scripts


def parameter(p: Parameters) -> Expression:
    return Expression(_ops.parameter(_cg(), p.core))


def lookup(lp: LookupParameters, index: int) -> Expression:
    return lp[index]


def vectorInput(values) -> Expression:  # noqa: N802 - scripting-surface name
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    t = _core.from_values(_core.Shape((arr.shape[0],)), arr)
    return Expression(_ops.input(_cg(), t))


inputVector = vectorInput


def concatenate(parts) -> Expression:
    return Expression(_ops.concatenate([p.inner for p in parts]))


def softmax(e: Expression) -> Expression:
    return Expression(_ops.softmax(e.inner))


def tanh(e: Expression) -> Expression:
    return Expression(_ops.tanh(e.inner))


def logistic(e: Expression) -> Expression:
    return Expression(_ops.logistic(e.inner))


def pickneglogsoftmax(e: Expression, label: int) -> Expression:
    return Expression(_ops.pickneglogsoftmax(e.inner, int(label)))


class _TrainerBase:
    def __init__(self, m: Model, rule: str, lr=None, **kw):
        self.core = _core.Trainer(m.core, rule, lr, **kw)

    def update(self) -> None:
        self.core.update()


class SimpleSGDTrainer(_TrainerBase):
    def __init__(self, m: Model, learning_rate: float = 0.1):
        super().__init__(m, "sgd", learning_rate)


class MomentumSGDTrainer(_TrainerBase):
    def __init__(self, m: Model, learning_rate: float = 0.01, mom: float = 0.9):
        super().__init__(m, "momentum", learning_rate, momentum=mom)


class AdagradTrainer(_TrainerBase):
    def __init__(self, m: Model, learning_rate: float = 0.1, eps: float = 1e-20):
        super().__init__(m, "adagrad", learning_rate, adagrad_eps=eps)


class AdamTrainer(_TrainerBase):
    def __init__(
        self,
        m: Model,
        alpha: float = 0.001,
        beta_1: float = 0.9,
        beta_2: float = 0.999,
        eps: float = 1e-8,
    ):
        super().__init__(m, "adam", alpha, beta1=beta_1, beta2=beta_2, adam_eps=eps)
