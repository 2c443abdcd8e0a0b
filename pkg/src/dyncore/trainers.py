"""Online update rules over a Model: SGD, heavy-ball momentum, AdaGrad, Adam.

Every rule has a dense path (every parameter and every lookup row) and a
sparse path (lookup tables restricted to rows touched since the last update;
dense parameters always update fully). Sparse and dense agree exactly for SGD
and AdaGrad; momentum and Adam intentionally diverge on untouched rows because
their dense form moves rows with zero gradient through decaying moments.
"""

from __future__ import annotations

import numpy as np

from .errors import BadShape
from .params import Model

RULES = ("sgd", "momentum", "adagrad", "adam")
DEFAULT_LR = {"sgd": 0.1, "momentum": 0.01, "adagrad": 0.1, "adam": 0.001}


class Trainer:
    def __init__(
        self,
        model: Model,
        rule: str = "sgd",
        lr: float | None = None,
        momentum: float = 0.9,
        adagrad_eps: float = 1e-20,
        beta1: float = 0.9,
        beta2: float = 0.999,
        adam_eps: float = 1e-8,
        sparse: bool = True,
    ):
        if rule not in RULES:
            raise BadShape(f"unknown trainer rule {rule!r}; pick one of {RULES}")
        self.model = model
        self.rule = rule
        self.lr = DEFAULT_LR[rule] if lr is None else float(lr)
        self.momentum = momentum
        self.adagrad_eps = adagrad_eps
        self.beta1 = beta1
        self.beta2 = beta2
        self.adam_eps = adam_eps
        self.sparse = sparse
        self.t = 0

        def slots():
            slot = {id(p): np.zeros(p.shape.size(), dtype=model.dtype) for p in model.parameters}
            slot.update({id(lp): np.zeros((lp.rows, lp.dim), dtype=model.dtype) for lp in model.lookups})
            return slot

        if rule == "momentum":
            self.vel = slots()
        elif rule == "adagrad":
            self.sq = slots()
        elif rule == "adam":
            self.m1 = slots()
            self.m2 = slots()

    def set_sparse(self, flag: bool) -> None:
        self.sparse = flag

    def _apply(self, theta: np.ndarray, g: np.ndarray, key: int, sel) -> None:
        # sel is slice(None) for dense, a row-index array for the sparse path;
        # subscripted augmented forms write back through fancy indices too
        lr = self.lr
        if self.rule == "sgd":
            theta[sel] = theta[sel] - lr * g[sel]
        elif self.rule == "momentum":
            v = self.vel[key]
            v[sel] = self.momentum * v[sel] - lr * g[sel]
            theta[sel] = theta[sel] + v[sel]
        elif self.rule == "adagrad":
            sq = self.sq[key]
            sq[sel] = sq[sel] + g[sel] * g[sel]
            theta[sel] = theta[sel] - lr * g[sel] / (np.sqrt(sq[sel]) + self.adagrad_eps)
        else:  # adam; sparse rows use the global step counter t
            m1, m2 = self.m1[key], self.m2[key]
            m1[sel] = self.beta1 * m1[sel] + (1.0 - self.beta1) * g[sel]
            m2[sel] = self.beta2 * m2[sel] + (1.0 - self.beta2) * (g[sel] * g[sel])
            mhat = m1[sel] / (1.0 - self.beta1**self.t)
            vhat = m2[sel] / (1.0 - self.beta2**self.t)
            theta[sel] = theta[sel] - lr * mhat / (np.sqrt(vhat) + self.adam_eps)

    def update(self) -> None:
        model = self.model
        if self.rule == "adam":
            self.t += 1
        everything = slice(None)
        for p in model.parameters:
            self._apply(p.values.data, p.gradient.data, id(p), everything)
        for lp in model.lookups:
            if self.sparse:
                if lp.touched:
                    self._apply(lp.values, lp.gradient, id(lp), np.array(sorted(lp.touched)))
            else:
                self._apply(lp.values, lp.gradient, id(lp), everything)
        model.zero_gradients()
