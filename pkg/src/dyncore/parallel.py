"""In-process data-parallel training over a shared Model.

Contexts (the parent plus workers) pull example indices from one shared queue,
each building per-example graphs against its own transient pools and writing
gradients into its own slot set. After each of its own gradient computations
the parent averages every currently filled slot plus its own, applies one
trainer update, and clears the consumed slots; a worker blocks until its slot
is consumed. Parameter reads by workers are unsynchronized against parent
writes (Hogwild-style): numeric staleness is accepted, structure is immutable.

workers=1 is the serial path: no threads, gradients flow straight into the
model and the trainer updates per example, bitwise-identical to a plain loop.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .arena import new_poolset
from .errors import CallbackError, ConfigError
from .graph import ComputationGraph
from .params import Model
from .trainers import Trainer


class GradientSlots:
    """One context's gradient storage, mirroring the Model roster exactly."""

    def __init__(self, model: Model):
        self.params = {id(p): np.zeros(p.shape.size(), dtype=model.dtype) for p in model.parameters}
        self.lookups = {id(lp): np.zeros((lp.rows, lp.dim), dtype=model.dtype) for lp in model.lookups}
        self.filled = False

    # sink interface used by ComputationGraph.backward
    def add_param_grad(self, p, flat: np.ndarray) -> None:
        self.params[id(p)] += flat

    def add_lookup_row_grad(self, lp, row: int, vec: np.ndarray) -> None:
        self.lookups[id(lp)][row] += vec

    def add_lookup_rows_grad(self, lp, ids, rows: np.ndarray) -> None:
        np.add.at(self.lookups[id(lp)], list(ids), rows)

    def zero(self) -> None:
        for a in self.params.values():
            a[:] = 0
        for a in self.lookups.values():
            a[:] = 0


def average_slots(slots: list[GradientSlots]) -> GradientSlots:
    """Arithmetic mean over the participating slot sets only (never an empty
    slot contributing zeros); result is a fresh slot set."""
    if not slots:
        raise ConfigError("averaging needs at least one filled slot set")
    n = float(len(slots))
    out = object.__new__(GradientSlots)
    out.filled = False
    out.params = {k: sum(s.params[k] for s in slots) / n for k in slots[0].params}
    out.lookups = {k: sum(s.lookups[k] for s in slots) / n for k in slots[0].lookups}
    return out


@dataclass
class ParallelPlan:
    """Worker count plus the per-datum loss builder.

    `loss_fn(cg, model, datum)` must return a scalar loss Expression built on
    the given worker-local graph. When `parent_cg` is given, the parent (and
    the workers=1 serial path) runs on it; worker contexts are created once
    and reused across train_parallel calls.
    """

    workers: int
    loss_fn: Callable[[ComputationGraph, Model, Any], Any]
    parent_cg: ComputationGraph | None = None
    forward_mb: float = 16.0
    backward_mb: float = 16.0
    _workers_ctx: list | None = None

    def _parent(self, model: Model) -> ComputationGraph:
        if self.parent_cg is None:
            self.parent_cg = ComputationGraph(
                new_poolset(self.forward_mb, self.backward_mb, 1, dtype=model.dtype)
            )
        return self.parent_cg

    def _worker_contexts(self, model: Model) -> list[tuple[ComputationGraph, GradientSlots]]:
        if self._workers_ctx is None:
            self._workers_ctx = []
            for _ in range(self.workers - 1):
                cg = ComputationGraph(
                    new_poolset(self.forward_mb, self.backward_mb, 1, dtype=model.dtype)
                )
                slots = GradientSlots(model)
                cg.sink = slots
                self._workers_ctx.append((cg, slots))
        return self._workers_ctx


def _load_average_into_model(model: Model, avg: GradientSlots) -> None:
    for p in model.parameters:
        np.copyto(p.gradient.data, avg.params[id(p)])
    for lp in model.lookups:
        np.copyto(lp.gradient, avg.lookups[id(lp)])


def train_parallel(
    plan: ParallelPlan, model: Model, trainer: Trainer, data: list, epochs: int
) -> list[float]:
    """Run data-parallel training; returns the aggregate loss per epoch."""
    if plan.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {plan.workers}")
    if plan.workers > 1 and trainer.sparse:
        raise ConfigError("sparse updates are undefined across workers; use --sparse off")
    if plan.workers == 1:
        return _train_serial(plan, model, trainer, data, epochs)

    parent_cg = plan._parent(model)
    saved_sink = parent_cg.sink
    pool = _WorkerPool(plan, model, trainer, parent_cg)
    try:
        return [pool.run_epoch(data) for _ in range(epochs)]
    finally:
        parent_cg.sink = saved_sink


class _WorkerPool:
    """Parent context plus worker threads sharing one model and one queue."""

    def __init__(self, plan: ParallelPlan, model: Model, trainer: Trainer, parent_cg):
        self.plan = plan
        self.model = model
        self.trainer = trainer
        self.parent_cg = parent_cg
        self.parent_slots = GradientSlots(model)
        parent_cg.sink = self.parent_slots
        contexts = plan._worker_contexts(model)
        self.worker_cgs = [cg for cg, _ in contexts]
        self.worker_slots = [slots for _, slots in contexts]
        self.cond = threading.Condition()
        self.errors: list[BaseException] = []
        self.stop = False

    def _next_index(self):
        with self.lock:
            if self.stop or self.cursor >= self.n_data:
                return None
            self.cursor += 1
            return self.cursor - 1

    def _work(self, wid: int, data):
        cg, slots = self.worker_cgs[wid], self.worker_slots[wid]
        while True:
            idx = self._next_index()
            if idx is None:
                return
            try:
                cg.renew()
                loss = self.plan.loss_fn(cg, self.model, data[idx])
                cg.backward(loss)
                self.worker_loss[wid] += float(cg.value(loss).data[0])
            except BaseException as exc:  # noqa: BLE001 - propagated to the parent
                with self.cond:
                    self.errors.append(
                        exc if isinstance(exc, CallbackError) else CallbackError(idx, exc)
                    )
                    self.stop = True
                    self.cond.notify_all()
                return
            with self.cond:
                slots.filled = True
                self.cond.notify_all()
                while slots.filled and not self.stop:  # block until consumed
                    self.cond.wait()

    def _consume(self, own: GradientSlots | None) -> None:
        # a filled worker is blocked until cleared, so its slot is stable here
        with self.cond:
            filled = [s for s in self.worker_slots if s.filled]
        participants = ([own] if own is not None else []) + filled
        if not participants:
            return
        _load_average_into_model(self.model, average_slots(participants))
        self.trainer.update()
        if own is not None:
            own.zero()
        with self.cond:
            for s in filled:
                s.zero()
                s.filled = False
            self.cond.notify_all()

    def run_epoch(self, data) -> float:
        self.cursor = 0
        self.n_data = len(data)
        self.lock = threading.Lock()
        self.worker_loss = [0.0] * len(self.worker_cgs)
        self.stop = False
        threads = [
            threading.Thread(target=self._work, args=(wid, data), daemon=True)
            for wid in range(len(self.worker_cgs))
        ]
        for t in threads:
            t.start()

        parent_loss = 0.0
        try:
            while not self.errors:
                idx = self._next_index()
                if idx is None:
                    break
                try:
                    self.parent_cg.renew()
                    loss = self.plan.loss_fn(self.parent_cg, self.model, data[idx])
                    self.parent_cg.backward(loss)
                    parent_loss += float(self.parent_cg.value(loss).data[0])
                except Exception as exc:
                    raise CallbackError(idx, exc) from exc
                self._consume(self.parent_slots)
            # drain slots of workers that finish after the parent
            while not self.errors:
                with self.cond:
                    if not any(s.filled for s in self.worker_slots):
                        if not any(t.is_alive() for t in threads):
                            break
                        self.cond.wait(0.005)
                        continue
                self._consume(None)
        finally:
            with self.cond:
                self.stop = True
                self.cond.notify_all()
            for t in threads:
                t.join()
        if self.errors:
            raise self.errors[0]
        return parent_loss + sum(self.worker_loss)


def _train_serial(plan: ParallelPlan, model: Model, trainer: Trainer, data: list, epochs: int):
    cg = plan._parent(model)
    epoch_losses = []
    for _ in range(epochs):
        total = 0.0
        for idx, datum in enumerate(data):
            try:
                cg.renew()
                loss = plan.loss_fn(cg, model, datum)
                cg.backward(loss)
                total += float(cg.value(loss).data[0])
            except Exception as exc:
                raise CallbackError(idx, exc) from exc
            trainer.update()
        epoch_losses.append(total)
    return epoch_losses
