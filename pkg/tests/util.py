"""Shared helpers for the test suite."""

import numpy as np

import dyncore as dc
from dyncore import ops


def make_ctx(dtype=np.float32, mb=4.0, seed=1, init_zero=False):
    pools = dc.new_poolset(mb, mb, mb, dtype=dtype)
    return dc.ComputationGraph(pools), dc.Model(pools, seed=seed, init_zero=init_zero)


def scalarize(cg, e, weights):
    """Reduce any expression to a scalar with fixed weights, catalog ops only."""
    shape = e.shape
    if shape.batch > 1:
        e = ops.sum_batches(e)
        shape = e.shape
    if len(shape.dims) == 2:
        m, p = shape.dims
        v = ops.input(cg, dc.from_values(dc.Shape((p,)), weights[:p]))
        e = ops.matmul(e, v)
        shape = e.shape
    n = shape.dims[0]
    u = ops.input(cg, dc.from_values(dc.Shape((1, n)), weights[: n]))
    return ops.matmul(u, e)
