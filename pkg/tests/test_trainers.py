import numpy as np
import pytest

import dyncore as dc
from dyncore import Trainer, ops

from util import make_ctx


def one_param_model(theta, dtype=np.float64):
    cg, model = make_ctx(dtype=dtype, init_zero=True)
    p = model.add_parameters((len(theta),), "p")
    p.set_value(theta)
    return cg, model, p


def set_grad(p, g):
    p.gradient.data[:] = g


def test_sgd_step_example():
    _, model, p = one_param_model([1.0, 1.0])
    tr = Trainer(model, "sgd", lr=0.1)
    set_grad(p, [0.5, 0.0])
    tr.update()
    assert np.allclose(p.values.data, [0.95, 1.0])
    assert np.all(p.gradient.data == 0)  # update clears gradients


def test_adagrad_example():
    _, model, p = one_param_model([0.0])
    tr = Trainer(model, "adagrad", lr=1.0, adagrad_eps=0.0)
    set_grad(p, [3.0])
    tr.update()
    assert np.allclose(tr.sq[id(p)], [9.0])
    assert np.allclose(p.values.data, [-1.0])


def test_adam_first_step_example():
    _, model, p = one_param_model([0.0])
    tr = Trainer(model, "adam")  # defaults: lr 0.001, betas 0.9/0.999, eps 1e-8
    set_grad(p, [1.0])
    tr.update()
    assert np.isclose(p.values.data[0], -0.000999999995, atol=1e-12)
    assert tr.t == 1


def test_momentum_example():
    _, model, p = one_param_model([0.0])
    tr = Trainer(model, "momentum", lr=0.1, momentum=0.9)
    set_grad(p, [1.0])
    tr.update()
    assert np.allclose(tr.vel[id(p)], [-0.1])
    assert np.allclose(p.values.data, [-0.1])


def test_sgd_zero_lr_is_identity():
    _, model, p = one_param_model([0.3, -0.4])
    tr = Trainer(model, "sgd", lr=0.0)
    set_grad(p, [5.0, -5.0])
    tr.update()
    assert np.allclose(p.values.data, [0.3, -0.4])


def test_sgd_on_half_squared_norm_scales_exactly():
    # loss = 0.5 * ||theta||^2 -> grad = theta; alpha = 0.5 halves theta exactly
    cg, model = make_ctx(dtype=np.float64, init_zero=True)
    p = model.add_parameters((3,), "p")
    theta0 = np.array([0.7, -1.3, 2.9])
    p.set_value(theta0)
    ones_row = dc.from_values(dc.Shape((1, 3)), [1.0, 1.0, 1.0])
    pe = ops.parameter(cg, p)
    loss = ops.scalar_mul(ops.matmul(ops.input(cg, ones_row), ops.cmult(pe, pe)), 0.5)
    cg.backward(loss)
    assert np.allclose(p.gradient.data, theta0)
    Trainer(model, "sgd", lr=0.5).update()
    assert np.array_equal(p.values.data, theta0 * 0.5)


def test_sparse_default_on():
    _, model, _ = one_param_model([0.0])
    assert Trainer(model, "sgd").sparse is True


def _train_lookup(rule, sparse, steps):
    """Two update rounds over a 2-row table: both rows touched, then only row 0."""
    cg, model = make_ctx(dtype=np.float64, seed=4)
    E = model.add_lookup_parameters(2, 2, "E")
    tr = Trainer(model, rule, sparse=sparse)
    for touched_rows in steps:
        cg.renew()
        loss = None
        for row in touched_rows:
            term = ops.pickneglogsoftmax(ops.lookup(cg, E, row), row % 2)
            loss = term if loss is None else ops.add(loss, term)
        cg.backward(loss)
        tr.update()
    return E.values.copy()


@pytest.mark.parametrize("rule", ["sgd", "adagrad"])
def test_sparse_dense_equivalence(rule):
    steps = [(0, 1), (0,), (0, 0, 1), (1,)]
    dense = _train_lookup(rule, sparse=False, steps=steps)
    sparse = _train_lookup(rule, sparse=True, steps=steps)
    assert np.allclose(dense, sparse, atol=1e-6)


@pytest.mark.parametrize("rule", ["adam", "momentum"])
def test_sparse_divergence_on_untouched_rows(rule):
    # row 1 gets a gradient at step 1 only; at step 2 the dense rule keeps
    # moving it through decayed moments while the sparse rule must not
    steps = [(0, 1), (0,)]
    after_step1 = _train_lookup(rule, sparse=True, steps=steps[:1])
    sparse = _train_lookup(rule, sparse=True, steps=steps)
    dense = _train_lookup(rule, sparse=False, steps=steps)
    assert np.array_equal(sparse[1], after_step1[1])  # bitwise frozen
    assert not np.array_equal(dense[1], after_step1[1])  # dense moved it
    assert not np.array_equal(dense, sparse)


def test_update_clears_touched_sets():
    cg, model = make_ctx(dtype=np.float64)
    E = model.add_lookup_parameters(3, 2, "E")
    tr = Trainer(model, "sgd")
    cg.backward(ops.pickneglogsoftmax(ops.lookup(cg, E, 2), 0))
    assert E.touched == {2}
    tr.update()
    assert E.touched == set()
    assert np.all(E.gradient == 0)


def test_set_sparse_toggle():
    _, model, _ = one_param_model([0.0])
    tr = Trainer(model, "sgd")
    tr.set_sparse(False)
    assert tr.sparse is False
