"""Central finite-difference gradient checking.

The oracle side never calls backward(): it re-evaluates the loss with each
parameter coordinate nudged by ±h and compares the central difference against
the gradient the reverse pass accumulated. Run it on double-precision pools.
"""

from __future__ import annotations

from .graph import ComputationGraph
from .params import Model


def _loss_value(cg: ComputationGraph, build_loss) -> float:
    cg.renew()
    return float(cg.value(build_loss(cg)).data[0])


def assert_gradients_match(
    build_loss,
    model: Model,
    cg: ComputationGraph,
    h: float = 1e-4,
    rtol: float = 1e-5,
    atol: float = 1e-7,
) -> None:
    """Raise AssertionError on the first coordinate where backward() and the
    central difference (f(θ+h) − f(θ−h)) / 2h disagree beyond tolerance."""
    model.zero_gradients()
    cg.renew()
    cg.backward(build_loss(cg))
    analytic = {p.name: p.gradient.data.copy() for p in model.parameters}
    analytic.update({lp.name: lp.gradient.reshape(-1).copy() for lp in model.lookups})

    stores = [(p.name, p.values.data) for p in model.parameters]
    stores += [(lp.name, lp.values.reshape(-1)) for lp in model.lookups]
    for name, flat in stores:
        for i in range(flat.shape[0]):
            orig = flat[i]
            flat[i] = orig + h
            up = _loss_value(cg, build_loss)
            flat[i] = orig - h
            down = _loss_value(cg, build_loss)
            flat[i] = orig
            fd = (up - down) / (2.0 * h)
            got = analytic[name][i]
            tol = max(atol, rtol * max(abs(fd), abs(got)))
            if abs(got - fd) > tol:
                raise AssertionError(
                    f"gradient mismatch at {name}[{i}]: backward {got!r} vs finite diff {fd!r} "
                    f"(|diff| {abs(got - fd):.3e} > tol {tol:.3e})"
                )
    model.zero_gradients()
