"""Dense arrays with an explicit batch count.

Layout contract: column-major within one batch element; the batch index is the
slowest-varying index, so batch element i occupies data[i*n : (i+1)*n) where
n is the per-element size.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadShape, IndexOutOfBounds, LengthMismatch

MAX_RANK = 4


class Shape:
    __slots__ = ("dims", "batch")

    def __init__(self, dims, batch: int = 1):
        dims = tuple(int(d) for d in dims)
        if not 1 <= len(dims) <= MAX_RANK:
            raise BadShape(f"rank must be in [1, {MAX_RANK}], got dims {dims}")
        if any(d < 1 for d in dims) or batch < 1:
            raise BadShape(f"dims and batch must be positive, got {dims} batch {batch}")
        self.dims = dims
        self.batch = int(batch)

    def elem_size(self) -> int:
        return math.prod(self.dims)

    def size(self) -> int:
        return self.batch * self.elem_size()

    def with_batch(self, batch: int) -> "Shape":
        return Shape(self.dims, batch)

    def __eq__(self, other) -> bool:
        return isinstance(other, Shape) and self.dims == other.dims and self.batch == other.batch

    def __hash__(self) -> int:
        return hash((self.dims, self.batch))

    def __repr__(self) -> str:
        return f"Shape({list(self.dims)}, batch={self.batch})"


class Tensor:
    """A shape plus a flat value array (often a view into an arena pool)."""

    __slots__ = ("shape", "data")

    def __init__(self, shape: Shape, data: np.ndarray):
        if data.ndim != 1 or data.shape[0] != shape.size():
            raise LengthMismatch(f"flat data length {data.shape} does not match {shape}")
        self.shape = shape
        self.data = data

    def elems(self) -> np.ndarray:
        """(batch, elem_size) view; rows are batch elements in layout order."""
        return self.data.reshape(self.shape.batch, self.shape.elem_size())

    def elem(self, j: int) -> np.ndarray:
        """Column-major view of batch element j, shaped like dims."""
        n = self.shape.elem_size()
        return self.data[j * n : (j + 1) * n].reshape(self.shape.dims, order="F")

    def copy(self) -> "Tensor":
        return Tensor(self.shape, self.data.copy())

    def __repr__(self) -> str:
        return f"Tensor({self.shape}, {self.data!r})"


def from_values(shape: Shape, values, dtype=np.float64) -> Tensor:
    flat = np.asarray(values, dtype=dtype).reshape(-1)
    if flat.shape[0] != shape.size():
        raise LengthMismatch(f"{flat.shape[0]} values for {shape} (needs {shape.size()})")
    return Tensor(shape, flat.copy())


def at(t: Tensor, indices, batch: int = 0) -> float:
    """Element accessor following the layout contract; pure."""
    dims = t.shape.dims
    if len(indices) != len(dims):
        raise IndexOutOfBounds(f"{len(indices)} indices for rank-{len(dims)} tensor")
    if not 0 <= batch < t.shape.batch:
        raise IndexOutOfBounds(f"batch {batch} out of range [0, {t.shape.batch})")
    offset = 0
    stride = 1
    for i, d in zip(indices, dims):
        if not 0 <= i < d:
            raise IndexOutOfBounds(f"index {tuple(indices)} out of range for dims {dims}")
        offset += i * stride
        stride *= d
    return float(t.data[batch * t.shape.elem_size() + offset])


def argmax(t: Tensor) -> int:
    """Index of the maximum of an unbatched vector; ties break low."""
    if t.shape.batch != 1 or len(t.shape.dims) != 1:
        raise BadShape(f"argmax needs an unbatched vector, got {t.shape}")
    return int(np.argmax(t.data))
