"""Persistent trainable state: Model, Parameter, LookupParameter, persistence.

Values and gradient accumulators live in the never-reset parameters pool.
Initialization is deterministic in the model seed and the registration order.
"""

from __future__ import annotations

import struct

import numpy as np

from .arena import PoolSet
from .errors import (
    BadShape,
    DuplicateName,
    FileError,
    FormatError,
    RosterMismatch,
)
from .tensor import Shape, Tensor

MAGIC = b"DYN1"
FORMAT_VERSION = 1


class Parameter:
    __slots__ = ("name", "shape", "values", "gradient")

    def __init__(self, name: str, shape: Shape, values: Tensor, gradient: Tensor):
        self.name = name
        self.shape = shape
        self.values = values
        self.gradient = gradient

    def set_value(self, values) -> None:
        flat = np.asarray(values).reshape(-1)
        self.values.data[:] = flat


class LookupParameter:
    """An embedding table accessed sparsely by row; rows are contiguous."""

    __slots__ = ("name", "rows", "dim", "values", "gradient", "touched")

    def __init__(self, name: str, rows: int, dim: int, values: np.ndarray, gradient: np.ndarray):
        self.name = name
        self.rows = rows
        self.dim = dim
        self.values = values
        self.gradient = gradient
        self.touched: set[int] = set()


class Model:
    """Ordered collection of parameters with gradient accumulators."""

    def __init__(self, pools: PoolSet, seed: int = 0, init_zero: bool = False):
        self.pools = pools
        self.dtype = pools.dtype
        self.seed = seed
        self.init_zero = init_zero
        self.rng = np.random.default_rng(seed)
        self.parameters: list[Parameter] = []
        self.lookups: list[LookupParameter] = []
        self._names: set[str] = set()

    # -- registration ------------------------------------------------------

    def _claim_name(self, name: str | None, prefix: str) -> str:
        if name is None:
            name = f"{prefix}{len(self.parameters) + len(self.lookups)}"
        if name in self._names:
            raise DuplicateName(f"parameter name {name!r} already registered")
        self._names.add(name)
        return name

    def _alloc_flat(self, count: int) -> np.ndarray:
        nbytes = count * self.dtype.itemsize
        offset, _ = self.pools.parameters.allocate(nbytes)
        return self.pools.parameters.view(offset, nbytes, self.dtype)

    def add_parameters(self, dims, name: str | None = None) -> Parameter:
        if isinstance(dims, int):
            dims = (dims,)
        shape = Shape(dims)
        name = self._claim_name(name, "p")
        values = Tensor(shape, self._alloc_flat(shape.size()))
        gradient = Tensor(shape, self._alloc_flat(shape.size()))
        if not self.init_zero:
            # Glorot uniform; fan from the first two dims, vectors get fan_in 1
            fan_out = dims[0]
            fan_in = dims[1] if len(dims) > 1 else 1
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            values.data[:] = self.rng.uniform(-bound, bound, shape.size())
        p = Parameter(name, shape, values, gradient)
        self.parameters.append(p)
        return p

    def add_lookup_parameters(self, rows: int, dim: int, name: str | None = None) -> LookupParameter:
        if rows < 1 or dim < 1:
            raise BadShape(f"lookup table needs rows ≥ 1 and dim ≥ 1, got {rows}×{dim}")
        name = self._claim_name(name, "lp")
        values = self._alloc_flat(rows * dim).reshape(rows, dim)
        gradient = self._alloc_flat(rows * dim).reshape(rows, dim)
        if not self.init_zero:
            values[:] = self.rng.uniform(-0.1, 0.1, (rows, dim))
        lp = LookupParameter(name, rows, dim, values, gradient)
        self.lookups.append(lp)
        return lp

    # -- gradients ---------------------------------------------------------

    def zero_gradients(self) -> None:
        for p in self.parameters:
            p.gradient.data[:] = 0
        for lp in self.lookups:
            lp.gradient[:] = 0
            lp.touched.clear()

    # -- persistence -------------------------------------------------------

    def _roster(self) -> dict[str, tuple[int, tuple[int, ...]]]:
        roster = {p.name: (0, p.shape.dims) for p in self.parameters}
        roster.update({lp.name: (1, (lp.rows, lp.dim)) for lp in self.lookups})
        return roster

    def save(self, path: str) -> None:
        entries = [(0, p.name, p.shape.dims, p.values.data) for p in self.parameters]
        entries += [(1, lp.name, (lp.rows, lp.dim), lp.values.ravel()) for lp in self.lookups]
        try:
            with open(path, "wb") as fh:
                fh.write(MAGIC)
                fh.write(struct.pack("<II", FORMAT_VERSION, len(entries)))
                for kind, name, dims, flat in entries:
                    raw = name.encode("utf-8")
                    fh.write(struct.pack("<BH", kind, len(raw)))
                    fh.write(raw)
                    fh.write(struct.pack("<B", len(dims)))
                    fh.write(struct.pack(f"<{len(dims)}I", *dims))
                    fh.write(np.ascontiguousarray(flat, dtype="<f4").tobytes())
        except OSError as exc:
            raise FileError(f"cannot write {path}: {exc}") from exc

    def load(self, path: str) -> None:
        try:
            with open(path, "rb") as fh:
                blob = fh.read()
        except OSError as exc:
            raise FileError(f"cannot read {path}: {exc}") from exc
        if blob[:4] != MAGIC:
            raise FormatError(f"{path}: bad magic {blob[:4]!r}")
        try:
            version, count = struct.unpack_from("<II", blob, 4)
            if version != FORMAT_VERSION:
                raise FormatError(f"{path}: unsupported format version {version}")
            pos = 12
            seen = {}
            for _ in range(count):
                kind, name_len = struct.unpack_from("<BH", blob, pos)
                pos += 3
                name = blob[pos : pos + name_len].decode("utf-8")
                pos += name_len
                (rank,) = struct.unpack_from("<B", blob, pos)
                pos += 1
                dims = struct.unpack_from(f"<{rank}I", blob, pos)
                pos += 4 * rank
                size = int(np.prod(dims))
                values = np.frombuffer(blob, dtype="<f4", count=size, offset=pos)
                pos += 4 * size
                seen[name] = (kind, dims, values)
        except struct.error as exc:
            raise FormatError(f"{path}: truncated or corrupt file") from exc

        roster = self._roster()
        got = {name: (kind, dims) for name, (kind, dims, _) in seen.items()}
        if roster != got:
            missing = sorted(set(roster) ^ set(got))
            raise RosterMismatch(
                f"{path}: parameter roster differs from this model"
                + (f" (by {missing})" if missing else " (kind or shape changed)")
            )
        by_name = {p.name: p for p in self.parameters}
        lp_by_name = {lp.name: lp for lp in self.lookups}
        for name, (kind, _dims, values) in seen.items():
            if kind == 0:
                by_name[name].values.data[:] = values
            else:
                lp_by_name[name].values[:] = values.reshape(lp_by_name[name].values.shape)
