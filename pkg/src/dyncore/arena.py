"""Pre-allocated memory pools with constant-time offset-bump allocation.

Three pools back the engine: forward values and backward gradients (reset per
graph) and persistent parameter/gradient storage (never reset). Allocation is
a single rounded cursor advance; whole-pool release is a cursor reset.
"""

from __future__ import annotations

import numpy as np

from .errors import AllocationFailed, PoolExhausted

ALIGNMENT = 64
MIB = 1 << 20


def _aligned_buffer(nbytes: int) -> np.ndarray:
    # over-allocate so offset 0 of the usable region sits on a 64-byte boundary
    raw = np.zeros(nbytes + ALIGNMENT, dtype=np.uint8)
    shift = (-raw.ctypes.data) % ALIGNMENT
    return raw[shift : shift + nbytes]


class Pool:
    """A contiguous byte region handed out by advancing a cursor.

    Every region starts on a 64-byte boundary and regions handed out between
    two resets are pairwise disjoint. `alloc_count` instruments the O(1)
    contract: one rounding, one capacity comparison, one addition per call.
    """

    __slots__ = ("name", "capacity", "buffer", "cursor", "alloc_count")

    def __init__(self, name: str, capacity: int):
        if capacity <= 0:
            raise AllocationFailed(f"pool '{name}' requires positive capacity, got {capacity}")
        try:
            buf = _aligned_buffer(capacity)
        except MemoryError as exc:
            raise AllocationFailed(f"cannot reserve {capacity} bytes for pool '{name}'") from exc
        self.name = name
        self.capacity = capacity
        self.buffer = buf
        self.cursor = 0
        self.alloc_count = 0

    def allocate(self, nbytes: int) -> tuple[int, int]:
        """Return (offset, nbytes) and advance the cursor by the aligned size."""
        rounded = (nbytes + ALIGNMENT - 1) & ~(ALIGNMENT - 1)
        offset = self.cursor
        if rounded > self.capacity - offset:
            raise PoolExhausted(self.name, nbytes, self.capacity - offset)
        self.cursor = offset + rounded
        self.alloc_count += 1
        return offset, nbytes

    def view(self, offset: int, nbytes: int, dtype) -> np.ndarray:
        return self.buffer[offset : offset + nbytes].view(dtype)

    def reset(self, zero_used: bool = False) -> None:
        if zero_used and self.cursor:
            self.buffer[: self.cursor] = 0
        self.cursor = 0

    @property
    def remaining(self) -> int:
        return self.capacity - self.cursor


class PoolSet:
    """forward/backward/parameters pool triple plus the global element type."""

    __slots__ = ("forward", "backward", "parameters", "dtype")

    def __init__(self, forward_mb: float, backward_mb: float, param_mb: float, dtype=np.float32):
        for label, mb in (("forward", forward_mb), ("backward", backward_mb), ("parameters", param_mb)):
            if mb <= 0:
                raise AllocationFailed(f"pool '{label}' size must be > 0 MiB, got {mb}")
        self.forward = Pool("forward", int(forward_mb * MIB))
        self.backward = Pool("backward", int(backward_mb * MIB))
        self.parameters = Pool("parameters", int(param_mb * MIB))
        self.dtype = np.dtype(dtype)

    def reset_transient(self) -> None:
        """Rewind forward and backward; zero the backward pool's used prefix.

        Forward memory is written exactly once per node so it needs no zeroing;
        backward memory accumulates and must read as zero on first use.
        """
        self.forward.reset()
        self.backward.reset(zero_used=True)


def new_poolset(forward_mb: float, backward_mb: float, param_mb: float, dtype=np.float32) -> PoolSet:
    return PoolSet(forward_mb, backward_mb, param_mb, dtype=dtype)


def poolset_from_mem_flag(flag: str, dtype=np.float32) -> PoolSet:
    """Build pools from a `--mem` flag value: total MiB, or `fwd,bwd,param`."""
    try:
        sizes = [float(p) for p in flag.split(",")]
    except ValueError as exc:
        raise AllocationFailed(f"bad --mem value {flag!r}") from exc
    if len(sizes) == 1:
        third = sizes[0] / 3.0
        sizes = [third, third, third]
    if len(sizes) != 3:
        raise AllocationFailed(f"--mem takes one total or three sizes, got {flag!r}")
    return PoolSet(*sizes, dtype=dtype)
