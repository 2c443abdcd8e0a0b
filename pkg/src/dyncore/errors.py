"""Exception taxonomy shared across the engine."""


class DyncoreError(Exception):
    """Base class for every error this library raises on purpose."""


class PoolExhausted(DyncoreError):
    def __init__(self, pool: str, requested: int, remaining: int):
        super().__init__(
            f"memory pool '{pool}' exhausted: requested {requested} bytes, "
            f"{remaining} remaining; rerun with a larger --mem"
        )
        self.pool = pool
        self.requested = requested
        self.remaining = remaining


class AllocationFailed(DyncoreError):
    pass


class BadShape(DyncoreError):
    pass


class IndexOutOfBounds(DyncoreError):
    pass


class LengthMismatch(DyncoreError):
    pass


class ShapeError(DyncoreError):
    pass


class StaleExpression(DyncoreError):
    pass


class NonScalarLoss(DyncoreError):
    pass


class EmptyBatch(DyncoreError):
    pass


class EmptyList(DyncoreError):
    pass


class DuplicateName(DyncoreError):
    pass


class FileError(DyncoreError):
    pass


class FormatError(DyncoreError):
    pass


class RosterMismatch(DyncoreError):
    pass


class UnknownWord(DyncoreError):
    pass


class CallbackError(DyncoreError):
    def __init__(self, datum_index: int, cause: BaseException):
        super().__init__(f"loss callback failed on datum {datum_index}: {cause!r}")
        self.datum_index = datum_index


class ConfigError(DyncoreError):
    """Conflicting or invalid run options (e.g. sparse updates with workers > 1)."""


class DataError(DyncoreError):
    """Malformed or empty benchmark data files."""
