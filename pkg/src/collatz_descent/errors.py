"""Exception types shared across the package."""


class CollatzDescentError(Exception):
    """Base class for all domain errors raised by this package."""


class StepCapExceeded(CollatzDescentError):
    """A trajectory ran past the configured step cap without descending.

    Either the cap is too small for the number at hand, or something
    genuinely remarkable is going on.
    """


class CycleDetected(CollatzDescentError):
    """A trajectory returned to its starting value before descending.

    This would be a nontrivial cycle of the 3n+1 map, so it must never
    pass silently.
    """


class UnrealizablePattern(CollatzDescentError):
    """The step pattern violates a parity rule and no start number can follow it."""


class NotADescent(CollatzDescentError):
    """The step pattern is parity-consistent but never ends below its start."""


class DepthTooLarge(CollatzDescentError):
    """Requested classification depth exceeds the configured maximum."""


class CacheError(CollatzDescentError):
    """Base class for class-table cache problems."""


class CorruptCache(CacheError):
    """Cache file failed to parse or a stored class violates its invariants."""


class VersionMismatch(CacheError):
    """Cache file was written by an incompatible format version."""
