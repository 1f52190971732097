"""Exception hierarchy for the weakchaos package.

Every error raised by this package derives from WeakChaosError, so callers
can catch one type at the CLI boundary.
"""


class WeakChaosError(Exception):
    """Base class for all package errors."""


class ConfigError(WeakChaosError):
    """Bad user-facing configuration: unknown map string, bad parameter."""


class DomainError(WeakChaosError):
    """A point lies outside the domain a function is defined on."""


class EpsilonError(WeakChaosError):
    """Resolution parameter out of range (must be in (0, 1])."""


class StreamError(WeakChaosError):
    """A bit stream is malformed or truncated during decoding."""


class FixedPointError(WeakChaosError):
    """An orbit touched the indifferent fixed point, which has no symbol."""


class DescentError(WeakChaosError):
    """Symbol reconstruction walked off the consistent-branch ladder."""


class InsufficientDataError(WeakChaosError):
    """Too few points for the requested fit or comparison."""


class AlphabetError(WeakChaosError):
    """Symbol outside the declared alphabet during compression."""


class EstimatorError(WeakChaosError):
    """Unknown estimator name requested."""


class CoverError(WeakChaosError):
    """Point not covered by any cell of the cover."""


class NumericsError(WeakChaosError):
    """Float64 resolution exhausted (branch interval collapsed)."""
