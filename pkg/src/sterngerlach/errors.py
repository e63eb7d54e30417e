"""Exception types raised across the package."""


class SternGerlachError(Exception):
    """Base class for all model and tooling errors."""


class NonPositiveParameter(SternGerlachError, ValueError):
    def __init__(self, name: str):
        super().__init__(f"parameter {name!r} must be positive")
        self.name = name


class NonFiniteParameter(SternGerlachError, ValueError):
    def __init__(self, name: str):
        super().__init__(f"parameter {name!r} must be finite")
        self.name = name


class NonNegativeTimeRequired(SternGerlachError, ValueError):
    def __init__(self, tau):
        super().__init__(f"scaled time must be >= 0, got {tau!r}")
        self.tau = tau


class DiagonalPairRejected(SternGerlachError, ValueError):
    pass


class NoDecoherence(SternGerlachError, ValueError):
    """The requested coherence never decays (zero field, zero diffusion or Q = 0)."""


class UnnormalizedSpinState(SternGerlachError, ValueError):
    pass


class QuadratureNotConverged(SternGerlachError, RuntimeError):
    pass


class CflViolation(SternGerlachError, ValueError):
    pass


class DomainTooSmall(SternGerlachError, ValueError):
    pass


class InsufficientSamples(SternGerlachError, ValueError):
    pass


class PeaksNotResolved(SternGerlachError, ValueError):
    pass


class ParseError(SternGerlachError, ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.key = key


class InvalidValue(SternGerlachError, ValueError):
    def __init__(self, key: str, message: str = ""):
        super().__init__(f"invalid value for {key!r}" + (f": {message}" if message else ""))
        self.key = key
