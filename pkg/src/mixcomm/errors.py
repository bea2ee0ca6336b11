"""Exception types shared across the package."""


class MixcommError(Exception):
    """Base class for all package-specific errors."""


class NotSymmetric(MixcommError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class NotPSD(MixcommError):
    """A matrix required to be positive semidefinite failed factorization."""


class DimensionMismatch(MixcommError):
    """Vector/matrix dimensions are inconsistent."""


class DomainError(MixcommError):
    """An input lies outside a function's admissible domain."""


class InvalidSpec(MixcommError):
    """A system description violates its construction invariants."""


class UnsupportedSpec(MixcommError):
    """An operation was asked to handle a noise/model variant it does not support."""


class UnsupportedDimension(MixcommError):
    """An operation is only defined for R <= 2 (grid integration, ellipse export)."""


class InvalidK(MixcommError):
    """kNN neighbor count exceeds the training-set size (or is < 1)."""


class ParseError(MixcommError):
    """Configuration or data file could not be parsed."""


class UnknownKey(ParseError):
    """Configuration file contains a key outside the schema."""


class MissingScenario(ParseError):
    """Configuration file does not name a scenario."""
