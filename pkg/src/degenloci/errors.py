"""Shared exception types."""


class DegenLociError(Exception):
    """Base class for all library errors."""


class DeclaredVariableError(DegenLociError):
    """A polynomial or substitution refers to a variable outside the ring."""


class PoleError(DegenLociError):
    """A Laurent polynomial has a negative t-power where none is allowed."""


class ParseError(DegenLociError):
    """Malformed polynomial text."""


class RingMismatchError(DegenLociError):
    """Operands live in different rings."""


class BudgetError(DegenLociError):
    """A configurable step budget was exhausted."""


class DegenerateMatrixError(DegenLociError):
    """All maximal minors of a matrix vanish identically."""


class UnsupportedShapeError(DegenLociError):
    """An ideal is not the complete intersection the operation requires."""


class UnsupportedDimensionError(DegenLociError):
    """The ambient dimension is outside the supported range."""


class NormalizationError(DegenLociError):
    """A binary quadratic form cannot be normalized over the rationals."""


class InadmissibleFamilyError(DegenLociError):
    """No degeneration branch applies to the supplied matrix data."""


class CertificateRefusal(DegenLociError):
    """A certificate constructor refused; the message names the failed check."""


class ConfigError(DegenLociError):
    """Invalid sampling configuration."""
