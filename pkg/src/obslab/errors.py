"""Exception taxonomy shared by all obslab modules."""


class ObslabError(ValueError):
    """Base class for all obslab errors."""


class ConfigError(ObslabError):
    """Invalid configuration: unsupported family/boundary, bad parameters,
    malformed experiment configs."""


class ShapeError(ObslabError):
    """Coefficient vector does not conform to the model's mode table."""


class DomainError(ObslabError):
    """Input outside the mathematical domain (points off the manifold,
    nonpositive data where positivity is required)."""


class EmptySetError(ObslabError):
    """A time or spatial set with zero measure where positive measure is
    required."""


class ContractError(ObslabError):
    """An operand violates a documented invariant, e.g. a matrix that is
    not Hermitian within tolerance."""


class FormatError(ObslabError):
    """Malformed CSV/JSON artifact (missing header, wrong columns)."""
