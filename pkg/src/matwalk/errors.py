"""Exception hierarchy shared across the package."""


class MatwalkError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(MatwalkError, ValueError):
    """An operation was applied in a dimension where it is undefined."""


class SingularMatrixError(MatwalkError):
    """A matrix required to be invertible is numerically singular."""


class DegenerateGapError(MatwalkError):
    """Top two singular values coincide; the attracting direction is ill-defined."""


class NotUnimodularError(MatwalkError):
    """Determinant differs from 1 beyond tolerance."""


class SingularEvaluationError(MatwalkError):
    """A point-evaluation hit a pairing that vanishes (log would be -inf).

    Carries the offending cloud atom so callers can report which particle
    lies on the orthogonal hyperplane of the evaluation point.
    """

    def __init__(self, message, atom_index=None):
        super().__init__(message)
        self.atom_index = atom_index


class ConfigError(MatwalkError):
    """Scenario configuration is invalid; ``problems`` lists every offence."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
