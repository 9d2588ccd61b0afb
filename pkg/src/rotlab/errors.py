"""Exception types shared across the package."""


class RotlabError(Exception):
    """Base class for all package-specific errors."""


class DepthError(RotlabError):
    """A level/denominator is not representable at the given fiber depth."""


class CoherenceError(RotlabError):
    """Residue data is not compatible across levels."""


class LiftSyntaxError(RotlabError):
    """Lift expression failed to parse.

    Attributes:
        position: 0-based character offset of the failure.
        expected: human-readable description of what was expected there.
    """

    def __init__(self, message, position, expected=None):
        super().__init__(message)
        self.position = position
        self.expected = expected


class MapValidationError(RotlabError):
    """A map model failed a structural validity check."""


class EquivarianceError(MapValidationError):
    """Lift is not equivariant under deck translations."""


class MonotonicityError(MapValidationError):
    """Lift is not strictly increasing, so it is not a homeomorphism lift."""


class InverseError(RotlabError):
    """Backward iteration failed (no bracket, or bisection did not converge)."""


class WeightError(RotlabError):
    """Atom weights of a discrete measure do not sum to 1."""


class DegenerateMeasure(RotlabError):
    """Empirical measure has too few atoms to support the construction."""


class BudgetExceeded(RotlabError):
    """A sample/orbit budget was exhausted before the computation stabilized."""


class MapSpecError(RotlabError):
    """A JSON map specification is malformed or names an unknown family."""
