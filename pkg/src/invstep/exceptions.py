"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class SingularMatrixError(ValueError):
    """A matrix that must be inverted is singular."""


class NotInvariantError(ValueError):
    """The set is not invariant for the continuous system.

    Every threshold computation presupposes continuous invariance, so this is
    raised whenever the corresponding feasibility problem has no solution.
    """


class NoPositiveThresholdError(ValueError):
    """The requested method certifies no positive steplength at all."""
