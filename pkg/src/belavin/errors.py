"""Exception hierarchy shared by all layers."""


class BelavinError(Exception):
    """Base class for every error raised by this package."""


class DegenerateParameter(BelavinError, ValueError):
    """A denominator vanished at the chosen parameters."""


class SingularIntertwiner(BelavinError):
    """The matrix of intertwiner columns is numerically singular."""


class PoleNearby(BelavinError):
    """A trigonometric denominator is too close to a pole."""


class CollisionSingularity(BelavinError):
    """Two particle positions coincide within tolerance."""


class StepSizeError(BelavinError):
    """Finite-difference derivatives disagree between step sizes."""
