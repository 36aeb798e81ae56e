"""Exception and warning types shared across the engine."""


class OrbitsumError(Exception):
    """Base class for all engine errors."""


class ExpressionError(OrbitsumError):
    """Malformed or unsupported potential expression.

    Carries the 0-based character position of the offending token when
    the problem is local to one.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class ConfigError(OrbitsumError):
    """Invalid, missing or inconsistent configuration input."""


class IntegrationError(OrbitsumError):
    """Trajectory integration produced a non-finite state."""


class FocalEndpointError(OrbitsumError):
    """The orbit endpoint is a conjugate point; the prefactor diverges."""


class ConjugatePointError(OrbitsumError):
    """A quantity was requested at (or across) a conjugate point."""


class FanFoldError(OrbitsumError):
    """Fan members cross: the transverse map is no longer monotone."""


class IllConditionedFanError(OrbitsumError):
    """Transverse polynomial fit is too ill-conditioned to trust."""


class QuadratureError(OrbitsumError):
    """An oscillatory integral failed to converge at the requested settings."""


class FocalOrbitWarning(UserWarning):
    """A candidate orbit was dropped because its endpoint is focal."""


class LevelConvergenceWarning(UserWarning):
    """Grid eigenvalues shifted too much between resolutions."""
