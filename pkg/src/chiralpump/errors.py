"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class ChiralPumpError(Exception):
    """Base class for all errors raised by chiralpump."""


class ConfigError(ChiralPumpError):
    """Malformed config file, override, or unknown preset."""


class PhysicsError(ChiralPumpError, ValueError):
    """Invalid physical input or a numerical result that fails validation."""


class BasisError(PhysicsError):
    pass


class ParameterError(PhysicsError):
    pass


class StabilityError(PhysicsError):
    pass


class InvalidStateError(PhysicsError):
    pass


class UndefinedExcessError(PhysicsError):
    pass


class DegenerateSteadyStateError(PhysicsError):
    def __init__(self, nullity, singular_values=None):
        self.nullity = nullity
        self.singular_values = singular_values
        super().__init__(
            f"Liouvillian null space has dimension {nullity}; steady state is not unique"
        )
