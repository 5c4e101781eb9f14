"""Exception types raised across the package."""


class PlpdimError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(PlpdimError, ValueError):
    """A model parameter is outside its admissible domain."""


class QuadratureError(PlpdimError, ArithmeticError):
    """The congestion integral could not be resolved to the requested tolerance."""

    def __init__(self, message, *, panels=None, bound=None):
        super().__init__(message)
        self.panels = panels
        self.bound = bound


class OracleResourceError(PlpdimError, MemoryError):
    """The convolution oracle would need more support points than allowed."""


class SearchExhaustedError(PlpdimError):
    """No PRB count up to the search cap meets the congestion target."""

    def __init__(self, message, *, cap, pi_at_cap):
        super().__init__(message)
        self.cap = cap
        self.pi_at_cap = pi_at_cap


class ScenarioError(PlpdimError, ValueError):
    """A scenario file is malformed; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key
