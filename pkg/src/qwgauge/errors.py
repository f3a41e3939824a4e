"""Exception types raised by the simulator."""


class ConfigError(ValueError):
    """Invalid scenario or lattice configuration.

    ``key`` holds the dotted key path of the offending entry when known.
    """

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class SaturationError(ArithmeticError):
    """The sin-Maxwell update left the principal arcsin branch."""

    def __init__(self, message, site=None, step=None):
        self.site = site
        self.step = step
        where = []
        if step is not None:
            where.append(f"step {step}")
        if site is not None:
            where.append(f"site {site}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ConstraintError(ValueError):
    """The Gauss constraint has no solution for the given charge."""
