"""Exception types shared across the package."""


class PolarflowError(Exception):
    """Base class for package-specific failures."""


class SolverError(PolarflowError):
    """Time integration aborted (non-finite state, stability violation, ...)."""


class ConvergenceError(PolarflowError):
    """An iterative solve failed to reach its tolerance."""

    def __init__(self, message: str, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class ConfigError(PolarflowError):
    """Malformed run configuration; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
