"""Exception types shared across the package."""


class GeofidError(Exception):
    """Base class for all package errors."""


class NotHermitianError(GeofidError, ValueError):
    """Input matrix is not square/Hermitian within tolerance."""


class InvalidStateError(GeofidError, ValueError):
    """Input is not a valid density matrix (PSD with unit trace)."""


class SingularInputError(GeofidError, ValueError):
    """An operation that needs a positive definite input got a singular one."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(f"{message} (min eigenvalue {min_eigenvalue:.3e})")
        self.min_eigenvalue = min_eigenvalue


class ConvergenceError(GeofidError, RuntimeError):
    """An iterative procedure hit its iteration cap."""

    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class SolverError(ConvergenceError):
    """The interior-point solver failed; carries the iteration log."""

    def __init__(self, message, trace_log=(), block=None):
        super().__init__(message)
        self.trace_log = list(trace_log)
        self.block = block
