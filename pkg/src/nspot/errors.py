"""Exception types shared across the package."""


class NspotError(Exception):
    pass


class DomainError(NspotError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularPointError(DomainError):
    """Evaluation requested at a singular point of a potential."""


class StencilError(DomainError):
    """A finite-difference stencil touches a declared singular point."""


class ValidationError(NspotError, ValueError):
    """Structured input (rotation matrix, amplitude, ...) fails validation."""


class ConvergenceError(NspotError, RuntimeError):
    """An iterative scheme failed to reach its required tolerance."""
