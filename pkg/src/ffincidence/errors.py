"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """An argument violates a documented precondition."""


class CapExceeded(RuntimeError):
    """A dense or exhaustive computation was asked for above its size cap."""


class NonConvergence(RuntimeError):
    """An iterative solver ran out of sweeps."""
