"""Exception types shared across the package."""


class PoleError(ValueError):
    """A weight or matrix entry was evaluated too close to one of its poles."""


class DimensionError(ValueError):
    """State length or parameter-set sizes do not match."""


class SiteError(IndexError):
    """A site label outside 1..N."""


class ConvergenceError(RuntimeError):
    """Newton iteration for the Bethe equations failed."""


class CapError(ValueError):
    """A request exceeds a configured size cap (brute force or subset sums)."""
