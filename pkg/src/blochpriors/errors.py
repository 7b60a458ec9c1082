"""Exception types shared across the package."""


class BlochPriorsError(Exception):
    """Base class for all computational errors raised by this package."""


class ImproperPriorError(BlochPriorsError):
    """Requested prior is not normalizable over the requested support."""


class OutOfSupportError(BlochPriorsError):
    """Point lies outside the support of the density."""


class SupportMismatchError(BlochPriorsError):
    """Densities do not share a common support; the divergence would diverge."""


class ZeroEvidenceError(BlochPriorsError):
    """Likelihood annihilates the prior; the posterior is undefined."""


class NoSignChangeError(BlochPriorsError):
    """Bracketing interval does not straddle a root."""


class NonConvergenceError(BlochPriorsError):
    """Quadrature failed to reach the requested tolerance."""


class BudgetExceededError(BlochPriorsError):
    """Enumeration or evaluation budget exhausted before completion."""
