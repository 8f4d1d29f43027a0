"""Exception hierarchy shared by all simulation modules.

``CqedError`` is the common base so callers (notably the CLI) can map any
simulation failure to a single exit path.  ``NumericalError`` groups the
failures that arise from numerics (non-convergence, inadequate truncation,
failed fits) as opposed to invalid inputs.
"""


class CqedError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(CqedError):
    """Operands have incompatible dimensions."""


class NotHermitian(CqedError):
    """Matrix violates the Hermitian symmetry tolerance."""


class NotUnitAxis(CqedError):
    """Rotation axis is not a unit vector."""


class NoMinimum(CqedError):
    """Potential has no local minimum for the requested bias."""


class InductanceSingular(CqedError):
    """Nonlinear Josephson inductance diverges at this flux."""


class StepUnstable(CqedError):
    """ODE integration left the physically valid domain."""


class NumericalError(CqedError):
    """Base class for numerical failures (CLI exit code 3)."""


class NoConvergence(NumericalError):
    """Eigensolver failed to converge within the sweep cap."""


class TruncationTooSmall(NumericalError):
    """Basis truncation is inadequate for the requested state or sweep."""


class FitFailed(NumericalError):
    """Envelope fit could not be performed (too few usable extrema)."""
