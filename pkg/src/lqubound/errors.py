"""Exception types shared across the package.

Every error raised on purpose by this package derives from :class:`LquError`,
so callers can catch one base class at CLI or notebook level. Messages name
the violated check and, where a tolerance is involved, the measured deviation.
"""

from __future__ import annotations


class LquError(Exception):
    """Base class for all errors raised by lqubound."""


class DimensionMismatch(LquError):
    """Operands have incompatible shapes or subsystem dimensions."""


class NotHermitian(LquError):
    """A matrix required to be Hermitian deviates beyond tolerance."""


class NotPSD(LquError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class TraceNotOne(LquError):
    """A density matrix trace differs from one beyond tolerance."""


class NoConvergence(LquError):
    """The eigensolver failed to converge."""


class DegenerateDirection(LquError):
    """A spectrum has no traceless component (it is proportional to the identity)."""


class DegenerateSpectrum(LquError):
    """An observable spectrum has coinciding eigenvalues where distinct ones are required."""


class WrongDimension(LquError):
    """An operation restricted to a specific subsystem dimension got another one."""


class ParamOutOfRange(LquError):
    """A state or channel parameter lies outside its admissible range."""


class SoundnessError(LquError):
    """An internal consistency check failed (asymmetric correlation matrix,
    or an optimized value falling below the lower bound)."""
