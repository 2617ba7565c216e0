"""Exception hierarchy.

Two families matter for the CLI exit-code contract: InputError (bad or
ill-posed input, exit code 2) and ToleranceError (a numerical bound was
violated at run time, exit code 3).
"""


class HelicityLabError(Exception):
    """Base class for all package errors."""


class InputError(HelicityLabError):
    """Invalid input: bad files, broken invariants, unmet preconditions."""


class RealityError(InputError):
    """Coefficients are not conjugate-symmetric within tolerance."""


class AliasingError(InputError):
    """Grid resolution too small for the requested spectral content."""


class CostCapError(InputError):
    """A refused computation whose cost would exceed the configured cap."""


class DegenerateFieldError(InputError):
    """Field magnitude below the evaluation floor everywhere."""


class PathPreconditionError(InputError):
    """Path endpoints do not satisfy the helicity sign/level requirements."""


class ToleranceError(HelicityLabError):
    """A numerical tolerance or bound was exceeded during a computation."""


class TruncationError(ToleranceError):
    """Spectral truncation residual above the configured bound."""


class BlowUpError(ToleranceError):
    """Transport flow aborted on runaway energy growth."""


class VerificationError(ToleranceError):
    """One or more checks of the verification suite failed."""


class InternalInconsistencyError(HelicityLabError):
    """A state the underlying mathematics rules out was reached."""
