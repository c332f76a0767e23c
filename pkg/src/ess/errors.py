"""Exception taxonomy shared across the package."""


class EssError(Exception):
    """Base class for all errors raised by this package."""


class CoefficientError(EssError):
    """Bad coefficient domain construction or arithmetic (e.g. division by zero)."""


class DescriptorMismatch(EssError):
    """Operands live over different coefficient domains or groups."""


class InputError(EssError):
    """Malformed input document, word, or polynomial string."""


class ValidationError(EssError):
    """A structural invariant failed: d o d != 0, non-surjective map, bad shapes."""


class UnsupportedCoefficients(EssError):
    """Operation requires field coefficients (or an integral shadow) not present."""


class MinimalityError(EssError):
    """Complex is not minimal where minimality is a precondition."""


class CrossCheckError(EssError):
    """Two independent pipelines disagree.  Always an implementation bug, never
    a user error; callers must treat this as fatal."""
