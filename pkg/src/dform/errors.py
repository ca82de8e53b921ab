"""Exception hierarchy shared by every dform module."""


class DFormError(Exception):
    """Base class for all engine errors."""


class InputError(DFormError, ValueError):
    """Malformed descriptor, element or form data."""


class NonUnit(DFormError, ValueError):
    pass


class ZeroInput(DFormError, ValueError):
    pass


class NotADthPower(DFormError, ValueError):
    pass


class PrecisionExhausted(DFormError, ArithmeticError):
    pass


class FieldTooLarge(DFormError, ValueError):
    pass


class DegenerateForm(DFormError, ValueError):
    pass


class UnsupportedCharacteristic(DFormError, ValueError):
    pass


class UnsupportedDegree(DFormError, ValueError):
    pass


class DimensionMismatch(DFormError, ValueError):
    pass


class FieldMismatch(DFormError, ValueError):
    pass


class DegreeMismatch(DFormError, ValueError):
    pass


class ZeroVector(DFormError, ValueError):
    pass


class InexactCoefficient(DFormError, ValueError):
    pass


class NotLiftable(DFormError, ValueError):
    pass


class NotAnisotropic(DFormError, ValueError):
    pass


class SearchBudgetExceeded(DFormError, RuntimeError):
    pass


class NotSNC(DFormError, ValueError):
    """Coefficient supports would need a blow-up to become strict normal crossing."""


class CertificateError(DFormError, AssertionError):
    """A certificate or proven identity failed to check. Always a bug."""


class TheoremViolation(CertificateError):
    pass
