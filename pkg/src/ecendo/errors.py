"""Exception hierarchy shared by all modules."""


class EcendoError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(EcendoError, ZeroDivisionError):
    pass


class TrivialCharacter(EcendoError, ValueError):
    pass


class ScaleLimit(EcendoError):
    """The requested computation exceeds the enumeration budget."""


class DomainMismatch(EcendoError, ValueError):
    """Operands live on different curves or over different fields."""


class SingularCurve(EcendoError, ValueError):
    pass


class Supersingular(EcendoError, ValueError):
    pass


class ConductorCollision(EcendoError, ValueError):
    """An ideal or element shares a factor with the conductor."""


class NotInvertible(EcendoError, ValueError):
    pass


class DenominatorCollision(EcendoError, ValueError):
    pass


class InvalidConfiguration(EcendoError, ValueError):
    pass


class UncertifiedRing(EcendoError):
    """The endomorphism ring could not be pinned down within the budget."""
