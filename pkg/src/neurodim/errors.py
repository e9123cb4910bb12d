"""Exception and warning types shared across the package."""


class NeurodimError(Exception):
    """Base class for all package errors."""


class BasisMismatch(NeurodimError, ValueError):
    """Operands live over incompatible monomial bases or variable counts."""


class ShapeError(NeurodimError, ValueError):
    """Weight matrices do not match the architecture's layer shapes."""


class DegreeOverflow(NeurodimError, OverflowError):
    """Output degree or ambient dimension exceeds the configured cap."""


class EnumerationTooLarge(NeurodimError, ValueError):
    """An exhaustive search box exceeds the enumeration cap."""


class InconsistentFacts(NeurodimError, ValueError):
    """A fact merge produced a lower bound above an upper bound."""


class SmallPrimeWarning(UserWarning):
    """The prime is at most the output degree; binomial coefficients can vanish
    mod p and depress observed ranks (lower bounds stay valid)."""
