"""Exception hierarchy.

Every error raised for bad mathematical input derives from
:class:`CobcalcError`; the command line maps those to exit status 1.
"""


class CobcalcError(Exception):
    """Base class for domain errors."""


class DomainMismatchError(CobcalcError):
    """Operands live in different coefficient rings or domains."""


class CompositionError(CobcalcError):
    """A substituted series has a nonzero constant term."""


class SolveError(CobcalcError):
    """A degreewise implicit solve is not uniquely solvable."""


class OutOfRangeError(CobcalcError):
    """An index or degree lies beyond what was computed."""


class InvalidFGLError(CobcalcError):
    """A series fails the formal group law axioms."""


class UnknownBundleError(CobcalcError):
    pass


class UnregisteredMapError(CobcalcError):
    pass


class UnsupportedClassError(CobcalcError):
    pass


class UnsupportedConfigurationError(CobcalcError):
    pass


class InconsistentLatticeError(CobcalcError):
    """Face data of a divisor is not closed under taking subsets."""


class TheoryMismatchError(CobcalcError):
    pass
