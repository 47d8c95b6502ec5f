"""Exception hierarchy shared by all modules."""


class ExvoaError(Exception):
    """Base class for every error raised by the package."""


class SingularMatrix(ExvoaError):
    """Raised when a linear system has identically vanishing determinant."""


class NotCoprime(ExvoaError, ValueError):
    pass


class Degenerate(ExvoaError):
    """The leading coefficient g_0 of a differential operator vanishes."""


class ResonantSymbolic(ExvoaError):
    """A Frobenius recurrence factor is the zero rational function."""


class ResonantObstruction(ExvoaError):
    """A resonant recurrence step reads 0 = nonzero, so no pure q-series exists."""


class Inconsistent(ExvoaError):
    pass
