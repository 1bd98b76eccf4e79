"""Exception vocabulary shared by all symplift modules.

Every error raised by the library is a subclass of SympliftError, so callers
(and the CLI) can map any library failure to an input-error exit without
catching bare exceptions.
"""


class SympliftError(Exception):
    """Base class for all library errors."""


class NotPrime(SympliftError):
    """The claimed prime is not prime."""


class RangeError(SympliftError):
    """A numeric argument is outside the supported range."""


class NonUnit(SympliftError):
    """Inversion of a residue divisible by the prime."""


class DimMismatch(SympliftError):
    """Matrix dimensions are incompatible."""


class ModMismatch(SympliftError):
    """Operands carry different moduli."""


class NotInvertible(SympliftError):
    """Gaussian elimination found no unit pivot."""


class NotLie(SympliftError):
    """The matrix fails the Lie-algebra condition M^T F + F M = 0."""


class NotSymplectic(SympliftError):
    """The matrix fails the symplectic condition M^T F M = F."""


class NotInPreimage(SympliftError):
    """The mod-l reduction is not in the image of the genus embedding."""


class BadPermutation(SympliftError):
    """The argument is not a permutation of {0, ..., g-1}."""


class CapExceeded(SympliftError):
    """A group enumeration did not stabilize within the element cap."""


class Overflow(SympliftError):
    """An exact integer result exceeds the supported width."""


class MixedAmbient(SympliftError):
    """Vectors from different ambient spaces (g, l) were mixed."""


class NotInKernel(SympliftError):
    """The matrix is not congruent to the identity at the required level."""


class BudgetExhausted(SympliftError):
    """A randomized search used up its word budget before converging."""


class GenusOne(SympliftError):
    """Certification requested at g = 1, outside the theorem's scope."""


class PreconditionViolated(SympliftError):
    """A check was invoked in a regime where its congruence genuinely fails."""
