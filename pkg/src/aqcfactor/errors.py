"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class AqcError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AqcError, ValueError):
    """An input lies outside the domain of the operation."""


class TruncationError(DomainError):
    """The Fock-space cutoff discards more coherent-state weight than allowed."""


class DegenerateBoundError(DomainError):
    """The initial state is already an eigenstate of the target Hamiltonian."""


class ClaimViolation(AqcError, RuntimeError):
    """A mathematical property that must always hold was found violated.

    Raised e.g. when the Diophantine objective has more than one global
    minimiser. Seeing this means there is a bug or the theory is wrong.
    """


class NumericalError(AqcError, RuntimeError):
    """A numerical routine failed its accuracy contract."""


class ConvergenceError(NumericalError):
    """Step-halving changed the result by more than the tolerance."""


class NormError(NumericalError):
    """The propagated state drifted away from unit norm."""


class EigensolverError(NumericalError):
    """The dense Hermitian eigensolver failed at some interpolation point."""
