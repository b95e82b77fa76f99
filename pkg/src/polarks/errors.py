"""Exception types shared across the package."""


class PolarksError(Exception):
    """Base class for all polarks errors."""


class MalformedObservable(PolarksError):
    """Observable string does not match ``sign? [IXYZ]+``."""


class DimensionMismatch(PolarksError):
    """Operands live on different numbers of qubits / coordinates."""


class IdentityHasNoPoint(PolarksError):
    """The identity class has no associated projective point."""


class ZeroVector(PolarksError):
    """The zero vector is not a projective point."""


class InvalidContext(PolarksError):
    """A configuration context violates the context invariants."""


class NotMutuallyCommuting(InvalidContext):
    """A context contains a non-commuting pair of observables."""


class ProductNotIdentity(InvalidContext):
    """The product of a context's observables is not +/- identity."""


class UnsupportedRank(PolarksError):
    """Requested polar space rank is outside the enumeration budget."""


class CapExceeded(PolarksError):
    """Coset enumeration would exceed the configured rank cap."""

    def __init__(self, rank: int, cap: int):
        super().__init__(f"column-space rank {rank} exceeds enumeration cap {cap}")
        self.rank = rank
        self.cap = cap


class BudgetExceeded(PolarksError):
    """A search exceeded its configured budget; ``partial`` carries progress."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ConstructionFailed(PolarksError):
    """A geometric construction produced an object failing its invariants."""


class ImageOffQuadric(PolarksError):
    """The coordinate remap sent a quadric point off the quadric."""
