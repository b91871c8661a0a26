"""Exception types shared across the library.

The CLI maps these onto distinct exit codes (domain errors -> 3,
numerical failures -> 4), so library code should raise the most
specific type that applies.
"""


class DomainError(ValueError):
    """An input lies outside the documented validity range of an operation."""


class NumericalError(RuntimeError):
    """A numerical invariant failed (non-convergence, negative radicand, ...)."""


class SectorMismatchError(NumericalError):
    """Ground states at nearby parameters live in different fermion-parity sectors.

    Fidelity between different parity sectors vanishes identically; callers
    must handle the crossing explicitly instead of silently reporting 0.
    """
