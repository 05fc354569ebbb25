"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: DomainError -> 2, UnreliableResultError -> 3.
"""


class CZetaError(Exception):
    """Base class for all library errors."""


class DomainError(CZetaError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole.

    Carries the local Laurent data so callers that need residues can
    recover instead of failing.
    """

    def __init__(self, message, location=None, residue=None, constant_term=None):
        super().__init__(message)
        self.location = location
        self.residue = residue
        self.constant_term = constant_term


class DivergenceError(DomainError):
    """Series or integral does not converge for the requested parameters."""


class OutOfTubeError(DomainError):
    """Spectral parameter outside the strip of analytic continuation."""


class UnreliableResultError(CZetaError):
    """Numerics completed but the certified error bound exceeds the
    reliability threshold.  The offending value is attached."""

    def __init__(self, message, value=None, bound=None):
        super().__init__(message)
        self.value = value
        self.bound = bound


class FixtureError(CZetaError, ValueError):
    """A data fixture failed validation on load."""
