"""Exception hierarchy shared by the package."""


class SubspaceError(Exception):
    """Base class for every error raised by ransac_subspace."""


class InvalidInputError(SubspaceError, ValueError):
    pass


class DegenerateSpanError(SubspaceError):
    """The points span only the zero vector."""


class ContractViolationError(SubspaceError):
    """A precondition on the numerical content of the input does not hold."""


class BudgetExhaustedError(SubspaceError):
    """An iteration cap was reached before a dependent tuple was found."""

    def __init__(self, iterations, message=None):
        self.iterations = int(iterations)
        super().__init__(message or f"iteration budget exhausted after {self.iterations} iterations")


class ExhaustedSamplerError(SubspaceError):
    """Every subset has already been drawn."""


class SearchBudgetError(SubspaceError):
    """The minimum dependent subset search examined too many subsets."""


class InfeasibleSceneError(SubspaceError):
    """Too few points remain to continue clustering."""


class InfeasiblePartitionError(SubspaceError):
    pass


class DegenerateSceneError(SubspaceError):
    """A generated scene failed its general-position audit."""
