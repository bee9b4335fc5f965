"""Shared exception types."""


class RigidmatError(Exception):
    """Base class for all library errors."""


class FieldError(RigidmatError, ValueError):
    """Invalid field construction or element."""


class GroundMismatchError(RigidmatError, ValueError):
    """Edge set used with an oracle over a different ground set."""


class UnsupportedParametersError(RigidmatError, ValueError):
    """Parameters outside the range a deterministic algorithm covers."""


class BudgetExceededError(RigidmatError, RuntimeError):
    """An exhaustive routine was asked to exceed its enumeration budget.

    Deliberately distinct from a certified negative answer: callers must
    never conflate "did not search" with "does not exist".
    """
