"""Exceptions raised by the workbench."""
from typing import Tuple


class WorkbenchError(Exception):
    """Base class for every error the workbench raises on purpose."""


class LieAlgebraError(WorkbenchError, ValueError):
    """A structure-constant table does not define a Lie algebra."""


class AntisymmetryViolation(LieAlgebraError):
    """Two entries of the table disagree with f_ij^k = -f_ji^k."""

    def __init__(self, i: int, j: int, k: int, message: str = ""):
        self.indices = (i, j, k)
        super().__init__(message or f"antisymmetry violated at (i, j, k) = {self.indices}")


class JacobiViolation(LieAlgebraError):
    """The Jacobi identity fails for some basis quadruple."""

    def __init__(self, indices: Tuple[int, int, int, int], value):
        self.indices = indices
        self.value = value
        super().__init__(f"Jacobi identity fails at (i, j, k, l) = {indices}: cycle sum {value}")


class UnknownKind(WorkbenchError, ValueError):
    """An enum-valued argument is outside its vocabulary."""


class TruncationError(WorkbenchError, ValueError):
    """A truncation degree is missing, zero, or too low for the request."""


class NotALieElement(WorkbenchError, ValueError):
    """An associative polynomial could not be rewritten in the Lyndon basis."""


class CoincidentPoints(WorkbenchError, ValueError):
    """The propagator was evaluated on a diagonal point."""


class DegenerateForm(WorkbenchError, ValueError):
    """A graph's form degree does not match the configuration-space dimension."""


class InDegreeTooHigh(WorkbenchError, ValueError):
    """An aerial vertex receives two derivatives of a linear coefficient."""


class InfeasibleDegree(WorkbenchError, RuntimeError):
    """A degree-by-degree linear system turned out inconsistent."""


class ParseError(WorkbenchError, ValueError):
    """Text input could not be parsed."""


class UnknownAlgebra(WorkbenchError, LookupError):
    """A --lie source names neither a built-in algebra nor a readable file."""


class CapExceeded(WorkbenchError, ValueError):
    """A requested size exceeds a documented cap."""


class OrderCap(CapExceeded):
    """Requested truncation order is above the cap for the command."""


class BudgetCap(CapExceeded):
    """Requested Monte-Carlo graph order or wheel size is above the cap."""
