"""Exception hierarchy shared by all prodnet modules.

The CLI maps these onto exit codes: parameter/validation problems exit
with 2, violated numeric preconditions with 3, and failed iterative
solves with 4.
"""


class ProdnetError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ProdnetError, ValueError):
    """An argument lies outside its admissible domain."""


class SizeError(ParameterError):
    """A requested structure would exceed an explicit size limit."""


class ValidationError(ProdnetError, ValueError):
    """A network or file violates a structural invariant."""


class CyclicGraphError(ValidationError):
    """An operation requiring acyclicity was handed a cyclic graph.

    Carries ``edge``: one edge (j, i) that lies on a cycle.
    """

    def __init__(self, message: str, edge=None):
        super().__init__(message)
        self.edge = edge


class FormatError(ValidationError):
    """An input file does not conform to its declared format."""


class PreconditionError(ProdnetError, ValueError):
    """A numeric precondition of a theorem-backed operation is violated."""


class UnsupportedRegimeError(PreconditionError):
    """Parameters fall in a regime the underlying result does not cover."""


class ConvergenceError(ProdnetError, RuntimeError):
    """An iterative solve did not converge within its iteration budget.

    Carries ``residual``: the last observed max-norm change.
    """

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual
