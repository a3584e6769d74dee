"""
Exception hierarchy shared by every workbench module.

Messages follow the ``"function(): reason"`` convention so that a failure can be
traced back to the operation that raised it without a traceback.
"""


class WorkbenchError(RuntimeError):
    """Base class of all errors raised by :py:mod:`rankwb`."""


class InputError(WorkbenchError, ValueError):
    """A precondition of an operation was violated or input data is malformed."""


class FieldMismatchError(InputError):
    """Two operands live over different fields."""


class BudgetExceeded(WorkbenchError):
    """A construction would produce matrices larger than the size budget."""

    def __init__(self, message, size=None, budget=None):
        super().__init__(message)
        self.size = size
        self.budget = budget


class CertificationError(WorkbenchError):
    """
    A certificate could not be issued. The partially computed report (if any)
    is attached as ``report`` so callers can show what went wrong.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
