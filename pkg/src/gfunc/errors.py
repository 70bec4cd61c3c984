"""Exceptions raised by the evaluation routines."""


class GFunctionError(Exception):
    """Base class for all errors raised by :mod:`gfunc`."""


class DomainError(GFunctionError, ValueError):
    """An argument lies outside the region where the integral converges."""


class ConvergenceError(GFunctionError, ArithmeticError):
    """The requested accuracy was not reached within the work budget."""
