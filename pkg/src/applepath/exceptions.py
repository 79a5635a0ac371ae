"""Exception classes raised by applepath."""

import numpy as np


class AppleError(Exception):
    """Base class for all applepath errors."""


class NumericalOverflowError(AppleError, ArithmeticError):
    """A likelihood quantity overflowed to a non-finite value."""


class SaturatedObservationError(AppleError, ZeroDivisionError):
    """A variance weight underflowed to zero, so the working response is undefined."""


class DegenerateResponseError(AppleError, ValueError):
    """The response carries no information (e.g. constant labels), so lambda_max is 0."""


class FoldDegeneracyError(DegenerateResponseError):
    """A cross-validation training fold has a degenerate response."""


class PenaltyDomainError(AppleError, ValueError):
    """A penalty derivative was requested at t = 0."""


class DegenerateCurvatureError(AppleError, ValueError):
    """The univariate MCP update is not strictly convex (v <= 1 / gamma)."""


class SingularSystemError(AppleError, np.linalg.LinAlgError):
    """A Hessian-type system could not be solved."""


class ResponseDomainError(AppleError, ValueError):
    """A response value is outside the support of the family."""


class CsvParseError(AppleError, ValueError):
    """A CSV file could not be parsed into a dataset."""
