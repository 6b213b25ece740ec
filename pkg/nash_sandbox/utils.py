"""Shared exceptions and argument checks"""

# License: BSD (3-clause)

import numbers

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative routine stopped before reaching its tolerance

    Parameters
    ----------
    message : str
        Description of the failure.
    estimate : object
        The last iterate or estimate, for inspection.
    """

    def __init__(self, message, estimate=None):
        super(ConvergenceError, self).__init__(message)
        self.estimate = estimate


class StepCeilingError(RuntimeError):
    """An inner schedule asked for more SA steps than allowed"""

    def __init__(self, message, steps=None):
        super(StepCeilingError, self).__init__(message)
        self.steps = steps


class PreflightError(RuntimeError):
    """The contraction preflight failed and the run was not forced"""

    def __init__(self, message, report=None):
        super(PreflightError, self).__init__(message)
        self.report = report


class RecourseError(RuntimeError):
    """A second-stage sample violates a recourse assumption"""

    def __init__(self, message, assumption=None):
        super(RecourseError, self).__init__(message)
        self.assumption = assumption


def _check_positive(value, name, strict=True):
    if not isinstance(value, numbers.Real):
        raise TypeError('%s must be a real number, got %s'
                        % (name, type(value)))
    if strict and not value > 0:
        raise ValueError('%s must be positive, got %s' % (name, value))
    if not strict and not value >= 0:
        raise ValueError('%s must be nonnegative, got %s' % (name, value))
    return float(value)


def _check_unit_open(value, name):
    value = _check_positive(value, name)
    if not value < 1:
        raise ValueError('%s must be in (0, 1), got %s' % (name, value))
    return value


def _check_int(value, name, minimum=0):
    if isinstance(value, (bool, np.bool_)) or \
            not isinstance(value, (numbers.Integral, np.integer)):
        raise TypeError('%s must be an integer, got %s'
                        % (name, type(value)))
    if value < minimum:
        raise ValueError('%s must be >= %s, got %s' % (name, minimum, value))
    return int(value)


def _as_vector(value, name, size=None):
    vec = np.atleast_1d(np.asarray(value, dtype=float))
    if vec.ndim != 1:
        raise ValueError('%s must be one-dimensional, got shape %s'
                         % (name, vec.shape))
    if size is not None and vec.size != size:
        raise ValueError('%s must have length %s, got %s'
                         % (name, size, vec.size))
    if not np.all(np.isfinite(vec)):
        raise ValueError('%s must be finite' % name)
    return vec
