"""Box strategy sets"""

# License: BSD (3-clause)

import numpy as np

from ..utils import _as_vector


class BoxSet(object):
    """A closed box ``{x : lower <= x <= upper}``

    Parameters
    ----------
    lower : array-like, shape (n_dim,)
        Per-coordinate lower bounds.
    upper : array-like, shape (n_dim,)
        Per-coordinate upper bounds. Must satisfy ``lower <= upper``.
    """

    def __init__(self, lower, upper):
        lower = _as_vector(lower, 'lower')
        upper = _as_vector(upper, 'upper', size=lower.size)
        if np.any(lower > upper):
            raise ValueError('lower must not exceed upper, got %s > %s'
                             % (lower[lower > upper], upper[lower > upper]))
        lower.flags.writeable = False
        upper.flags.writeable = False
        self._lower = lower
        self._upper = upper

    @property
    def lower(self):
        return self._lower

    @property
    def upper(self):
        return self._upper

    @property
    def dim(self):
        return self._lower.size

    def contains(self, point, tol=0.):
        point = np.asarray(point, dtype=float)
        return bool(point.shape == (self.dim,) and
                    np.all(point >= self._lower - tol) and
                    np.all(point <= self._upper + tol))

    def to_dict(self):
        return dict(lower=self._lower.tolist(), upper=self._upper.tolist())

    def __repr__(self):
        return '<BoxSet | dim=%d, lower=%s, upper=%s>' % (
            self.dim, self._lower.tolist(), self._upper.tolist())


def project(box, point):
    """Euclidean projection onto a box

    Parameters
    ----------
    box : instance of BoxSet
        The set to project on.
    point : array-like, shape (n_dim,)
        The point to project.

    Returns
    -------
    projected : array, shape (n_dim,)
        The coordinate-wise clamp of ``point`` to ``[lower, upper]``.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (box.dim,):
        raise ValueError('point must have shape (%d,), got %s'
                         % (box.dim, point.shape))
    return np.minimum(np.maximum(point, box.lower), box.upper)


def diameter(box):
    """Euclidean diameter ``||upper - lower||`` of a box"""
    return float(np.linalg.norm(box.upper - box.lower))
