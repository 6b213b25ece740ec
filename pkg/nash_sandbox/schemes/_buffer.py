"""History of profiles for delayed reads"""

# License: BSD (3-clause)

from collections import deque

import numpy as np

from ..game import Profile
from ..utils import _check_int


class DelayBuffer(object):
    """Ring of the last ``b2 + 1`` profiles indexed by age

    Age 0 is the current profile. Ages beyond the available history are
    clamped to the oldest stored profile, which is x_0 until ``b2``
    iterations have passed.

    Parameters
    ----------
    b2 : int
        The delay bound.
    x0 : instance of Profile
        The initial profile.
    """

    def __init__(self, b2, x0):
        self.b2 = _check_int(b2, 'b2')
        self._ring = deque([x0], maxlen=self.b2 + 1)
        self._k = 0

    @property
    def k(self):
        """Iteration index of the current profile"""
        return self._k

    def push(self, profile):
        self._ring.appendleft(profile)
        self._k += 1

    def get(self, age):
        """Profile of the given age, clamped to the stored history"""
        age = _check_int(age, 'age')
        if age > self.b2:
            raise ValueError('age %d exceeds the delay bound %d'
                             % (age, self.b2))
        return self._ring[min(age, len(self._ring) - 1)]

    @property
    def current(self):
        return self._ring[0]


def delayed_view(buffer, delays, i=None):
    """Assemble a profile whose blocks are read with delays

    Parameters
    ----------
    buffer : instance of DelayBuffer
        The history.
    delays : array-like of int, shape (n_players,)
        Delay of every block, in ``[0, b2]``.
    i : int | None
        The reading player, whose own block is always current.

    Returns
    -------
    view : instance of Profile
        Block j taken from the profile of age ``min(delays[j], k)``.
    """
    delays = np.asarray(delays, dtype=int)
    current = buffer.current
    if delays.shape != (current.n_players,):
        raise ValueError('delays must have shape (%d,), got %s'
                         % (current.n_players, delays.shape))
    if np.any(delays < 0) or np.any(delays > buffer.b2):
        raise ValueError('delays must be in [0, %d], got %s'
                         % (buffer.b2, delays))
    if i is not None:
        delays = delays.copy()
        delays[i] = 0
    if not np.any(delays):
        return current
    vector = np.concatenate([buffer.get(int(age)).block(j)
                             for j, age in enumerate(delays)])
    return Profile(vector, current.dims)
