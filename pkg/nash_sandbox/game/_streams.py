"""Keyed random streams"""

# License: BSD (3-clause)

import numbers

import numpy as np

# first key entry after the trajectory id; keeps concerns on disjoint streams
GRADIENT = 0
ACTIVATION = 1
DELAY = 2
UPDATE_SETS = 3

# first key entry of the streams shared by all trajectories of a run;
# trajectory ids stay below it
RUN = 2 ** 32 - 1


class SampleStream(object):
    """A reproducible random stream addressed by ``(seed, key)``

    The same ``(seed, key)`` pair always yields the same sequence of
    variates; distinct keys yield independent streams (the key is used as
    the spawn key of a :class:`numpy.random.SeedSequence`). Within one
    inner solve, consecutive SA steps consume consecutive variates of the
    stream, so the inner step index acts as the stream cursor.

    Parameters
    ----------
    seed : int
        Master seed in ``[0, 2 ** 64)``.
    key : tuple of int
        Integers in ``[0, 2 ** 32)`` identifying the stream, e.g.
        ``(trajectory, GRADIENT, player, k)`` or ``(RUN, UPDATE_SETS)``.
    """

    def __init__(self, seed, key=()):
        if isinstance(seed, bool) or \
                not isinstance(seed, (numbers.Integral, np.integer)):
            raise TypeError('seed must be an integer, got %s' % type(seed))
        if not 0 <= seed < 2 ** 64:
            raise ValueError('seed must be in [0, 2**64), got %s' % seed)
        key = tuple(int(k) for k in key)
        # numpy splits larger entries into 32-bit words, aliasing other keys
        if any(not 0 <= k < 2 ** 32 for k in key):
            raise ValueError('stream keys must be in [0, 2**32), got %s'
                             % (key,))
        self._seed = int(seed)
        self._key = key
        self._generator = None

    @property
    def seed(self):
        return self._seed

    @property
    def key(self):
        return self._key

    def spawn(self, *key):
        """Return the child stream with ``key`` appended"""
        return SampleStream(self._seed, self._key + tuple(key))

    @property
    def generator(self):
        """The :class:`numpy.random.Generator` behind this stream"""
        if self._generator is None:
            seq = np.random.SeedSequence(self._seed, spawn_key=self._key)
            self._generator = np.random.Generator(np.random.PCG64(seq))
        return self._generator

    def __repr__(self):
        return '<SampleStream | seed=%d, key=%s>' % (self._seed, self._key)
