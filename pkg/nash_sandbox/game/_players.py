"""Players, games and strategy profiles"""

# License: BSD (3-clause)

import numpy as np

from ..utils import _as_vector, _check_int, _check_positive
from ._sets import BoxSet


class PlayerSpec(object):
    """One player of a stochastic Nash game

    Parameters
    ----------
    index : int
        Position of the player in the game.
    box : instance of BoxSet
        The strategy set X_i.
    det_grad : callable
        ``det_grad(x_i, profile)`` returns the gradient of the smooth
        objective f_i in the own block, with rivals read from ``profile``.
    stoch_grad : callable | None
        ``stoch_grad(x_i, profile, noise)`` returns one unbiased sample of
        the gradient given one row of noise variates. None means the
        oracle is noiseless and ``det_grad`` is used.
    draw_noise : callable | None
        ``draw_noise(rng, size)`` returns an array of shape
        ``(size, n_noise)`` consuming the generator player-major,
        coordinate-minor. Required when ``stoch_grad`` is given.
    grad_bound : float
        The second-moment bound M_i of the sampled gradient.
    lipschitz : float | None
        Lipschitz constant of ``det_grad`` in the own block, used by the
        deterministic reference solvers.
    recourse : object | None
        An attached second-stage problem (see :mod:`nash_sandbox.recourse`).
    cost_bound : float
        Gradient bound M_c of the first-stage cost part, only used in the
        recourse Q constant.
    params : dict | None
        Game-specific parameters, opaque to this class.
    """

    def __init__(self, index, box, det_grad, stoch_grad=None,
                 draw_noise=None, grad_bound=0., lipschitz=None,
                 recourse=None, cost_bound=0., params=None):
        self.index = _check_int(index, 'index')
        if not isinstance(box, BoxSet):
            raise TypeError('box must be an instance of BoxSet, got %s'
                            % type(box))
        if not callable(det_grad):
            raise TypeError('det_grad must be callable')
        if stoch_grad is not None and not callable(draw_noise):
            raise ValueError('draw_noise must be given with stoch_grad')
        self.box = box
        self.det_grad = det_grad
        self.stoch_grad = stoch_grad
        self.draw_noise = draw_noise
        self.grad_bound = _check_positive(grad_bound, 'grad_bound',
                                          strict=False)
        self.lipschitz = (None if lipschitz is None else
                          _check_positive(lipschitz, 'lipschitz'))
        self.recourse = recourse
        self.cost_bound = _check_positive(cost_bound, 'cost_bound',
                                          strict=False)
        self.params = dict() if params is None else dict(params)

    @property
    def dim(self):
        return self.box.dim

    @property
    def noisy(self):
        return self.stoch_grad is not None

    def __repr__(self):
        return '<PlayerSpec | index=%d, dim=%d, M=%0.4g%s>' % (
            self.index, self.dim, self.grad_bound,
            ', recourse' if self.recourse is not None else '')


class Profile(object):
    """A joint strategy profile stored as one dense vector

    Parameters
    ----------
    vector : array-like, shape (n_total,)
        The stacked blocks.
    dims : array-like of int, shape (n_players,)
        Block lengths.

    Notes
    -----
    The stored vector is read-only; updates go through :meth:`with_block`
    or :meth:`copy` so that snapshots kept in a trajectory record or a
    delay buffer cannot change afterwards.
    """

    def __init__(self, vector, dims):
        dims = np.asarray(dims, dtype=int)
        if dims.ndim != 1 or np.any(dims < 1):
            raise ValueError('dims must be positive integers, got %s' % dims)
        vector = _as_vector(vector, 'vector', size=int(dims.sum())).copy()
        vector.flags.writeable = False
        self._vector = vector
        self._dims = dims
        self._offsets = np.concatenate([[0], np.cumsum(dims)])

    @classmethod
    def from_vector(cls, vector, dims):
        return cls(vector, dims)

    @classmethod
    def from_blocks(cls, blocks):
        blocks = [np.atleast_1d(np.asarray(b, dtype=float)) for b in blocks]
        return cls(np.concatenate(blocks), [b.size for b in blocks])

    @property
    def vector(self):
        return self._vector

    @property
    def dims(self):
        return self._dims

    @property
    def n_players(self):
        return self._dims.size

    @property
    def blocks(self):
        return [self.block(i) for i in range(self.n_players)]

    def block(self, i):
        """View of block ``i``"""
        return self._vector[self._offsets[i]:self._offsets[i + 1]]

    def block_slice(self, i):
        return slice(self._offsets[i], self._offsets[i + 1])

    def with_block(self, i, value):
        """Return a new profile with block ``i`` replaced"""
        vector = self._vector.copy()
        vector[self.block_slice(i)] = value
        return Profile(vector, self._dims)

    def copy(self):
        return Profile(self._vector, self._dims)

    def __eq__(self, other):
        return (isinstance(other, Profile) and
                np.array_equal(self._dims, other._dims) and
                np.array_equal(self._vector, other._vector))

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return '<Profile | %d players, %s>' % (self.n_players,
                                               self._vector.tolist())


class GameSpec(object):
    """An N-player stochastic Nash game with proximal weight mu

    Parameters
    ----------
    players : list of PlayerSpec
        The players, ``players[i].index == i``.
    mu : float
        Proximal weight, strictly positive.
    curvature : instance of CurvatureBounds | None
        Curvature bounds of the smooth objectives, when known analytically.
    name : str
        Short label used in logs and artifacts.
    """

    def __init__(self, players, mu, curvature=None, name='game'):
        players = list(players)
        if len(players) < 1:
            raise ValueError('a game needs at least one player')
        for i, player in enumerate(players):
            if not isinstance(player, PlayerSpec):
                raise TypeError('players must be PlayerSpec instances, got %s'
                                % type(player))
            if player.index != i:
                raise ValueError('player %d carries index %d'
                                 % (i, player.index))
        self.players = players
        self.mu = _check_positive(mu, 'mu')
        self.curvature = curvature
        self.name = str(name)
        self._dims = np.array([p.dim for p in players], dtype=int)

    @property
    def n_players(self):
        return len(self.players)

    @property
    def dims(self):
        return self._dims.copy()

    @property
    def n_total(self):
        return int(self._dims.sum())

    @property
    def has_recourse(self):
        return any(p.recourse is not None for p in self.players)

    def initial_profile(self, x0=None):
        """The starting profile, by default the lower corner of X"""
        if x0 is None:
            return Profile.from_blocks([p.box.lower for p in self.players])
        if isinstance(x0, Profile):
            profile = x0
        else:
            profile = Profile(x0, self._dims)
        if not self.is_feasible(profile):
            raise ValueError('initial profile is not feasible: %s'
                             % profile.vector)
        return profile

    def is_feasible(self, profile, tol=0.):
        if not np.array_equal(profile.dims, self._dims):
            return False
        return all(p.box.contains(profile.block(i), tol)
                   for i, p in enumerate(self.players))

    def with_mu(self, mu):
        """Copy of the game with another proximal weight"""
        return GameSpec(self.players, mu, self.curvature, self.name)

    def __repr__(self):
        return '<GameSpec | %s, N=%d, n=%d, mu=%0.4g>' % (
            self.name, self.n_players, self.n_total, self.mu)


def sample_stoch_grad(player, profile, stream, x_i=None):
    """Draw one stochastic gradient of a player's smooth objective

    Parameters
    ----------
    player : instance of PlayerSpec
        The player.
    profile : instance of Profile
        The joint profile; rivals are read from it.
    stream : instance of SampleStream
        Source of the noise variates.
    x_i : array | None
        Own block to evaluate at. Defaults to the block in ``profile``.

    Returns
    -------
    grad : array, shape (n_i,)
        One draw of the sampled gradient.
    """
    if x_i is None:
        x_i = profile.block(player.index)
    if not player.noisy:
        return np.asarray(player.det_grad(x_i, profile), dtype=float)
    noise = player.draw_noise(stream.generator, 1)
    return np.asarray(player.stoch_grad(x_i, profile, noise[0]), dtype=float)


def deterministic_gradient(game, i, x_i, profile):
    """Gradient of player ``i``'s full expected objective

    The smooth part plus, when a recourse problem is attached, its
    expected subgradient.
    """
    player = game.players[i]
    grad = np.asarray(player.det_grad(x_i, profile), dtype=float)
    if player.recourse is not None:
        grad = grad + player.recourse.expected_subgradient(x_i)
    return grad
