"""Scheme configuration and asynchronous update sets"""

# License: BSD (3-clause)

import numpy as np

from ..defaults import _handle_default
from ..game import RUN
from ..utils import _check_int

KINDS = ('synchronous', 'randomized', 'poisson', 'asynchronous', 'cyclic',
         'sg')
DELAYS = ('uniform', 'fixed')


class SchemeConfig(object):
    """Which scheme to run and its activation and delay parameters

    Parameters
    ----------
    kind : str
        ``'synchronous'``, ``'randomized'`` (independent Bernoulli
        activation with probabilities ``p``), ``'poisson'`` (one player per
        iteration with probability proportional to ``rates``),
        ``'asynchronous'``, ``'cyclic'`` or ``'sg'`` (the stochastic
        gradient baseline).
    max_iter : int
        Number of major iterations K (communication rounds for ``'sg'``).
    n_trajectories : int
        Independent trajectories per run, at most ``2 ** 32 - 1`` so that
        trajectory ids stay below the run-level key ``RUN``.
    seed : int
        Master seed.
    p : array-like | float | None
        Activation probabilities in (0, 1], required for ``'randomized'``.
    rates : array-like | None
        Poisson clock rates, required for ``'poisson'``.
    b1 : int
        Window in which every player updates at least once.
    b2 : int
        Delay bound.
    delay : str
        ``'uniform'`` draws delays uniformly on ``{0, ..., b2}``,
        ``'fixed'`` uses ``b2`` for every rival.
    update_prob : float
        Inclusion probability of the generated asynchronous update sets.
    update_sets : list of list of int | None
        Explicit update sets I_k, generated when None.
    x0 : array-like | None
        Initial profile, the lower corner of X when None.
    mu_sg : float | None
        Strong-monotonicity modulus of the SG baseline step size, taken
        from the game's curvature bounds when None.
    """

    def __init__(self, kind='synchronous', max_iter=None, n_trajectories=None,
                 seed=None, p=None, rates=None, b1=None, b2=None, delay=None,
                 update_prob=None, update_sets=None, x0=None, mu_sg=None):
        defaults = _handle_default('scheme')
        if kind not in KINDS:
            raise ValueError('kind must be one of %s, got %r' % (KINDS, kind))
        self.kind = kind
        pick = lambda v, key: defaults[key] if v is None else v  # noqa
        self.max_iter = _check_int(pick(max_iter, 'max_iter'), 'max_iter')
        self.n_trajectories = _check_int(
            pick(n_trajectories, 'n_trajectories'), 'n_trajectories', 1)
        if self.n_trajectories > RUN:
            raise ValueError('n_trajectories must be <= %d, got %d'
                             % (RUN, self.n_trajectories))
        self.seed = _check_int(pick(seed, 'seed'), 'seed')
        self.p = None
        if kind == 'randomized':
            if p is None:
                raise ValueError('p is required for the randomized scheme')
            p = np.atleast_1d(np.asarray(p, dtype=float))
            if np.any(~((p > 0) & (p <= 1))):
                raise ValueError('p must be in (0, 1], got %s' % p)
            self.p = p
        self.rates = None
        if kind == 'poisson':
            if rates is None:
                raise ValueError('rates are required for the poisson scheme')
            rates = np.atleast_1d(np.asarray(rates, dtype=float))
            if np.any(~(rates > 0)):
                raise ValueError('rates must be positive, got %s' % rates)
            self.rates = rates
        self.b1 = _check_int(pick(b1, 'b1'), 'b1', 1)
        self.b2 = _check_int(pick(b2, 'b2'), 'b2')
        self.delay = pick(delay, 'delay')
        if self.delay not in DELAYS:
            raise ValueError('delay must be one of %s, got %r'
                             % (DELAYS, self.delay))
        self.update_prob = float(pick(update_prob, 'update_prob'))
        if not 0 <= self.update_prob <= 1:
            raise ValueError('update_prob must be in [0, 1], got %s'
                             % self.update_prob)
        self.update_sets = None
        if update_sets is not None:
            self.update_sets = [sorted(set(int(i) for i in s))
                                for s in update_sets]
        self.x0 = None if x0 is None else np.asarray(x0, dtype=float)
        self.mu_sg = None if mu_sg is None else float(mu_sg)

    def probabilities(self, n_players):
        """Per-player update probabilities of a randomized scheme"""
        if self.kind == 'poisson':
            return self.rates / self.rates.sum()
        if self.p.size == 1:
            return np.full(n_players, self.p[0])
        return self.p

    def to_dict(self):
        out = dict(kind=self.kind, max_iter=self.max_iter,
                   n_trajectories=self.n_trajectories, seed=self.seed,
                   b1=self.b1, b2=self.b2, delay=self.delay,
                   update_prob=self.update_prob)
        for key in ('p', 'rates', 'x0'):
            value = getattr(self, key)
            out[key] = None if value is None else value.tolist()
        out['update_sets'] = self.update_sets
        out['mu_sg'] = self.mu_sg
        return out

    def __repr__(self):
        return '<SchemeConfig | %s, K=%d, %d trajectories>' % (
            self.kind, self.max_iter, self.n_trajectories)


def validate_update_sets(sets, n_players, b1):
    """Check every player updates in every full window of b1 iterations

    The windows are ``[m b1, (m + 1) b1)``. When ``len(sets)`` is not a
    multiple of ``b1`` the last window is cut short by the end of the run
    and is not checked; :func:`generate_update_sets` still fills it.

    Parameters
    ----------
    sets : list of list of int
        The update sets I_k.
    n_players : int
        Number of players.
    b1 : int
        Window length.

    Raises
    ------
    ValueError
        Naming the first window and the players missing from it.
    """
    everyone = set(range(n_players))
    for s in sets:
        if not set(s) <= everyone:
            raise ValueError('update set %s contains unknown players' % s)
    for start in range(0, len(sets) - b1 + 1, b1):
        seen = set().union(*[set(s) for s in sets[start:start + b1]])
        if seen != everyone:
            raise ValueError('players %s do not update in iterations '
                             '[%d, %d)' % (sorted(everyone - seen), start,
                                           start + b1))


def generate_update_sets(n_players, n_iter, b1, random_state=None, prob=0.5):
    """Random update sets repaired to satisfy the window condition

    Each player joins I_k independently with probability ``prob``; a
    player absent from a window of ``b1`` iterations is then added to the
    window's last set.

    Parameters
    ----------
    n_players : int
        Number of players.
    n_iter : int
        Number of sets to generate.
    b1 : int
        Window length.
    random_state : None | int | instance of Generator
        Source of randomness.
    prob : float
        Inclusion probability.

    Returns
    -------
    sets : list of list of int
        The update sets.
    """
    rng = (random_state if isinstance(random_state, np.random.Generator)
           else np.random.default_rng(random_state))
    n_players = _check_int(n_players, 'n_players', 1)
    b1 = _check_int(b1, 'b1', 1)
    chosen = rng.random((_check_int(n_iter, 'n_iter'), n_players)) < prob
    for start in range(0, len(chosen), b1):
        window = chosen[start:start + b1]
        window[-1] |= ~window.any(axis=0)
    sets = [np.where(row)[0].tolist() for row in chosen]
    validate_update_sets(sets, n_players, b1)
    return sets


def cyclic_update_sets(n_players, n_iter):
    """Update sets ``I_k = {k mod N}``"""
    return [[k % n_players] for k in range(n_iter)]
