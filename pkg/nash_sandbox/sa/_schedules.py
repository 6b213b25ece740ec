"""Inner-step schedules of the inexact best-response schemes"""

# License: BSD (3-clause)

import math

import numpy as np

from ..defaults import _handle_default
from ..game import diameter
from ..utils import (StepCeilingError, _check_int, _check_positive,
                     _check_unit_open)

VARIANTS = ('synchronous', 'randomized', 'asynchronous', 'cyclic',
            'polynomial', 'fixed', 'geometric')


def q_constant(grad_bound, mu, diam):
    """Error constant ``2 M^2 / mu^2 + 2 D^2`` of the SA inner solver"""
    mu = _check_positive(mu, 'mu')
    return 2. * grad_bound ** 2 / mu ** 2 + 2. * diam ** 2


def q_constant_recourse(sub_bound, cost_bound, grad_bound, mu, diam):
    """Error constant of the recourse-aware SA inner solver

    ``4 (M_s^2 + M_c^2 + M_i^2) / mu^2 + 4 D^2``
    """
    mu = _check_positive(mu, 'mu')
    return (4. * (sub_bound ** 2 + cost_bound ** 2 + grad_bound ** 2) /
            mu ** 2 + 4. * diam ** 2)


def game_q_constants(game):
    """Per-player Q constants of a game, recourse-aware where attached"""
    q = list()
    for player in game.players:
        diam = diameter(player.box)
        if player.recourse is None:
            q.append(q_constant(player.grad_bound, game.mu, diam))
        else:
            q.append(q_constant_recourse(player.recourse.sub_bound,
                                         player.cost_bound,
                                         player.grad_bound, game.mu, diam))
    return np.array(q)


class InnerSchedule(object):
    """Number of SA steps and certified accuracy per inner solve

    Parameters
    ----------
    variant : str
        One of ``'synchronous'``, ``'randomized'``, ``'asynchronous'``,
        ``'cyclic'``, ``'polynomial'``, ``'fixed'`` or ``'geometric'``.
    eta : float | None
        Geometric base in (0, 1); required except for ``'polynomial'``
        and ``'fixed'``.
    q_const : array-like, shape (n_players,) | float
        Per-player constants Q_i.
    n_players : int | None
        Number of players, required for ``'cyclic'``.
    exponent : int
        Exponent of the ``'polynomial'`` schedule ``k ** exponent``.
    count : int | None
        Step count of the ``'fixed'`` schedule.
    rate : float
        Rate r of the ``'geometric'`` schedule ``ceil(Q / eta ** (r k))``.
    step_ceiling : int | None
        Largest step count allowed, defaults to
        ``DEFAULTS['sa']['step_ceiling']``.
    """

    def __init__(self, variant, eta=None, q_const=1., n_players=None,
                 exponent=2, count=None, rate=2., step_ceiling=None):
        if variant not in VARIANTS:
            raise ValueError('variant must be one of %s, got %r'
                             % (VARIANTS, variant))
        self.variant = variant
        if variant in ('polynomial', 'fixed'):
            self.eta = None if eta is None else _check_unit_open(eta, 'eta')
        else:
            if eta is None:
                raise ValueError('eta is required for the %s schedule'
                                 % variant)
            self.eta = _check_unit_open(eta, 'eta')
        q_const = np.atleast_1d(np.asarray(q_const, dtype=float))
        if np.any(~(q_const > 0)):
            raise ValueError('q_const must be positive, got %s' % q_const)
        self.q_const = q_const
        self.n_players = None
        if variant == 'cyclic':
            self.n_players = _check_int(n_players, 'n_players', 1)
        self.exponent = _check_int(exponent, 'exponent', 1)
        self.count = None
        if variant == 'fixed':
            self.count = _check_int(count, 'count', 1)
        self.rate = _check_positive(rate, 'rate')
        if step_ceiling is None:
            step_ceiling = _handle_default('sa')['step_ceiling']
        self.step_ceiling = _check_int(step_ceiling, 'step_ceiling', 1)

    def q_for(self, i):
        return float(self.q_const[i] if self.q_const.size > 1
                     else self.q_const[0])

    def to_dict(self):
        return dict(variant=self.variant, eta=self.eta,
                    q_const=self.q_const.tolist(), n_players=self.n_players,
                    exponent=self.exponent, count=self.count,
                    rate=self.rate, step_ceiling=self.step_ceiling)

    def __repr__(self):
        return '<InnerSchedule | %s, eta=%s>' % (self.variant, self.eta)


def _geometric_steps(q, eta, power, ceiling):
    # Q / eta ** power without overflow for large k
    log_steps = math.log(q) - power * math.log(eta)
    if log_steps > math.log(ceiling) + 1:
        return ceiling + 1
    return int(math.ceil(q / eta ** power))


def steps_for(schedule, i, k, beta=0):
    """Number of SA steps of player ``i``'s inner solve

    Parameters
    ----------
    schedule : instance of InnerSchedule
        The schedule.
    i : int
        Player index.
    k : int
        Major iteration.
    beta : int
        Number of updates player ``i`` carried out before ``k``.

    Returns
    -------
    steps : int
        The step count, at least 1.
    """
    k = _check_int(k, 'k')
    beta = _check_int(beta, 'beta')
    variant, eta, q = schedule.variant, schedule.eta, schedule.q_for(i)
    ceiling = schedule.step_ceiling
    if variant in ('synchronous', 'asynchronous'):
        steps = _geometric_steps(q, eta, 2. * (k + 1), ceiling)
    elif variant == 'randomized':
        steps = _geometric_steps(q, eta, 2. * (beta + 1), ceiling)
    elif variant == 'cyclic':
        steps = _geometric_steps(q, eta, 2. + 2. * k / schedule.n_players,
                                 ceiling)
    elif variant == 'geometric':
        steps = _geometric_steps(q, eta, schedule.rate * k, ceiling)
    elif variant == 'polynomial':
        steps = k ** schedule.exponent
    else:
        steps = schedule.count
    steps = max(int(steps), 1)
    if steps > ceiling:
        raise StepCeilingError('player %d at k=%d needs more than %d SA '
                               'steps' % (i, k, ceiling), steps=steps)
    return steps


def accuracy_for(schedule, i, k, beta=0):
    """Accuracy alpha whose square bounds the inner solve's MSE

    Parameters
    ----------
    schedule : instance of InnerSchedule
        The schedule.
    i : int
        Player index.
    k : int
        Major iteration.
    beta : int
        Number of updates player ``i`` carried out before ``k``.

    Returns
    -------
    alpha : float
        ``eta ** (k + 1)`` (synchronous), ``eta ** (beta + 1)``
        (randomized), ``eta ** beta`` (asynchronous),
        ``eta ** (1 + k / N)`` (cyclic) and ``sqrt(Q / steps)`` otherwise.
    """
    variant, eta = schedule.variant, schedule.eta
    if variant == 'synchronous':
        return eta ** (k + 1)
    if variant == 'randomized':
        return eta ** (beta + 1)
    if variant == 'asynchronous':
        return eta ** beta
    if variant == 'cyclic':
        return eta ** (1. + float(k) / schedule.n_players)
    return math.sqrt(schedule.q_for(i) / steps_for(schedule, i, k, beta))
