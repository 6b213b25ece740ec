"""Projected stochastic-approximation inner solver"""

# License: BSD (3-clause)

import numpy as np

from ..defaults import _handle_default
from ..utils import StepCeilingError, _check_int


def _check_start(player, start, step_ceiling, steps):
    steps = _check_int(steps, 'steps', 1)
    if step_ceiling is None:
        step_ceiling = _handle_default('sa')['step_ceiling']
    if steps > step_ceiling:
        raise StepCeilingError('%d SA steps exceed the ceiling of %d'
                               % (steps, step_ceiling), steps=steps)
    start = np.atleast_1d(np.asarray(start, dtype=float))
    if not player.box.contains(start):
        raise ValueError('start %s is not in the strategy set of player %d'
                         % (start.tolist(), player.index))
    return start, steps


def _chunked_draws(draw, rng, size, chunk=None):
    """Iterate over the rows of ``draw(rng, size)``, ``chunk`` rows per draw

    The rows are the same for any ``chunk`` as long as ``draw`` consumes
    ``rng`` row by row.
    """
    if chunk is None:
        chunk = _handle_default('sa')['noise_chunk']
    chunk = _check_int(chunk, 'noise_chunk', 1)

    def rows():
        for first in range(0, size, chunk):
            for row in draw(rng, min(chunk, size - first)):
                yield row
    return rows()


def _projected_steps(player, mu, anchor, start, steps, noise=None,
                     extra=None, return_path=False):
    """Run ``steps - 1`` projected SA steps from ``start``

    ``noise`` yields one row of variates per step and ``extra(t, z)`` adds
    a term (a recourse subgradient) to the direction of step ``t``.
    """
    lower, upper = player.box.lower, player.box.upper
    y_i = anchor.block(player.index)
    det_grad, stoch_grad = player.det_grad, player.stoch_grad
    z = start.copy()
    path = [z.copy()] if return_path else None
    for t in range(1, steps):
        if noise is None:
            grad = det_grad(z, anchor)
        else:
            grad = stoch_grad(z, anchor, next(noise))
        if extra is not None:
            grad = grad + extra(t, z)
        z = np.minimum(np.maximum(z - (grad + mu * (z - y_i)) / (mu * (t + 1)),
                                  lower), upper)
        if return_path:
            path.append(z.copy())
    return np.array(path) if return_path else z


def sa_solve(game, i, anchor, start, steps, stream, return_path=False,
             step_ceiling=None, noise_chunk=None):
    """Inexact proximal best response by projected SA

    Starting from ``z_1 = start``, performs ``steps - 1`` updates
    ``z_{t+1} = P[z_t - g_t (grad_t + mu (z_t - y_i))]`` with
    ``g_t = 1 / (mu (t + 1))``, where ``grad_t`` is a sampled gradient of
    player ``i`` at ``z_t`` against the rivals in ``anchor`` and ``y_i``
    is the own block of ``anchor``.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    i : int
        Player index.
    anchor : instance of Profile
        The proximal anchor. For the asynchronous scheme this is the
        delayed view, whose own block is the current strategy.
    start : array, shape (n_i,)
        Starting point, must be feasible.
    steps : int
        The iterate index J to return; ``steps=1`` returns ``start``.
    stream : instance of SampleStream
        The keyed stream of this inner solve.
    return_path : bool
        If True, return all iterates ``z_1, ..., z_J``.
    step_ceiling : int | None
        Largest allowed ``steps``, defaults to
        ``DEFAULTS['sa']['step_ceiling']``.
    noise_chunk : int | None
        Number of noise rows drawn at a time, defaults to
        ``DEFAULTS['sa']['noise_chunk']``. The result does not depend
        on it.

    Returns
    -------
    z : array, shape (n_i,) or (steps, n_i)
        The last iterate, or the whole path.
    """
    player = game.players[i]
    start, steps = _check_start(player, start, step_ceiling, steps)
    noise = None
    if player.noisy and steps > 1:
        noise = _chunked_draws(player.draw_noise, stream.generator,
                               steps - 1, noise_chunk)
    return _projected_steps(player, game.mu, anchor, start, steps, noise,
                            return_path=return_path)
