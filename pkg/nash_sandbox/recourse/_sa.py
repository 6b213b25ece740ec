"""Recourse-aware SA inner solver"""

# License: BSD (3-clause)

from ..sa._solver import _check_start, _chunked_draws, _projected_steps

# child key of the inner-solve stream that feeds the scenarios
SCENARIOS = 0


def sa_solve_recourse(game, i, anchor, start, steps, stream,
                      return_path=False, step_ceiling=None, noise_chunk=None):
    """Inexact proximal best response for a two-stage player

    Like :func:`nash_sandbox.sa.sa_solve`, with the direction of step t
    augmented by a subgradient of the second-stage value at ``z_t`` for a
    fresh scenario. Gradient noise is drawn from ``stream`` and scenarios
    from its child ``stream.spawn(SCENARIOS)``.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    i : int
        Player index; the player must carry a recourse problem.
    anchor : instance of Profile
        The proximal anchor (or delayed view).
    start : array, shape (n_i,)
        Feasible starting point.
    steps : int
        The iterate index J to return.
    stream : instance of SampleStream
        The keyed stream of this inner solve.
    return_path : bool
        If True, return all iterates.
    step_ceiling : int | None
        Largest allowed ``steps``.
    noise_chunk : int | None
        Number of rows drawn at a time, see
        :func:`nash_sandbox.sa.sa_solve`.

    Returns
    -------
    z : array, shape (n_i,) or (steps, n_i)
        The last iterate, or the whole path.
    """
    player = game.players[i]
    problem = player.recourse
    if problem is None:
        raise ValueError('player %d has no recourse problem' % i)
    start, steps = _check_start(player, start, step_ceiling, steps)
    noise = samples = None
    if steps > 1:
        if player.noisy:
            noise = _chunked_draws(player.draw_noise, stream.generator,
                                   steps - 1, noise_chunk)
        samples = _chunked_draws(problem.draw,
                                 stream.spawn(SCENARIOS).generator,
                                 steps - 1, noise_chunk)

    def extra(t, z):
        return problem.subgradient(z, next(samples))

    return _projected_steps(player, game.mu, anchor, start, steps, noise,
                            extra=extra, return_path=return_path)
