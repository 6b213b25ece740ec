"""Major-iteration loops of the best-response schemes"""

# License: BSD (3-clause)

import logging

import numpy as np

from mne.utils import logger, verbose, warn, ProgressBar

from ..game import (Profile, SampleStream, GRADIENT, ACTIVATION, DELAY,
                    UPDATE_SETS, RUN, project, sample_stoch_grad)
from ..recourse import sa_solve_recourse
from ..sa import sa_solve, steps_for
from ..utils import StepCeilingError, _check_positive
from ._buffer import DelayBuffer, delayed_view
from ._config import (generate_update_sets, validate_update_sets,
                      cyclic_update_sets)
from ._record import TrajectoryRecord


def _trajectory_of(stream):
    return stream.key[0] if len(stream.key) > 0 else 0


def _inner_solve(game, i, anchor, start, steps, stream):
    if game.players[i].recourse is None:
        return sa_solve(game, i, anchor, start, steps, stream)
    return sa_solve_recourse(game, i, anchor, start, steps, stream)


def _draw_delays(config, n_players, stream):
    """Delay matrix tau[i, j] with a zero diagonal"""
    if config.b2 == 0:
        return np.zeros((n_players, n_players), int)
    if config.delay == 'fixed':
        delays = np.full((n_players, n_players), config.b2, int)
    else:
        delays = stream.generator.integers(0, config.b2 + 1,
                                           (n_players, n_players))
    np.fill_diagonal(delays, 0)
    return delays


def _loop(game, config, schedule, stream, active_for, delayed=False):
    """Shared loop; ``active_for(k)`` returns the players updating at k"""
    n_players = game.n_players
    x = game.initial_profile(config.x0)
    record = TrajectoryRecord(x, config.kind, _trajectory_of(stream))
    buffer = DelayBuffer(config.b2, x) if delayed else None
    beta = np.zeros(n_players, int)
    for k in range(config.max_iter):
        active = sorted(int(i) for i in active_for(k))
        steps = np.zeros(n_players, int)
        try:
            for i in active:
                steps[i] = steps_for(schedule, i, k, int(beta[i]))
        except StepCeilingError as err:
            record.error = str(err)
            warn('Trajectory %d of the %s scheme stopped at k=%d: %s'
                 % (record.trajectory, config.kind, k, err))
            break
        delays = None
        if delayed:
            delays = _draw_delays(config, n_players, stream.spawn(DELAY, k))
        blocks = list(x.blocks)
        for i in active:
            anchor = x if delays is None else \
                delayed_view(buffer, delays[i], i)
            blocks[i] = _inner_solve(game, i, anchor, x.block(i), steps[i],
                                     stream.spawn(GRADIENT, i, k))
        x = Profile.from_blocks(blocks)
        if delayed:
            buffer.push(x)
        beta[active] += 1
        record.append(x, active, steps)
    return record


def run_synchronous(game, config, schedule, stream):
    """Synchronous inexact proximal best-response scheme

    Every player solves its proximal best response at the current profile
    with ``steps_for(schedule, i, k)`` SA steps, and the new strategies are
    exchanged once per iteration.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    config : instance of SchemeConfig
        ``max_iter`` and ``x0`` are used.
    schedule : instance of InnerSchedule
        The inner-step schedule.
    stream : instance of SampleStream
        The trajectory stream; inner solves use its ``(GRADIENT, i, k)``
        children.

    Returns
    -------
    record : instance of TrajectoryRecord
        The trajectory, with ``error`` set if a step count exceeded the
        schedule's ceiling.
    """
    everyone = list(range(game.n_players))
    return _loop(game, config, schedule, stream, lambda k: everyone)


def run_randomized(game, config, schedule, stream):
    """Randomized inexact proximal best-response scheme

    With ``config.kind == 'randomized'`` each player updates at iteration
    k independently with probability ``p_i``; with ``'poisson'`` exactly
    one player, chosen with probability proportional to its rate, updates.
    Activations are drawn from the ``(ACTIVATION, k)`` child of ``stream``
    and step counts use each player's own update counter.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    config : instance of SchemeConfig
        The configuration, of kind ``'randomized'`` or ``'poisson'``.
    schedule : instance of InnerSchedule
        The inner-step schedule.
    stream : instance of SampleStream
        The trajectory stream.

    Returns
    -------
    record : instance of TrajectoryRecord
        The trajectory.
    """
    n_players = game.n_players
    if config.kind not in ('randomized', 'poisson'):
        raise ValueError('run_randomized needs a randomized or poisson '
                         'configuration, got %r' % config.kind)
    probs = config.probabilities(n_players)
    if probs.shape != (n_players,):
        raise ValueError('need %d activation probabilities, got %d'
                         % (n_players, probs.size))

    def active_for(k):
        rng = stream.spawn(ACTIVATION, k).generator
        if config.kind == 'poisson':
            return [rng.choice(n_players, p=probs)]
        return np.where(rng.random(n_players) < probs)[0]

    return _loop(game, config, schedule, stream, active_for)


def _update_sets(config, n_players):
    if config.update_sets is not None:
        sets = config.update_sets
        if len(sets) < config.max_iter:
            raise ValueError('%d update sets given for %d iterations'
                             % (len(sets), config.max_iter))
        validate_update_sets(sets, n_players, config.b1)
        return sets
    rng = SampleStream(config.seed, (RUN, UPDATE_SETS)).generator
    return generate_update_sets(n_players, config.max_iter, config.b1, rng,
                                config.update_prob)


def run_asynchronous(game, config, schedule, stream):
    """Asynchronous inexact proximal best-response scheme

    At iteration k the players in I_k solve a proximal best response
    anchored at their current strategy against rival strategies read with
    delays ``tau[i, j]`` in ``{0, ..., b2}``. The update sets come from
    ``config.update_sets`` or are generated once per run from the seed
    and are checked against the ``b1`` window condition before running.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    config : instance of SchemeConfig
        ``b1``, ``b2``, ``delay``, ``update_prob`` and ``update_sets`` are
        used.
    schedule : instance of InnerSchedule
        The inner-step schedule.
    stream : instance of SampleStream
        The trajectory stream; delays use its ``(DELAY, k)`` children.

    Returns
    -------
    record : instance of TrajectoryRecord
        The trajectory.
    """
    sets = _update_sets(config, game.n_players)
    return _loop(game, config, schedule, stream, lambda k: sets[k],
                 delayed=True)


def run_cyclic(game, config, schedule, stream):
    """Asynchronous scheme in which only player ``k mod N`` updates"""
    sets = cyclic_update_sets(game.n_players, config.max_iter)
    return _loop(game, config, schedule, stream, lambda k: sets[k],
                 delayed=True)


def _sg_modulus(game):
    from ..contraction import estimate_curvature
    bounds = game.curvature
    if bounds is None:
        bounds = estimate_curvature(game, random_state=0, verbose=False)
    margin = bounds.zeta_min - bounds.zeta_offmax.sum(axis=1)
    if np.min(margin) > 0:
        return float(np.min(margin))
    return float(np.min(bounds.zeta_min))


def run_sg_baseline(game, config, stream):
    """Projected stochastic gradient method

    Each communication round, every player takes one projected step
    ``x_i <- P[x_i - g_k G_i(x_k)]`` with ``g_k = 1 / (mu_sg (k + 1))``
    and a single sampled gradient ``G_i`` (plus a sampled recourse
    subgradient for two-stage players).

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    config : instance of SchemeConfig
        ``max_iter`` counts rounds; ``mu_sg`` overrides the modulus taken
        from the curvature bounds.
    stream : instance of SampleStream
        The trajectory stream.

    Returns
    -------
    record : instance of TrajectoryRecord
        The trajectory, one SG step per player per round.
    """
    mu_sg = config.mu_sg
    if mu_sg is None:
        mu_sg = _sg_modulus(game)
    mu_sg = _check_positive(mu_sg, 'mu_sg')
    n_players = game.n_players
    x = game.initial_profile(config.x0)
    record = TrajectoryRecord(x, config.kind, _trajectory_of(stream))
    everyone = list(range(n_players))
    ones = np.ones(n_players, int)
    for k in range(config.max_iter):
        step = 1. / (mu_sg * (k + 1))
        blocks = list()
        for i, player in enumerate(game.players):
            child = stream.spawn(GRADIENT, i, k)
            grad = sample_stoch_grad(player, x, child)
            if player.recourse is not None:
                sample = player.recourse.draw(child.generator, 1)[0]
                grad = grad + player.recourse.subgradient(x.block(i), sample)
            blocks.append(project(player.box, x.block(i) - step * grad))
        x = Profile.from_blocks(blocks)
        record.append(x, everyone, ones)
    return record


@verbose
def run_trajectories(runner, game, config, schedule=None, verbose=None):
    """Run independent trajectories of a scheme

    Trajectory ``t`` uses the stream keyed ``(t,)`` under ``config.seed``,
    so runs are reproducible and trajectories are independent. Streams
    shared by all trajectories, such as the generated update sets, are
    keyed under ``(RUN,)``, which no trajectory id reaches.

    Parameters
    ----------
    runner : callable
        One of the ``run_*`` functions.
    game : instance of GameSpec
        The game.
    config : instance of SchemeConfig
        The configuration.
    schedule : instance of InnerSchedule | None
        The inner-step schedule; None for :func:`run_sg_baseline`.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    records : list of TrajectoryRecord
        One record per trajectory.
    """
    n_traj = config.n_trajectories
    logger.info('Running %d trajectories of the %s scheme on %s (K=%d)'
                % (n_traj, config.kind, game.name, config.max_iter))
    pbar = None
    if logger.getEffectiveLevel() <= logging.INFO:
        pbar = ProgressBar(n_traj, mesg='Trajectories')
    records = list()
    for traj in range(n_traj):
        stream = SampleStream(config.seed, (traj,))
        if schedule is None:
            record = runner(game, config, stream)
        else:
            record = runner(game, config, schedule, stream)
        records.append(record)
        if pbar is not None:
            pbar.update_with_increment_value(1)
    n_failed = sum(not r.completed for r in records)
    if n_failed > 0:
        warn('%d of %d trajectories stopped early' % (n_failed, n_traj))
    logger.info('    done, %d SG steps per player on average'
                % np.mean([r.sg_counts[-1].mean() for r in records]))
    return records
