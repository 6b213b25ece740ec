"""Experiment orchestration and result files"""

# License: BSD (3-clause)

import json
import os
import os.path as op

import numpy as np

from mne.utils import logger, verbose, warn

from ..contraction import preflight
from ..metrics import (reference_equilibrium, RunMetrics, BoundInputs,
                       theoretical_bounds, bound_dominance_report,
                       default_eps_grid, fit_inverse_square, fit_log_linear,
                       k_of_epsilon)
from ..schemes import (run_synchronous, run_randomized, run_asynchronous,
                       run_cyclic, run_sg_baseline, run_trajectories)

RUNNERS = dict(synchronous=run_synchronous, randomized=run_randomized,
               poisson=run_randomized, asynchronous=run_asynchronous,
               cyclic=run_cyclic, sg=run_sg_baseline)
_RANDOMIZED = ('randomized', 'poisson')


def _write_json(fname, data):
    with open(fname, 'w') as fid:
        json.dump(data, fid, sort_keys=True, indent=2, allow_nan=True)
        fid.write('\n')
    return fname


def _write_csv(frame, fname):
    frame.to_csv(fname, index=False, float_format='%.17g')
    return fname


def _preflight_kind(kind):
    # the SG baseline is certified like the synchronous scheme
    return 'synchronous' if kind == 'sg' else kind


def _versions():
    import mne
    import scipy
    from .. import __version__
    return dict(nash_sandbox=__version__, numpy=np.__version__,
                scipy=scipy.__version__, mne=mne.__version__)


class _Setup(object):
    """Everything a run needs before trajectories are drawn"""

    def __init__(self, cfg, force=None):
        force = cfg.force if force is None else force
        self.cfg = cfg
        self.scheme = cfg.scheme_config()
        self.game = cfg.build_game(verbose=False)
        self.report = preflight(self.game, _preflight_kind(self.scheme.kind),
                                force=force)
        self.ref = reference_equilibrium(self.game, x0=self.scheme.x0,
                                         force=force)
        self.schedule = None
        if self.scheme.kind != 'sg':
            self.schedule = cfg.build_schedule(self.game, self.report)
        self.p = None
        if self.scheme.kind in _RANDOMIZED:
            self.p = self.scheme.probabilities(self.game.n_players)

    @property
    def initial_error(self):
        """Largest blockwise distance of x_0 to the equilibrium"""
        x0 = self.game.initial_profile(self.scheme.x0)
        x_star = self.ref.x_star
        return float(max(np.linalg.norm(x0.block(i) - x_star.block(i))
                         for i in range(self.game.n_players)))

    def run(self):
        return run_trajectories(RUNNERS[self.scheme.kind], self.game,
                                self.scheme, self.schedule)


def _bound_inputs(setup):
    cfg, schedule = setup.cfg, setup.schedule
    return BoundInputs.from_report(
        setup.report, schedule.eta, setup.initial_error,
        q_const=schedule.q_const if schedule.q_const.size > 1
        else float(schedule.q_const[0]),
        p=setup.p, b1=setup.scheme.b1, b2=setup.scheme.b2,
        delta=cfg.experiment['delta'])


def _audit(setup, metrics=None):
    """Theoretical bounds of the setup, compared with ``metrics`` if any"""
    cfg, kind = setup.cfg, setup.scheme.kind
    if kind == 'sg':
        return dict(skipped='no bounds for the SG baseline')
    if setup.schedule.eta is None:
        return dict(skipped='the %s schedule has no geometric base'
                    % setup.schedule.variant)
    exp = cfg.experiment
    n_iter = setup.scheme.max_iter if metrics is None else metrics.n_iter
    try:
        bounds = theoretical_bounds(_bound_inputs(setup), kind,
                                    eps=exp['target'],
                                    n_iter=max(n_iter, exp['bound_k']),
                                    confidence=exp['confidence'])
    except ValueError as err:
        warn('Bound audit skipped: %s' % err)
        return dict(skipped=str(err))
    bounds['schedule'] = setup.schedule.to_dict()
    # the envelopes assume inner accuracy eta ** (k + 1)
    bounds['schedule_matches_theory'] = setup.schedule.variant == (
        'randomized' if kind in _RANDOMIZED else kind)
    if metrics is not None:
        empirical = metrics.inf_metric if bounds['norm'] == 'inf' \
            else metrics.u_k
        se = None if bounds['norm'] == 'inf' else metrics.u_se
        bounds['dominance'] = bound_dominance_report(
            empirical, bounds['envelope'], se=se)
        if metrics.weighted is not None:
            bounds['dominance_p'] = bound_dominance_report(
                metrics.weighted, bounds['envelope_p'])
        if not bounds['dominance']['dominated']:
            warn('Empirical errors exceed the theoretical envelope at k=%s'
                 % bounds['dominance']['violations'])
    return bounds


def _eps_grid(cfg, u0):
    exp = cfg.experiment
    if exp['eps'] is not None:
        return np.sort(np.asarray(exp['eps'], dtype=float))[::-1]
    return default_eps_grid(u0, exp['target'], exp['n_eps'])


def _complexity(metrics, eps):
    """K(eps) table and its inverse-square fit"""
    import pandas as pd
    counts = metrics.k_of_epsilon(eps)
    rounds = k_of_epsilon(metrics.u_k, metrics.comm_rounds, eps)
    table = pd.DataFrame(dict(eps=eps, sg_steps=counts, comm_rounds=rounds))
    try:
        fit = fit_inverse_square(eps, counts)
    except ValueError as err:
        fit = dict(skipped=str(err))
    return table, fit


@verbose
def run_preflight(cfg, force=None, out=None, verbose=None):
    """Contraction report of a configuration

    Parameters
    ----------
    cfg : instance of ExperimentConfig
        The configuration.
    force : bool | None
        Override of ``cfg.experiment['force']``.
    out : str | None
        If given, directory to write ``preflight.json`` to.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    report : dict
        The ContractionReport with the game's condition margin.
    """
    force = cfg.force if force is None else force
    scheme = cfg.scheme_config()
    game = cfg.build_game()
    report = preflight(game, _preflight_kind(scheme.kind), force=force)
    data = report.to_dict()
    data.update(game=cfg.game, kind=scheme.kind,
                ok=bool(report.ok_for(_preflight_kind(scheme.kind))),
                condition_margin=cfg.game_config().condition_margin())
    if out is not None:
        os.makedirs(out, exist_ok=True)
        _write_json(op.join(out, 'preflight.json'), data)
    return data


@verbose
def run_bounds(cfg, force=None, out=None, verbose=None):
    """Evaluate the theoretical bounds of a configuration

    No trajectories are drawn; the reference equilibrium supplies the
    initial error C.
    """
    setup = _Setup(cfg, force)
    audit = _audit(setup)
    audit['x_star'] = setup.ref.x_star.vector.tolist()
    if out is not None:
        os.makedirs(out, exist_ok=True)
        _write_json(op.join(out, 'bounds.json'), audit)
    return audit


@verbose
def run_experiment(cfg, force=None, verbose=None):
    """Run an experiment and write its artifacts

    Writes to ``cfg.out``: ``preflight.json``, ``equilibrium.json``,
    one CSV per trajectory under ``trajectories/``, the aggregate
    ``metrics.csv``, the ``k_of_eps.csv`` table, ``bounds.json`` (when
    ``cfg.experiment['audit']``) and ``manifest.json``.

    Parameters
    ----------
    cfg : instance of ExperimentConfig
        The configuration.
    force : bool | None
        Override of ``cfg.experiment['force']``.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    summary : dict
        Output files and headline numbers.
    """
    out = cfg.out
    os.makedirs(op.join(out, 'trajectories'), exist_ok=True)
    logger.info('Experiment %s, writing to %s' % (cfg.name, out))
    setup = _Setup(cfg, force)
    files = dict()
    files['preflight'] = _write_json(op.join(out, 'preflight.json'),
                                     setup.report.to_dict())
    files['equilibrium'] = _write_json(op.join(out, 'equilibrium.json'),
                                       setup.ref.to_dict())
    records = setup.run()
    x_star = setup.ref.x_star
    traj_files = list()
    for record in records:
        traj_files.append(_write_csv(
            record.to_frame(x_star),
            op.join(out, 'trajectories',
                    'trajectory_%03d.csv' % record.trajectory)))
    files['trajectories'] = traj_files
    metrics = RunMetrics(records, x_star, p=setup.p)
    files['metrics'] = _write_csv(metrics.to_frame(),
                                  op.join(out, 'metrics.csv'))
    summary = dict(name=cfg.name, kind=setup.scheme.kind,
                   n_trajectories=len(records), n_failed=metrics.n_failed,
                   u_final=float(metrics.u_k[-1]),
                   sg_steps=metrics.sg_counts[-1].tolist())
    try:
        eps = _eps_grid(cfg, metrics.u_k[0])
    except ValueError as err:
        warn('No accuracy grid: %s' % err)
        eps = None
    if eps is not None:
        table, fit = _complexity(metrics, eps)
        files['k_of_eps'] = _write_csv(table, op.join(out, 'k_of_eps.csv'))
        summary['fit'] = fit
        target = metrics.k_of_epsilon(cfg.experiment['target'])[0]
        summary['target_steps'] = None if np.isnan(target) else \
            float(target)
    if metrics.n_iter >= 3 and np.all(metrics.u_k > 0):
        summary['log_linear'] = fit_log_linear(metrics.u_k)
    if cfg.experiment['audit']:
        audit = _audit(setup, metrics)
        files['bounds'] = _write_json(op.join(out, 'bounds.json'), audit)
        if 'dominance' in audit:
            summary['dominated'] = audit['dominance']['dominated']
    manifest = dict(config=cfg.to_dict(), seed=setup.scheme.seed,
                    versions=_versions(),
                    schedule=None if setup.schedule is None
                    else setup.schedule.to_dict(),
                    files=sorted(op.relpath(f, out) for f in
                                 _flatten(files.values())))
    files['manifest'] = _write_json(op.join(out, 'manifest.json'), manifest)
    summary['files'] = dict((k, v) for k, v in files.items()
                            if k != 'trajectories')
    logger.info('    u_K = %0.3e after %d iterations'
                % (metrics.u_k[-1], metrics.n_iter))
    return summary


def _flatten(values):
    for value in values:
        if isinstance(value, list):
            for item in value:
                yield item
        else:
            yield value


@verbose
def compare_with_sg(cfg, force=None, out=None, verbose=None):
    """Compare the inexact best-response scheme with the SG baseline

    Both methods run on the configured game with the same seed. The
    baseline takes ``cfg.experiment['sg_rounds']`` communication rounds,
    each one projected stochastic gradient step per player; the inexact
    scheme communicates once per major iteration.

    Returns
    -------
    result : dict
        Per method, the K(eps) table in SG steps and communication rounds
        on a common accuracy grid, and the counter identities.
    """
    import pandas as pd
    if cfg.scheme['kind'] == 'sg':
        raise ValueError('compare needs an inexact best-response scheme, '
                         'got the sg kind')
    setup = _Setup(cfg, force)
    br_records = setup.run()
    br = RunMetrics(br_records, setup.ref.x_star)
    sg_cfg = cfg.copy(scheme=dict(kind='sg',
                                  max_iter=cfg.experiment['sg_rounds']))
    sg_scheme = sg_cfg.scheme_config()
    sg_records = run_trajectories(run_sg_baseline, setup.game, sg_scheme)
    sg = RunMetrics(sg_records, setup.ref.x_star)
    eps = _eps_grid(cfg, br.u_k[0])
    frame = pd.DataFrame(dict(
        eps=eps, br_steps=br.k_of_epsilon(eps),
        br_rounds=k_of_epsilon(br.u_k, br.comm_rounds, eps),
        sg_steps=sg.k_of_epsilon(eps),
        sg_rounds=k_of_epsilon(sg.u_k, sg.comm_rounds, eps)))
    # one communication round per SG step and per major iteration
    identities = dict(
        sg_rounds_equal_steps=bool(np.array_equal(
            sg.comm_rounds, sg.sg_counts.max(axis=1))),
        br_rounds_equal_iterations=bool(np.array_equal(
            br.comm_rounds, np.arange(br.n_iter + 1))))
    result = dict(table=frame.to_dict(orient='list'), identities=identities,
                  br_u_final=float(br.u_k[-1]), sg_u_final=float(sg.u_k[-1]))
    if out is not None:
        os.makedirs(out, exist_ok=True)
        _write_csv(frame, op.join(out, 'compare.csv'))
        _write_json(op.join(out, 'compare.json'), result)
    return result


def fit_metrics_file(fname, target=None, n_eps=None, intercept=False):
    """K(eps) fit of an aggregate ``metrics.csv``

    Parameters
    ----------
    fname : str
        A metrics file written by :func:`run_experiment`.
    target : float | None
        Smallest accuracy, ``DEFAULTS['experiment']['target']`` if None.
    n_eps : int | None
        Grid size, ``DEFAULTS['experiment']['n_eps']`` if None.
    intercept : bool
        Fit a constant as well.

    Returns
    -------
    fit : dict
        The fit of :func:`nash_sandbox.metrics.fit_inverse_square` with the
        grid and counts it used.
    """
    import pandas as pd
    from ..defaults import _handle_default
    exp = _handle_default('experiment')
    target = exp['target'] if target is None else target
    n_eps = exp['n_eps'] if n_eps is None else n_eps
    frame = pd.read_csv(fname)
    missing = set(('u_k', 'sg_cum_p1')) - set(frame.columns)
    if len(missing) > 0:
        raise ValueError('%s is not a metrics file, missing columns %s'
                         % (fname, sorted(missing)))
    counts = frame[[c for c in frame.columns
                    if c.startswith('sg_cum_p')]].values
    u = frame['u_k'].values
    eps = default_eps_grid(u[0], target, n_eps)
    k_eps = k_of_epsilon(u, counts, eps)
    fit = fit_inverse_square(eps, k_eps, intercept=intercept)
    fit.update(eps=eps.tolist(), counts=k_eps.tolist())
    return fit


@verbose
def complexity_table(cfg, mus, kappas, force=None, verbose=None):
    """SG steps per player to reach the target accuracy for each (mu, kappa)

    Returns
    -------
    table : instance of pandas.DataFrame
        Columns ``mu``, ``kappa``, ``eta`` and ``sg_steps`` (NaN when the
        target was not reached within ``max_iter`` iterations).
    """
    import pandas as pd
    rows = list()
    target = cfg.experiment['target']
    for mu in mus:
        for kappa in kappas:
            this = cfg.copy(game_params=dict(mu=float(mu)),
                            schedule=dict(kappa=float(kappa), eta=None))
            logger.info('    mu=%s, kappa=%s' % (mu, kappa))
            setup = _Setup(this, force)
            metrics = RunMetrics(setup.run(), setup.ref.x_star)
            rows.append(dict(mu=float(mu), kappa=float(kappa),
                             eta=setup.schedule.eta,
                             sg_steps=metrics.k_of_epsilon(target)[0]))
    return pd.DataFrame(rows, columns=['mu', 'kappa', 'eta', 'sg_steps'])


@verbose
def dominance_table(cfg, mus=(1., 2., 5.), exponents=(0.5, 0.75, 1.),
                    k=None, force=None, verbose=None):
    """Empirical error against the theoretical envelope at iteration k

    Each cell sets the proximal weight ``mu`` and ``eta = a ** exponent``
    through ``kappa = 2 exponent``, with ``a = ||Gamma||_inf`` for the
    delayed schemes.

    Returns
    -------
    table : instance of pandas.DataFrame
        Columns ``mu``, ``exponent``, ``eta``, ``empirical``,
        ``theoretical`` and ``ok``.
    """
    import pandas as pd
    k = cfg.experiment['bound_k'] if k is None else int(k)
    rows = list()
    for mu in mus:
        for exponent in exponents:
            this = cfg.copy(game_params=dict(mu=float(mu)),
                            schedule=dict(kappa=2. * exponent, eta=None),
                            scheme=dict(max_iter=k),
                            experiment=dict(bound_k=k))
            setup = _Setup(this, force)
            metrics = RunMetrics(setup.run(), setup.ref.x_star)
            audit = _audit(setup, metrics)
            if 'skipped' in audit:
                raise ValueError('cannot bound cell mu=%s, exponent=%s: %s'
                                 % (mu, exponent, audit['skipped']))
            empirical = metrics.inf_metric if audit['norm'] == 'inf' \
                else metrics.u_k
            rows.append(dict(mu=float(mu), exponent=float(exponent),
                             eta=setup.schedule.eta,
                             empirical=float(empirical[k]),
                             theoretical=float(audit['envelope'][k]),
                             ok=bool(empirical[k] <= audit['envelope'][k])))
    return pd.DataFrame(rows, columns=['mu', 'exponent', 'eta', 'empirical',
                                       'theoretical', 'ok'])


@verbose
def delay_sweep(cfg, b2s=(0, 4, 8, 12), force=None, verbose=None):
    """Asynchronous runs over a range of delay bounds

    Returns
    -------
    table : instance of pandas.DataFrame
        Columns ``b2``, ``sg_steps`` (to reach the target accuracy),
        ``u_final`` and ``dominated`` (by the delayed envelope).
    """
    import pandas as pd
    if cfg.scheme['kind'] not in ('asynchronous', 'cyclic'):
        raise ValueError('the delay sweep needs the asynchronous or cyclic '
                         'scheme, got %s' % cfg.scheme['kind'])
    rows = list()
    target = cfg.experiment['target']
    for b2 in b2s:
        this = cfg.copy(scheme=dict(b2=int(b2)))
        logger.info('    B2=%d' % b2)
        setup = _Setup(this, force)
        metrics = RunMetrics(setup.run(), setup.ref.x_star)
        audit = _audit(setup, metrics)
        dominated = audit['dominance']['dominated'] \
            if 'dominance' in audit else None
        rows.append(dict(b2=int(b2),
                         sg_steps=metrics.k_of_epsilon(target)[0],
                         u_final=float(metrics.u_k[-1]),
                         dominated=dominated))
    return pd.DataFrame(rows, columns=['b2', 'sg_steps', 'u_final',
                                       'dominated'])
