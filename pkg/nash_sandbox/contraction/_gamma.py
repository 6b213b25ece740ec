"""Contraction matrix of the proximal best-response map"""

# License: BSD (3-clause)

import numpy as np

from mne.utils import logger, verbose, warn

from ..defaults import _handle_default
from ..game import Profile
from ..utils import ConvergenceError, PreflightError, _check_positive

# values this close to 1 are reported as failing and flagged
_UNITY_TOL = 1e-12


class CurvatureBounds(object):
    """Curvature bounds of the players' smooth objectives

    Parameters
    ----------
    zeta_min : array-like, shape (n_players,)
        Lower bounds on the smallest eigenvalue of each own-block Hessian.
    zeta_offmax : array-like, shape (n_players, n_players)
        Upper bounds on the norms of the cross Hessians, zero diagonal.
    """

    def __init__(self, zeta_min, zeta_offmax):
        zeta_min = np.atleast_1d(np.asarray(zeta_min, dtype=float))
        zeta_offmax = np.atleast_2d(np.asarray(zeta_offmax, dtype=float))
        n = zeta_min.size
        if zeta_min.ndim != 1 or zeta_offmax.shape != (n, n):
            raise ValueError('zeta_offmax must have shape (%d, %d), got %s'
                             % (n, n, zeta_offmax.shape))
        if np.any(zeta_min < 0) or np.any(zeta_offmax < 0):
            raise ValueError('curvature bounds must be nonnegative')
        if np.any(np.diag(zeta_offmax) != 0):
            raise ValueError('zeta_offmax must have a zero diagonal')
        self.zeta_min = zeta_min
        self.zeta_offmax = zeta_offmax

    @classmethod
    def uniform(cls, zeta_min, zeta_off):
        """Bounds with a scalar off-diagonal bound for every pair"""
        zeta_min = np.atleast_1d(np.asarray(zeta_min, dtype=float))
        n = zeta_min.size
        return cls(zeta_min, zeta_off * (np.ones((n, n)) - np.eye(n)))

    @property
    def n_players(self):
        return self.zeta_min.size

    @property
    def diag_dominant(self):
        """Whether every zeta_min exceeds the row sum of zeta_offmax"""
        return bool(np.all(self.zeta_min > self.zeta_offmax.sum(axis=1)))

    def to_dict(self):
        return dict(zeta_min=self.zeta_min.tolist(),
                    zeta_offmax=self.zeta_offmax.tolist())


def build_gamma(bounds, mu):
    """Build the contraction matrix

    Parameters
    ----------
    bounds : instance of CurvatureBounds
        The curvature bounds.
    mu : float
        The proximal weight.

    Returns
    -------
    gamma : array, shape (n_players, n_players)
        ``mu / (mu + zeta_min[i])`` on the diagonal and
        ``zeta_offmax[i, j] / (mu + zeta_min[i])`` off the diagonal.
    """
    mu = _check_positive(mu, 'mu')
    denom = mu + bounds.zeta_min
    gamma = bounds.zeta_offmax / denom[:, np.newaxis]
    gamma[np.diag_indices_from(gamma)] = mu / denom
    return gamma


def _check_square(gamma):
    gamma = np.atleast_2d(np.asarray(gamma, dtype=float))
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise ValueError('gamma must be a square matrix, got shape %s'
                         % (gamma.shape,))
    if np.any(gamma < 0):
        raise ValueError('gamma must be nonnegative')
    return gamma


def norm_inf(gamma):
    """Maximum absolute row sum"""
    gamma = _check_square(gamma)
    return float(np.abs(gamma).sum(axis=1).max())


def _power_iteration(matrix, tol, max_iter, what, symmetric=False):
    """Perron root of a nonnegative matrix from the normalized ones vector

    Symmetric matrices use the Rayleigh quotient. Otherwise the iteration
    runs on ``matrix + I`` so that periodic nonnegative matrices converge
    too, and the shift is removed from the estimate.
    """
    shift = 0. if symmetric else 1.
    shifted = matrix + shift * np.eye(len(matrix))
    x = np.ones(len(matrix)) / np.sqrt(len(matrix))
    estimate = np.nan
    for _ in range(int(max_iter)):
        y = np.dot(shifted, x)
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.
        new = np.dot(x, y) if symmetric else norm
        x = y / norm
        if abs(new - estimate) <= tol * abs(new):
            return new - shift
        estimate = new
    raise ConvergenceError('power iteration for the %s did not converge in '
                           '%d iterations' % (what, max_iter),
                           estimate=estimate - shift)


def norm_2(gamma, tol=None, max_iter=None):
    """Spectral norm by power iteration on gamma.T @ gamma

    Parameters
    ----------
    gamma : array, shape (n, n)
        A nonnegative square matrix.
    tol : float | None
        Relative tolerance, defaults to ``DEFAULTS['power']['tol']``.
    max_iter : int | None
        Iteration limit, defaults to ``DEFAULTS['power']['max_iter']``.

    Returns
    -------
    a2 : float
        The largest singular value.
    """
    gamma = _check_square(gamma)
    params = _handle_default('power')
    tol = params['tol'] if tol is None else tol
    max_iter = params['max_iter'] if max_iter is None else max_iter
    lam = _power_iteration(np.dot(gamma.T, gamma), tol, max_iter, '2-norm',
                           symmetric=True)
    return float(np.sqrt(max(lam, 0.)))


def spectral_radius(gamma, tol=None, max_iter=None):
    """Spectral radius of a nonnegative matrix by power iteration"""
    gamma = _check_square(gamma)
    params = _handle_default('power')
    tol = params['tol'] if tol is None else tol
    max_iter = params['max_iter'] if max_iter is None else max_iter
    return float(max(_power_iteration(gamma, tol, max_iter,
                                      'spectral radius'), 0.))


def check_assumptions(a2, a_inf, bounds):
    """Evaluate the contraction conditions

    Parameters
    ----------
    a2 : float
        The 2-norm of gamma.
    a_inf : float
        The infinity norm of gamma.
    bounds : instance of CurvatureBounds
        The bounds gamma was built from.

    Returns
    -------
    flags : dict
        ``ok_2norm``, ``ok_infnorm`` and ``ok_diag_dom`` booleans plus
        ``near_unity``, the list of norms within 1e-12 of 1.
    """
    near_unity = [name for name, value in (('a2', a2), ('a_inf', a_inf))
                  if abs(value - 1.) <= _UNITY_TOL]
    flags = dict(ok_2norm=bool(a2 < 1. and 'a2' not in near_unity),
                 ok_infnorm=bool(a_inf < 1. and 'a_inf' not in near_unity),
                 ok_diag_dom=bounds.diag_dominant,
                 near_unity=near_unity)
    if flags['ok_diag_dom'] and not flags['ok_infnorm'] and not near_unity:
        raise RuntimeError('diagonal dominance holds but the infinity norm '
                           'is %s >= 1' % a_inf)
    return flags


class ContractionReport(object):
    """Contraction matrix, its norms and the assumption flags

    Parameters
    ----------
    bounds : instance of CurvatureBounds
        The curvature bounds.
    mu : float
        The proximal weight.
    """

    def __init__(self, bounds, mu):
        self.bounds = bounds
        self.mu = _check_positive(mu, 'mu')
        self.gamma = build_gamma(bounds, mu)
        self.a2 = norm_2(self.gamma)
        self.a_inf = norm_inf(self.gamma)
        self.rho = spectral_radius(self.gamma)
        flags = check_assumptions(self.a2, self.a_inf, bounds)
        self.ok_2norm = flags['ok_2norm']
        self.ok_infnorm = flags['ok_infnorm']
        self.ok_diag_dom = flags['ok_diag_dom']
        self.near_unity = flags['near_unity']

    def ok_for(self, kind):
        """Whether the condition the given scheme relies on holds"""
        if kind in ('synchronous', 'randomized', 'poisson'):
            return self.ok_2norm
        if kind in ('asynchronous', 'cyclic'):
            return self.ok_diag_dom and self.ok_infnorm
        raise ValueError('unknown scheme kind %r' % (kind,))

    def to_dict(self):
        return dict(gamma=self.gamma.tolist(), a2=self.a2, a_inf=self.a_inf,
                    rho=self.rho, ok_2norm=self.ok_2norm,
                    ok_infnorm=self.ok_infnorm, ok_diag_dom=self.ok_diag_dom,
                    near_unity=list(self.near_unity), mu=self.mu,
                    zeta_min=self.bounds.zeta_min.tolist())

    def __repr__(self):
        return ('<ContractionReport | a2=%0.5f, a_inf=%0.5f, rho=%0.5f>'
                % (self.a2, self.a_inf, self.rho))


@verbose
def estimate_curvature(game, n_points=20, random_state=None, step=1e-6,
                       verbose=None):
    """Estimate curvature bounds by finite differences

    The Hessian blocks of every player's ``det_grad`` are approximated by
    central differences at random feasible profiles and the extreme
    eigenvalues and norms over the sample are returned. The result is a
    heuristic: it is not a certified bound for non-quadratic games.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    n_points : int
        Number of random profiles.
    random_state : int | None | instance of RandomState
        Seed for the sampled profiles.
    step : float
        Finite-difference step.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    bounds : instance of CurvatureBounds
        The estimated bounds.
    """
    rng = (random_state if isinstance(random_state, np.random.RandomState)
           else np.random.RandomState(random_state))
    dims = game.dims
    offsets = np.concatenate([[0], np.cumsum(dims)])
    lower = np.concatenate([p.box.lower for p in game.players])
    upper = np.concatenate([p.box.upper for p in game.players])
    n = game.n_players
    zeta_min = np.full(n, np.inf)
    zeta_off = np.zeros((n, n))
    logger.info('    Estimating curvature at %d random profiles' % n_points)
    for _ in range(int(n_points)):
        point = lower + rng.rand(lower.size) * (upper - lower)
        hess = np.empty((lower.size, lower.size))
        for col in range(lower.size):
            grads = list()
            for sign in (1., -1.):
                shifted = point.copy()
                shifted[col] += sign * step
                profile = Profile(shifted, dims)
                grads.append(np.concatenate(
                    [p.det_grad(profile.block(i), profile)
                     for i, p in enumerate(game.players)]))
            hess[:, col] = (grads[0] - grads[1]) / (2 * step)
        for i in range(n):
            rows = slice(offsets[i], offsets[i + 1])
            own = hess[rows, rows]
            zeta_min[i] = min(zeta_min[i],
                              np.linalg.eigvalsh((own + own.T) / 2.)[0])
            for j in range(n):
                if j != i:
                    cross = hess[rows, offsets[j]:offsets[j + 1]]
                    zeta_off[i, j] = max(zeta_off[i, j],
                                         np.linalg.norm(cross, 2))
    return CurvatureBounds(np.maximum(zeta_min, 0.), zeta_off)


@verbose
def preflight(game, kind='synchronous', force=False, verbose=None):
    """Certify the contraction condition a scheme relies on

    Parameters
    ----------
    game : instance of GameSpec
        The game. Its ``curvature`` is used when set, otherwise it is
        estimated with :func:`estimate_curvature`.
    kind : str
        The scheme, one of ``'synchronous'``, ``'randomized'``,
        ``'poisson'``, ``'asynchronous'`` or ``'cyclic'``. The first three
        need ``||Gamma||_2 < 1``, the last two diagonal dominance.
    force : bool
        If True, a failed check only warns.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    report : instance of ContractionReport
        The report.
    """
    logger.info('Contraction preflight for %s (%s scheme)'
                % (game.name, kind))
    bounds = game.curvature
    if bounds is None:
        warn('No analytic curvature bounds for %s, using a finite-difference '
             'estimate' % game.name)
        bounds = estimate_curvature(game, random_state=0, verbose=False)
    report = ContractionReport(bounds, game.mu)
    logger.info('    ||Gamma||_2 = %0.6f, ||Gamma||_inf = %0.6f, '
                'rho(Gamma) = %0.6f' % (report.a2, report.a_inf, report.rho))
    if len(report.near_unity) > 0:
        warn('Contraction norms within %g of 1: %s'
             % (_UNITY_TOL, ', '.join(report.near_unity)))
    if report.rho < 1 and not report.ok_2norm and not report.ok_infnorm:
        warn('Only the spectral radius is below 1; no convergence '
             'guarantee applies')
    if not report.ok_for(kind):
        msg = ('Contraction condition for the %s scheme fails '
               '(a2=%0.6f, a_inf=%0.6f, diagonal dominance %s)'
               % (kind, report.a2, report.a_inf, report.ok_diag_dom))
        if not force:
            raise PreflightError(msg, report=report)
        warn(msg + ', continuing since force=True')
    return report
