"""Reference equilibria by exact deterministic iterations"""

# License: BSD (3-clause)

import numpy as np

from mne.utils import logger, verbose, warn

from ..contraction import ContractionReport, estimate_curvature
from ..defaults import _handle_default
from ..game import Profile, project, deterministic_gradient
from ..utils import ConvergenceError, PreflightError

_RESIDUAL_TOL = 1e-10


class ReferenceEquilibrium(object):
    """A computed Nash equilibrium and how it was certified

    Attributes
    ----------
    x_star : instance of Profile
        The equilibrium.
    method : str
        ``'jacobi'`` or ``'projected-gradient'``.
    residual : float
        Fixed-point gap ``||x* - xhat(x*)||`` of the proximal best
        response.
    n_iter : int
        Outer iterations of the method.
    agreement : float | None
        Max-abs distance to the cross-check solution, None when skipped.
    """

    def __init__(self, x_star, method, residual, n_iter, agreement=None):
        self.x_star = x_star
        self.method = method
        self.residual = float(residual)
        self.n_iter = int(n_iter)
        self.agreement = None if agreement is None else float(agreement)

    def to_dict(self):
        return dict(x_star=self.x_star.vector.tolist(),
                    dims=self.x_star.dims.tolist(), method=self.method,
                    residual=self.residual, n_iter=self.n_iter,
                    agreement=self.agreement)

    def __repr__(self):
        return '<ReferenceEquilibrium | %s, residual=%0.2e>' % (
            self.method, self.residual)


def _lipschitz(game, i, anchor, step=1e-6):
    """Lipschitz constant of player i's gradient, estimated when unset"""
    player = game.players[i]
    if player.lipschitz is not None:
        return float(player.lipschitz)
    x_i = anchor.block(i)
    hess = np.empty((player.dim, player.dim))
    for col in range(player.dim):
        shift = np.zeros(player.dim)
        shift[col] = step
        hess[:, col] = (player.det_grad(x_i + shift, anchor) -
                        player.det_grad(x_i - shift, anchor)) / (2 * step)
    # twice the local estimate, the gradient need not be linear
    return 2. * max(np.linalg.norm(hess, 2), 1e-3)


def proximal_response(game, i, anchor, tol=None, max_iter=None):
    """Exact proximal best response of player ``i`` at ``anchor``

    Minimizes the player's expected objective plus
    ``mu / 2 ||x_i - y_i||^2`` by projected gradient with step
    ``1 / (L_i + mu)``.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    i : int
        Player index.
    anchor : instance of Profile
        The anchor y.
    tol : float | None
        Stop when an iteration moves by at most ``tol``.
    max_iter : int | None
        Iteration limit.

    Returns
    -------
    x_i : array, shape (n_i,)
        The response.
    """
    params = _handle_default('equilibrium')
    tol = params['tol'] if tol is None else tol
    max_iter = params['inner_max_iter'] if max_iter is None else max_iter
    player = game.players[i]
    mu = game.mu
    y_i = anchor.block(i)
    step = 1. / (_lipschitz(game, i, anchor) + mu)
    z = y_i.copy()
    for _ in range(int(max_iter)):
        grad = deterministic_gradient(game, i, z, anchor) + mu * (z - y_i)
        z_new = project(player.box, z - step * grad)
        if np.linalg.norm(z_new - z) <= tol:
            return z_new
        z = z_new
    raise ConvergenceError('proximal response of player %d did not converge '
                           'in %d iterations' % (i, max_iter),
                           estimate=z)


def best_response_map(game, profile, tol=None, max_iter=None):
    """The exact proximal best-response map applied to every player"""
    return Profile.from_blocks([proximal_response(game, i, profile, tol,
                                                  max_iter)
                                for i in range(game.n_players)])


def _jacobi(game, x0, tol, max_iter, inner_max_iter):
    x = x0
    for it in range(1, int(max_iter) + 1):
        x_new = best_response_map(game, x, tol * 1e-2, inner_max_iter)
        change = np.linalg.norm(x_new.vector - x.vector)
        x = x_new
        if change <= tol:
            return x, it
    raise ConvergenceError('Jacobi best-response iteration did not converge '
                           'in %d iterations' % max_iter, estimate=x)


def _stacked_gradient(game, profile):
    return np.concatenate([deterministic_gradient(game, i, profile.block(i),
                                                  profile)
                           for i in range(game.n_players)])


def _projected_gradient(game, x0, bounds, tol, max_iter):
    lipschitz = max(_lipschitz(game, i, x0) for i in range(game.n_players))
    step = 1. / (lipschitz + bounds.zeta_offmax.sum(axis=1).max())
    x = x0
    for it in range(1, int(max_iter) + 1):
        moved = x.vector - step * _stacked_gradient(game, x)
        x_new = Profile.from_blocks([project(p.box, moved[x.block_slice(i)])
                                     for i, p in enumerate(game.players)])
        change = np.linalg.norm(x_new.vector - x.vector)
        x = x_new
        if change <= tol * step:
            return x, it
    raise ConvergenceError('projected gradient did not converge in %d '
                           'iterations' % max_iter, estimate=x)


@verbose
def reference_equilibrium(game, x0=None, cross_check=True, force=False,
                          equilibrium_params=None, verbose=None):
    """Compute the Nash equilibrium of a contractive game

    Iterates the exact proximal best-response map (a Jacobi sweep whose
    subproblems are solved by projected gradient) to its fixed point and
    cross-checks the result with projected gradient on the stacked game
    map. Recourse players enter through their expected subgradient.

    Parameters
    ----------
    game : instance of GameSpec
        The game.
    x0 : array-like | None
        Starting profile, the lower corner of X when None.
    cross_check : bool
        If True, also run the stacked projected-gradient method and
        require both to agree.
    force : bool
        If True, run even when no contraction norm is below one.
    equilibrium_params : dict | None
        Overrides of ``DEFAULTS['equilibrium']``.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    ref : instance of ReferenceEquilibrium
        The equilibrium with its residual and agreement.
    """
    params = _handle_default('equilibrium', equilibrium_params)
    bounds = game.curvature
    if bounds is None:
        bounds = estimate_curvature(game, random_state=0, verbose=False)
    report = ContractionReport(bounds, game.mu)
    if not (report.ok_2norm or report.ok_infnorm):
        msg = ('best-response map of %s is not certified contractive '
               '(a2=%0.6f, a_inf=%0.6f)' % (game.name, report.a2,
                                            report.a_inf))
        if not force:
            raise PreflightError(msg, report=report)
        warn(msg + ', continuing since force=True')
    logger.info('Computing the reference equilibrium of %s' % game.name)
    start = game.initial_profile(x0)
    x_star, n_iter = _jacobi(game, start, params['tol'], params['max_iter'],
                             params['inner_max_iter'])
    residual = np.linalg.norm(
        x_star.vector - best_response_map(game, x_star, params['tol'] * 1e-2,
                                          params['inner_max_iter']).vector)
    logger.info('    Jacobi converged in %d iterations, residual %0.2e'
                % (n_iter, residual))
    if residual > _RESIDUAL_TOL:
        warn('Reference equilibrium residual %0.2e exceeds %g'
             % (residual, _RESIDUAL_TOL))
    agreement = None
    if cross_check:
        x_pg, n_pg = _projected_gradient(game, start, bounds, params['tol'],
                                         params['max_iter'])
        agreement = float(np.max(np.abs(x_pg.vector - x_star.vector)))
        logger.info('    projected gradient converged in %d iterations, '
                    'max difference %0.2e' % (n_pg, agreement))
        if agreement > params['agreement_tol']:
            raise ConvergenceError('Jacobi and projected-gradient equilibria '
                                   'differ by %0.2e' % agreement,
                                   estimate=agreement)
    return ReferenceEquilibrium(x_star, 'jacobi', residual, n_iter, agreement)
