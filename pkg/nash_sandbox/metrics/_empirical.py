"""Empirical error series and iteration complexity of recorded runs"""

# License: BSD (3-clause)

import numpy as np

from mne.utils import warn

from ..game import Profile


def _error_stack(records, x_star):
    """Blockwise errors, shape (n_trajectories, n_iter + 1, n_players)"""
    records = list(records)
    if len(records) == 0:
        raise ValueError('need at least one trajectory')
    n_iter = min(r.n_iter for r in records)
    if any(r.n_iter != n_iter for r in records):
        warn('Trajectories have different lengths, truncating to %d '
             'iterations' % n_iter)
    return np.array([r.errors(x_star)[:n_iter + 1] for r in records])


def compute_u_k(records, x_star, return_se=False):
    """Mean stacked error ``u_k = E||(||x_{i,k} - x_i*||)_i||``

    Parameters
    ----------
    records : list of TrajectoryRecord
        The trajectories.
    x_star : instance of Profile | array
        The reference equilibrium.
    return_se : bool
        If True, also return the standard error of the mean.

    Returns
    -------
    u : array, shape (n_iter + 1,)
        The sample mean across trajectories.
    se : array, shape (n_iter + 1,)
        Only returned if ``return_se`` is True.
    """
    stacked = np.linalg.norm(_error_stack(records, x_star), axis=2)
    u = stacked.mean(axis=0)
    if not return_se:
        return u
    n = stacked.shape[0]
    se = stacked.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else \
        np.zeros_like(u)
    return u, se


def compute_inf_metric(records, x_star):
    """``max_i E||x_{i,k} - x_i*||`` per iteration"""
    return _error_stack(records, x_star).mean(axis=0).max(axis=1)


def compute_weighted_error(records, x_star, p):
    """``E||x_k - x*||_P`` with ``||x||_P^2 = sum_i ||x_i||^2 / p_i``"""
    err = _error_stack(records, x_star)
    p = np.broadcast_to(np.asarray(p, dtype=float), err.shape[2:])
    return np.sqrt((err ** 2 / p).sum(axis=2)).mean(axis=0)


def compute_variance(records):
    """Total variance of x_k across trajectories

    The trace of the sample covariance (``ddof=1``, zero for a single
    trajectory).
    """
    records = list(records)
    n_iter = min(r.n_iter for r in records)
    iterates = np.array([r.iterates[:n_iter + 1] for r in records])
    if len(records) < 2:
        return np.zeros(n_iter + 1)
    return iterates.var(axis=0, ddof=1).sum(axis=1)


def k_of_epsilon(u, sg_counts, eps):
    """Smallest cumulative SG count at which ``u_k < eps``

    Parameters
    ----------
    u : array, shape (n_iter + 1,)
        Error series.
    sg_counts : array, shape (n_iter + 1,) or (n_iter + 1, n_players)
        Cumulative SG steps per iteration, reduced by max over players
        when 2-D.
    eps : float | array-like
        Accuracy levels.

    Returns
    -------
    counts : array, shape (n_eps,)
        The counts, NaN where the series never gets below ``eps``.
    """
    u = np.asarray(u, dtype=float)
    counts = np.asarray(sg_counts, dtype=float)
    if counts.ndim == 2:
        counts = counts.max(axis=1)
    if counts.shape != u.shape:
        raise ValueError('u and sg_counts must cover the same iterations, '
                         'got %s and %s' % (u.shape, counts.shape))
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    out = np.full(eps.shape, np.nan)
    for j, e in enumerate(eps):
        below = np.where(u < e)[0]
        if len(below) > 0:
            out[j] = counts[below[0]]
    return out


def default_eps_grid(u0, target=2.5e-3, n_eps=12):
    """Geometric grid from ``u0 / 2`` down to ``target``"""
    if not u0 / 2. > target:
        raise ValueError('u0 / 2 = %s must exceed the target %s'
                         % (u0 / 2., target))
    return np.geomspace(u0 / 2., target, int(n_eps))


def fit_inverse_square(eps, counts, intercept=False):
    """Least-squares fit of ``K(eps) ~ c / eps^2 (+ b)``

    Parameters
    ----------
    eps : array-like
        Accuracy levels.
    counts : array-like
        K(eps); NaN entries are dropped.
    intercept : bool
        Whether to fit a constant too; the default fit goes through the
        origin.

    Returns
    -------
    fit : dict
        ``coef``, ``intercept``, ``r2`` and ``n_points``.
    """
    from sklearn.linear_model import LinearRegression
    from sklearn.metrics import r2_score
    eps = np.asarray(eps, dtype=float)
    counts = np.asarray(counts, dtype=float)
    keep = np.isfinite(counts) & np.isfinite(eps) & (eps > 0)
    eps, counts = eps[keep], counts[keep]
    if len(eps) < 3:
        raise ValueError('need at least 3 points to fit, got %d' % len(eps))
    if np.unique(eps).size < 2:
        raise ValueError('the eps grid is degenerate')
    X = (1. / eps ** 2)[:, np.newaxis]
    model = LinearRegression(fit_intercept=intercept).fit(X, counts)
    r2 = r2_score(counts, model.predict(X))
    return dict(coef=float(model.coef_[0]), intercept=float(model.intercept_),
                r2=float(r2), n_points=int(len(eps)))


def fit_log_linear(u, start=0):
    """Fit ``log u_k`` against k

    Returns
    -------
    fit : dict
        ``rate`` (the fitted per-iteration ratio), ``r2`` and ``start``.
    """
    from sklearn.linear_model import LinearRegression
    from sklearn.metrics import r2_score
    u = np.asarray(u, dtype=float)[start:]
    ks = np.arange(start, start + len(u))
    keep = u > 0
    if keep.sum() < 3:
        raise ValueError('need at least 3 positive values to fit')
    X, y = ks[keep][:, np.newaxis], np.log(u[keep])
    model = LinearRegression().fit(X, y)
    return dict(rate=float(np.exp(model.coef_[0])),
                r2=float(r2_score(y, model.predict(X))), start=int(start))


class RunMetrics(object):
    """Aggregate metrics of a set of trajectories

    Parameters
    ----------
    records : list of TrajectoryRecord
        The trajectories, with a common length.
    x_star : instance of Profile
        The reference equilibrium.
    p : array-like | None
        Update probabilities; adds the weighted error series when given.

    Attributes
    ----------
    u_k, u_se, inf_metric, variance : array, shape (n_iter + 1,)
        Mean stacked error and its standard error, max-over-players mean
        error and total variance.
    weighted : array | None
        Mean weighted-norm error.
    sg_counts : array, shape (n_iter + 1, n_players)
        Mean cumulative SG steps per player.
    comm_rounds : array, shape (n_iter + 1,)
        Communication rounds.
    """

    def __init__(self, records, x_star, p=None):
        records = list(records)
        if not isinstance(x_star, Profile):
            x_star = Profile(x_star, records[0].dims)
        self.x_star = x_star
        self.n_trajectories = len(records)
        self.u_k, self.u_se = compute_u_k(records, x_star, return_se=True)
        n = len(self.u_k)
        self.inf_metric = compute_inf_metric(records, x_star)
        self.variance = compute_variance(records)
        self.weighted = None if p is None else \
            compute_weighted_error(records, x_star, p)
        self.sg_counts = np.mean([r.sg_counts[:n] for r in records], axis=0)
        self.comm_rounds = records[0].comm_rounds[:n]
        self.n_failed = sum(not r.completed for r in records)

    @property
    def n_iter(self):
        return len(self.u_k) - 1

    def k_of_epsilon(self, eps):
        return k_of_epsilon(self.u_k, self.sg_counts, eps)

    def to_frame(self):
        """Aggregate row stream, one row per iteration"""
        import pandas as pd
        data = dict(k=np.arange(self.n_iter + 1), u_k=self.u_k,
                    u_se=self.u_se, inf_metric=self.inf_metric,
                    variance=self.variance, comm_rounds=self.comm_rounds)
        if self.weighted is not None:
            data['weighted'] = self.weighted
        for i in range(self.sg_counts.shape[1]):
            data['sg_cum_p%d' % (i + 1)] = self.sg_counts[:, i]
        return pd.DataFrame(data)

    def __repr__(self):
        return '<RunMetrics | %d trajectories, K=%d, u_K=%0.3e>' % (
            self.n_trajectories, self.n_iter, self.u_k[-1])
