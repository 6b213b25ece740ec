"""Dense two-phase simplex with Bland's rule"""

# License: BSD (3-clause)

import numpy as np

from mne.utils import logger

from ..defaults import _handle_default
from ._outcome import (SolveOutcome, OPTIMAL, INFEASIBLE, UNBOUNDED,
                       ITER_LIMIT)


class LinearProgram(object):
    """A standard-form linear program ``min c'q s.t. Aq = b, q >= 0``

    Parameters
    ----------
    c : array-like, shape (n_var,)
        Objective.
    A : array-like, shape (n_eq, n_var)
        Equality matrix.
    b : array-like, shape (n_eq,)
        Right-hand side.
    """

    def __init__(self, c, A, b):
        c = np.atleast_1d(np.asarray(c, dtype=float))
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if c.ndim != 1 or A.shape != (b.size, c.size):
            raise ValueError('A must have shape (%d, %d), got %s'
                             % (b.size, c.size, A.shape))
        for name, arr in (('c', c), ('A', A), ('b', b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError('%s must be finite' % name)
        self.c, self.A, self.b = c, A, b

    @property
    def shape(self):
        return self.A.shape


class _Tableau(object):
    """Canonical tableau ``B^-1 [A | I]`` over a fixed basis"""

    def __init__(self, A, b, tol, max_pivots):
        m, n = A.shape
        self.tab = np.hstack([A, np.eye(m)])
        self.rhs = b.copy()
        self.basis = list(range(n, n + m))
        self.n_orig = n
        self.tol = tol
        self.max_pivots = max_pivots
        self.pivots = list()

    def pivot(self, row, col):
        piv = self.tab[row, col]
        self.tab[row] /= piv
        self.rhs[row] /= piv
        for other in range(len(self.rhs)):
            if other != row:
                factor = self.tab[other, col]
                if factor != 0.:
                    self.tab[other] -= factor * self.tab[row]
                    self.rhs[other] -= factor * self.rhs[row]
        self.basis[row] = col
        self.pivots.append((row, col))

    def run(self, cost, allowed):
        """Bland iterations on ``cost`` over the ``allowed`` columns"""
        while True:
            if len(self.pivots) >= self.max_pivots:
                return ITER_LIMIT
            reduced = cost - np.dot(cost[self.basis], self.tab)
            candidates = np.where(allowed & (reduced < -self.tol))[0]
            if len(candidates) == 0:
                return OPTIMAL
            col = candidates[0]
            column = self.tab[:, col]
            rows = np.where(column > self.tol)[0]
            if len(rows) == 0:
                return UNBOUNDED
            ratios = self.rhs[rows] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + self.tol * max(1., abs(best))]
            row = min(ties, key=lambda r: self.basis[r])
            self.pivot(row, col)

    def drive_out_artificials(self):
        """Pivot artificials out of the basis, dropping redundant rows"""
        keep = list()
        for row in range(len(self.rhs)):
            if self.basis[row] < self.n_orig:
                keep.append(row)
                continue
            cols = np.where(np.abs(self.tab[row, :self.n_orig]) >
                            self.tol)[0]
            if len(cols) > 0:
                self.pivot(row, cols[0])
                keep.append(row)
        return keep


def simplex_solve(lp, tol=None, max_pivots=None):
    """Solve a standard-form LP by the two-phase dense simplex method

    Entering and leaving variables follow Bland's smallest-index rule, so
    the pivot sequence is a deterministic function of the data and the
    method terminates.

    Parameters
    ----------
    lp : instance of LinearProgram
        The problem.
    tol : float | None
        Pivot and optimality tolerance, defaults to
        ``DEFAULTS['simplex']['tol']``.
    max_pivots : int | None
        Pivot limit, defaults to ``DEFAULTS['simplex']['max_pivots']``.

    Returns
    -------
    outcome : instance of SolveOutcome
        ``duals`` holds the equality multipliers y with ``A'y <= c``.
    """
    params = _handle_default('simplex')
    tol = params['tol'] if tol is None else tol
    max_pivots = params['max_pivots'] if max_pivots is None else max_pivots
    m, n = lp.shape
    sign = np.where(lp.b < 0, -1., 1.)
    A = lp.A * sign[:, np.newaxis]
    b = lp.b * sign
    tableau = _Tableau(A, b, tol, max_pivots)
    # phase 1: minimize the sum of artificials
    cost = np.concatenate([np.zeros(n), np.ones(m)])
    status = tableau.run(cost, np.ones(n + m, bool))
    if status == ITER_LIMIT:
        return SolveOutcome(ITER_LIMIT, n_iter=len(tableau.pivots),
                            pivots=tableau.pivots)
    infeas = np.dot(cost[tableau.basis], tableau.rhs)
    if infeas > tol * max(1., np.abs(b).max() if m > 0 else 1.):
        logger.debug('    Phase 1 ended with infeasibility %g' % infeas)
        return SolveOutcome(INFEASIBLE, n_iter=len(tableau.pivots),
                            pivots=tableau.pivots)
    keep = tableau.drive_out_artificials()
    tableau.tab = tableau.tab[keep]
    tableau.rhs = tableau.rhs[keep]
    tableau.basis = [tableau.basis[row] for row in keep]
    # phase 2 with the artificial columns frozen
    cost = np.concatenate([lp.c, np.zeros(m)])
    allowed = np.concatenate([np.ones(n, bool), np.zeros(m, bool)])
    status = tableau.run(cost, allowed)
    x = np.zeros(n + m)
    x[tableau.basis] = tableau.rhs
    x = np.maximum(x[:n], 0.)
    value = float(np.dot(lp.c, x))
    duals = None
    if status == OPTIMAL:
        duals = np.zeros(m)
        basis = np.array(tableau.basis)
        if len(keep) > 0:
            duals[keep] = np.linalg.solve(lp.A[keep][:, basis].T,
                                          lp.c[basis])
    elif status == UNBOUNDED:
        value = -np.inf
    return SolveOutcome(status, x=x, value=value, duals=duals,
                        n_iter=len(tableau.pivots), pivots=tableau.pivots)
