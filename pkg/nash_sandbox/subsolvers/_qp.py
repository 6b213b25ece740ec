"""Primal active-set method for convex quadratic programs"""

# License: BSD (3-clause)

import numpy as np

from mne.utils import logger

from ..defaults import _handle_default
from ..utils import _check_positive
from ._outcome import (SolveOutcome, OPTIMAL, INFEASIBLE, UNBOUNDED,
                       ITER_LIMIT)
from ._simplex import LinearProgram, simplex_solve


class QuadraticProgram(object):
    """A convex QP over a polyhedron

    With ``sense='min'`` the problem is
    ``min 0.5 z'Hz + d'z s.t. Gz <= g, Az = b``; with ``sense='max'`` it
    is ``max d'z - 0.5 z'Hz`` over the same set.

    Parameters
    ----------
    H : array-like, shape (n_var, n_var)
        Symmetric positive semidefinite matrix, possibly singular.
    d : array-like, shape (n_var,)
        Linear term.
    G : array-like, shape (n_ineq, n_var) | None
        Inequality matrix.
    g : array-like, shape (n_ineq,) | None
        Inequality right-hand side.
    A : array-like, shape (n_eq, n_var) | None
        Equality matrix.
    b : array-like, shape (n_eq,) | None
        Equality right-hand side.
    sense : str
        ``'min'`` or ``'max'``.
    """

    def __init__(self, H, d, G=None, g=None, A=None, b=None, sense='min'):
        d = np.atleast_1d(np.asarray(d, dtype=float))
        n = d.size
        H = np.atleast_2d(np.asarray(H, dtype=float))
        if H.shape != (n, n):
            raise ValueError('H must have shape (%d, %d), got %s'
                             % (n, n, H.shape))
        if not np.allclose(H, H.T, atol=1e-12):
            raise ValueError('H must be symmetric')
        try:
            np.linalg.cholesky(H + 1e-10 * max(1., np.abs(H).max()) *
                               np.eye(n))
        except np.linalg.LinAlgError:
            raise ValueError('H must be positive semidefinite')
        if sense not in ('min', 'max'):
            raise ValueError('sense must be "min" or "max", got %r'
                             % (sense,))
        self.H, self.d, self.sense = H, d, sense
        self.G, self.g = self._rows(G, g, n, 'G')
        self.A, self.b = self._rows(A, b, n, 'A')

    @staticmethod
    def _rows(M, v, n, name):
        if M is None:
            return np.zeros((0, n)), np.zeros(0)
        M = np.atleast_2d(np.asarray(M, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if M.shape != (v.size, n):
            raise ValueError('%s must have shape (%d, %d), got %s'
                             % (name, v.size, n, M.shape))
        return M, v

    @property
    def n_var(self):
        return self.d.size

    def objective(self, z):
        """Objective value in the problem's own sense"""
        quad = 0.5 * np.dot(z, np.dot(self.H, z))
        lin = np.dot(self.d, z)
        return float(lin + quad if self.sense == 'min' else lin - quad)

    def _min_linear(self):
        return self.d if self.sense == 'min' else -self.d


def _feasible_point(qp):
    """Phase-1 vertex of the polyhedron via the simplex method"""
    n, n_ineq = qp.n_var, len(qp.g)
    # z = z_plus - z_minus, slacks s >= 0 on the inequalities
    A = np.vstack([np.hstack([qp.G, -qp.G, np.eye(n_ineq)]),
                   np.hstack([qp.A, -qp.A, np.zeros((len(qp.b), n_ineq))])])
    lp = LinearProgram(np.zeros(2 * n + n_ineq), A,
                       np.concatenate([qp.g, qp.b]))
    outcome = simplex_solve(lp)
    if outcome.status != OPTIMAL:
        return None
    return outcome.x[:n] - outcome.x[n:2 * n]


def _null_space(rows, n):
    from scipy.linalg import null_space
    if len(rows) == 0:
        return np.eye(n)
    return null_space(rows)


def _direction(H, grad, basis, tol):
    """Newton or zero-curvature descent direction in span(basis)

    Returns the direction and whether it is a ray (zero curvature).
    """
    n = H.shape[0]
    if basis.shape[1] == 0:
        return np.zeros(n), False
    reduced = np.dot(basis.T, np.dot(H, basis))
    eigval, eigvec = np.linalg.eigh(reduced)
    scale = max(1., np.abs(eigval).max())
    flat = eigval <= tol * scale
    rgrad = np.dot(basis.T, grad)
    flat_grad = np.dot(eigvec[:, flat], np.dot(eigvec[:, flat].T, rgrad))
    if np.linalg.norm(flat_grad) > tol * max(1., np.linalg.norm(grad)):
        return -np.dot(basis, flat_grad), True
    curved = eigvec[:, ~flat]
    step = -np.dot(curved, np.dot(curved.T, rgrad) / eigval[~flat])
    return np.dot(basis, step), False


def qp_active_set(qp, tol=None, max_changes=None):
    """Solve a convex QP by a primal active-set method

    A feasible vertex is found by the phase-1 simplex method. Each
    iteration minimizes the objective over the affine set of the current
    working constraints in a null-space basis; directions of zero
    curvature along which the objective decreases are followed until a
    constraint blocks, and reported as Unbounded otherwise.

    Parameters
    ----------
    qp : instance of QuadraticProgram
        The problem.
    tol : float | None
        Residual tolerance, defaults to ``DEFAULTS['qp']['tol']``.
    max_changes : int | None
        Limit on active-set iterations, defaults to
        ``DEFAULTS['qp']['max_changes']``.

    Returns
    -------
    outcome : instance of SolveOutcome
        ``duals`` are the inequality multipliers and ``eq_duals`` the
        equality multipliers of ``Hz + d + G'lambda + A'nu = 0`` for the
        minimization form (``d`` negated when ``sense='max'``).
    """
    params = _handle_default('qp')
    tol = _check_positive(params['tol'] if tol is None else tol, 'tol')
    max_changes = params['max_changes'] if max_changes is None \
        else max_changes
    H, d = qp.H, qp._min_linear()
    G, g, A = qp.G, qp.g, qp.A
    n, n_ineq = qp.n_var, len(g)
    z = _feasible_point(qp)
    if z is None:
        logger.debug('    QP phase 1 found no feasible point')
        return SolveOutcome(INFEASIBLE)
    # initial working set: active constraints, kept linearly independent
    working = list()
    rank = np.linalg.matrix_rank(A, tol=tol) if len(A) else 0
    for i in range(n_ineq):
        if abs(np.dot(G[i], z) - g[i]) <= tol * max(1., abs(g[i])):
            rows = np.vstack([A, G[working + [i]]])
            new_rank = np.linalg.matrix_rank(rows, tol=tol)
            if new_rank > rank:
                working.append(i)
                rank = new_rank
    n_iter = 0
    while n_iter < max_changes:
        n_iter += 1
        rows = np.vstack([A, G[working]])
        grad = np.dot(H, z) + d
        step, ray = _direction(H, grad, _null_space(rows, n), tol)
        if np.linalg.norm(step) <= tol * max(1., np.linalg.norm(z)):
            if len(rows) == 0:
                mult = np.zeros(0)
            else:
                mult = np.linalg.lstsq(rows.T, -grad, rcond=None)[0]
            lam = mult[len(A):]
            if len(lam) == 0 or lam.min() >= -tol:
                duals = np.zeros(n_ineq)
                duals[working] = np.maximum(lam, 0.)
                return SolveOutcome(OPTIMAL, x=z, value=qp.objective(z),
                                    duals=duals, eq_duals=mult[:len(A)],
                                    n_iter=n_iter)
            drop = working[int(np.argmin(lam))]
            working.remove(drop)
            continue
        # ratio test over the constraints outside the working set
        alpha, block = (np.inf if ray else 1.), None
        slopes = np.dot(G, step)
        for i in range(n_ineq):
            if i in working or slopes[i] <= tol * np.linalg.norm(step):
                continue
            ratio = max(g[i] - np.dot(G[i], z), 0.) / slopes[i]
            if ratio < alpha:
                alpha, block = ratio, i
        if block is None and ray:
            return SolveOutcome(UNBOUNDED, x=z, value=-np.inf
                                if qp.sense == 'min' else np.inf,
                                n_iter=n_iter)
        z = z + alpha * step
        if block is not None:
            working.append(block)
    return SolveOutcome(ITER_LIMIT, x=z, value=qp.objective(z),
                        n_iter=n_iter)


def scalar_box_qp(d, h, x):
    """Closed-form ``max_{0 <= q <= x} d q - h q^2 / 2``

    Parameters
    ----------
    d : float
        Linear coefficient.
    h : float
        Curvature, strictly positive.
    x : float
        Upper bound of the box, nonnegative.

    Returns
    -------
    q : float
        The maximizer ``clip(d / h, 0, x)``.
    value : float
        The optimal value.
    """
    h = _check_positive(h, 'h')
    x = _check_positive(x, 'x', strict=False)
    q = min(max(d / h, 0.), x)
    return q, d * q - 0.5 * h * q * q
