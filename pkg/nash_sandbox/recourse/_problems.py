"""Second-stage recourse problems and their dual subgradients"""

# License: BSD (3-clause)

from collections import namedtuple

import numpy as np

from mne.utils import logger, verbose

from ..defaults import _handle_default
from ..subsolvers import (LinearProgram, QuadraticProgram, simplex_solve,
                          qp_active_set, scalar_box_qp, OPTIMAL, INFEASIBLE,
                          UNBOUNDED)
from ..utils import RecourseError, _check_positive
from ._quadrature import uniform_grid

RecourseSample = namedtuple('RecourseSample', ['d', 'T', 'h', 'H'])
RecourseSample.__new__.__defaults__ = (None,)


def _raise_for(outcome, what):
    """Map a failed second-stage solve to the violated assumption"""
    if outcome.status == INFEASIBLE:
        raise RecourseError('%s is infeasible: recourse is not relatively '
                            'complete' % what, assumption='6(a)')
    if outcome.status == UNBOUNDED:
        raise RecourseError('%s is unbounded: the dual is infeasible'
                            % what, assumption='6(b)')
    raise RecourseError('%s stopped with status %s'
                        % (what, outcome.status), assumption=None)


class LinearRecourse(object):
    """Linear second stage ``min d'q s.t. Wq = h - Tx, q >= 0``

    Parameters
    ----------
    W : array-like, shape (n_rows, n_q)
        The fixed recourse matrix.
    sampler : callable | None
        ``sampler(rng)`` returns one RecourseSample.
    scenarios : list of RecourseSample | None
        A finite support, used instead of ``sampler``. Enables the exact
        expectations :meth:`expected_value` and :meth:`expected_subgradient`.
    probs : array-like | None
        Scenario probabilities, uniform by default.
    sub_bound : float
        The bound M_s on the norm of the recourse subgradient.
    """

    kind = 'linear'

    def __init__(self, W, sampler=None, scenarios=None, probs=None,
                 sub_bound=0.):
        self.W = np.atleast_2d(np.asarray(W, dtype=float))
        if (sampler is None) == (scenarios is None):
            raise ValueError('exactly one of sampler and scenarios must be '
                             'given')
        self.sampler = sampler
        self.scenarios = None
        self.probs = None
        if scenarios is not None:
            self.scenarios = [self._check_sample(s) for s in scenarios]
            n = len(self.scenarios)
            probs = np.full(n, 1. / n) if probs is None else \
                np.asarray(probs, dtype=float)
            if probs.shape != (n,) or np.any(probs < 0) or \
                    not np.isclose(probs.sum(), 1.):
                raise ValueError('probs must be a probability vector of '
                                 'length %d' % n)
            self.probs = probs
        self.sub_bound = _check_positive(sub_bound, 'sub_bound',
                                         strict=False)

    def _check_sample(self, sample):
        d = np.atleast_1d(np.asarray(sample.d, dtype=float))
        h = np.atleast_1d(np.asarray(sample.h, dtype=float))
        T = np.atleast_2d(np.asarray(sample.T, dtype=float))
        if d.size != self.W.shape[1] or h.size != self.W.shape[0] or \
                T.shape[0] != self.W.shape[0]:
            raise ValueError('sample shapes do not match W of shape %s'
                             % (self.W.shape,))
        H = sample.H
        if H is not None:
            H = np.atleast_2d(np.asarray(H, dtype=float))
        return RecourseSample(d, T, h, H)

    def draw(self, rng, size):
        """Draw ``size`` samples from ``rng``"""
        if self.scenarios is not None:
            idx = rng.choice(len(self.scenarios), size, p=self.probs)
            return [self.scenarios[j] for j in idx]
        return [self._check_sample(self.sampler(rng)) for _ in range(size)]

    def primal(self, x, sample):
        rhs = sample.h - np.dot(sample.T, np.atleast_1d(x))
        return LinearProgram(sample.d, self.W, rhs)

    def _solve(self, x, sample):
        outcome = simplex_solve(self.primal(x, sample))
        if outcome.status != OPTIMAL:
            _raise_for(outcome, 'second-stage LP')
        return outcome

    def value(self, x, sample):
        return self._solve(x, sample).value

    def multipliers(self, x, sample):
        """Optimal dual multipliers pi of the equality rows"""
        return self._solve(x, sample).duals

    def subgradient(self, x, sample):
        return -np.dot(sample.T.T, self.multipliers(x, sample))

    def _check_finite(self):
        if self.scenarios is None:
            raise ValueError('exact expectations need a finite scenario set')

    def expected_value(self, x):
        self._check_finite()
        return float(sum(p * self.value(x, s)
                         for p, s in zip(self.probs, self.scenarios)))

    def expected_subgradient(self, x):
        self._check_finite()
        return sum(p * self.subgradient(x, s)
                   for p, s in zip(self.probs, self.scenarios))


class QuadraticRecourse(LinearRecourse):
    """Quadratic second stage ``min d'q + q'Hq / 2 s.t. Wq = h - Tx, q >= 0``

    Samples carry the PSD matrix ``H``. Subgradients use the multipliers
    of the Dorn dual, see :func:`dorn_dual`.
    """

    kind = 'quadratic'

    def _check_sample(self, sample):
        sample = super(QuadraticRecourse, self)._check_sample(sample)
        n_q = self.W.shape[1]
        if sample.H is None or sample.H.shape != (n_q, n_q):
            raise ValueError('quadratic recourse samples need H of shape '
                             '(%d, %d)' % (n_q, n_q))
        return sample

    def primal(self, x, sample):
        n_q = self.W.shape[1]
        rhs = sample.h - np.dot(sample.T, np.atleast_1d(x))
        return QuadraticProgram(sample.H, sample.d, -np.eye(n_q),
                                np.zeros(n_q), self.W, rhs)

    def _solve(self, x, sample):
        outcome = qp_active_set(self.primal(x, sample))
        if outcome.status != OPTIMAL:
            _raise_for(outcome, 'second-stage QP')
        return outcome

    def multipliers(self, x, sample):
        """The pi-part of an optimal Dorn-dual solution"""
        outcome = qp_active_set(dorn_dual(self, x, sample))
        if outcome.status == UNBOUNDED:
            raise RecourseError('Dorn dual is unbounded: the second stage is '
                                'infeasible', assumption='6(a)')
        if outcome.status == INFEASIBLE:
            raise RecourseError('Dorn dual is infeasible: the second stage '
                                'is unbounded', assumption='6(b)')
        if outcome.status != OPTIMAL:
            _raise_for(outcome, 'Dorn dual')
        return outcome.x[:self.W.shape[0]]


def dorn_dual(problem, x, sample):
    """Dorn dual of a quadratic second stage

    ``max (h - Tx)'pi - u'Hu / 2 s.t. W'pi - Hu <= d`` over ``(pi, u)``.

    Parameters
    ----------
    problem : instance of QuadraticRecourse | LinearRecourse
        The recourse data; a linear problem is treated as ``H = 0``.
    x : array, shape (n_x,)
        The first-stage decision.
    sample : instance of RecourseSample
        The scenario.

    Returns
    -------
    qp : instance of QuadraticProgram
        The dual over ``z = (pi, u)`` with ``sense='max'``.
    """
    m, n_q = problem.W.shape
    H = sample.H if sample.H is not None else np.zeros((n_q, n_q))
    rhs = sample.h - np.dot(sample.T, np.atleast_1d(x))
    big_h = np.zeros((m + n_q, m + n_q))
    big_h[m:, m:] = H
    return QuadraticProgram(big_h, np.concatenate([rhs, np.zeros(n_q)]),
                            np.hstack([problem.W.T, -H]), sample.d,
                            sense='max')


class CapacityRecourse(object):
    """Scalar capacity second stage ``max_{0 <= q <= x} d q - h q^2 / 2``

    ``d`` and ``h`` are independent uniforms. The subgradient returned is
    ``d - h x`` below the kink ``x = d / h`` and 0 above it. The value is
    concave then constant in x, so the cost a firm adds for it is not
    convex; the subgradient is used as written by the capacity game.

    Parameters
    ----------
    d_low, d_high : float
        Support of d.
    h_low, h_high : float
        Support of h, strictly positive.
    n_nodes : int | None
        Gauss-Legendre nodes per axis for the expectations, defaults to
        ``DEFAULTS['equilibrium']['n_nodes']``.
    """

    kind = 'capacity'

    def __init__(self, d_low=0.3, d_high=0.4, h_low=0.45, h_high=0.55,
                 n_nodes=None):
        if not 0 < d_low <= d_high or not 0 < h_low <= h_high:
            raise ValueError('supports must be positive intervals, got '
                             'd in [%s, %s], h in [%s, %s]'
                             % (d_low, d_high, h_low, h_high))
        self.d_low, self.d_high = float(d_low), float(d_high)
        self.h_low, self.h_high = float(h_low), float(h_high)
        if n_nodes is None:
            n_nodes = _handle_default('equilibrium')['n_nodes']
        self.n_nodes = int(n_nodes)
        self._grid = None

    @property
    def sub_bound(self):
        # |d - h x| <= d on 0 <= x <= d / h
        return self.d_high

    @property
    def bounds(self):
        return [(self.d_low, self.d_high), (self.h_low, self.h_high)]

    def draw(self, rng, size):
        """Samples of shape (size, 2), d then h per row"""
        u = rng.random((size, 2))
        return np.column_stack([
            self.d_low + (self.d_high - self.d_low) * u[:, 0],
            self.h_low + (self.h_high - self.h_low) * u[:, 1]])

    def value(self, x, sample):
        return scalar_box_qp(sample[0], sample[1], float(np.squeeze(x)))[1]

    def subgradient(self, x, sample):
        x = float(np.squeeze(x))
        d, h = sample[0], sample[1]
        return np.array([d - h * x if x < d / h else 0.])

    def _subgradients(self, x, points):
        d, h = points[:, 0], points[:, 1]
        return np.where(x < d / h, d - h * x, 0.)

    def _values(self, x, points):
        d, h = points[:, 0], points[:, 1]
        q = np.clip(d / h, 0., x)
        return d * q - 0.5 * h * q * q

    def _nodes(self, n_nodes=None):
        if n_nodes is not None:
            return uniform_grid(self.bounds, n_nodes)
        if self._grid is None:
            self._grid = uniform_grid(self.bounds, self.n_nodes)
        return self._grid

    def expected_value(self, x, return_error=False):
        x = float(np.squeeze(x))
        points, weights = self._nodes()
        value = float(np.dot(weights, self._values(x, points)))
        if return_error:
            fine = self._nodes(2 * self.n_nodes)
            return value, abs(np.dot(fine[1], self._values(x, fine[0])) -
                              value)
        return value

    def expected_subgradient(self, x, return_error=False):
        x = float(np.squeeze(x))
        points, weights = self._nodes()
        value = np.array([np.dot(weights, self._subgradients(x, points))])
        if return_error:
            fine = self._nodes(2 * self.n_nodes)
            error = abs(np.dot(fine[1], self._subgradients(x, fine[0])) -
                        value[0])
            return value, error
        return value

    def dual(self, x, sample):
        """The two-variable dual ``min h u^2 / 2 + x v s.t. h u + v >= d,
        v >= 0`` as a QuadraticProgram over ``(u, v)``"""
        d, h = sample[0], sample[1]
        return QuadraticProgram([[h, 0.], [0., 0.]],
                                [0., float(np.squeeze(x))],
                                [[-h, -1.], [0., -1.]], [-d, 0.])


def recourse_value(problem, x, sample):
    """Second-stage value at first-stage decision ``x`` for one sample"""
    return problem.value(x, sample)


def recourse_subgradient(problem, x, sample):
    """A subgradient of the second-stage value in ``x`` for one sample

    For LP and QP second stages this is ``-T' pi`` with ``pi`` the dual
    multipliers found by the solver; when the dual optimum is not unique
    the vertex reached by the pivot order is used.
    """
    return np.atleast_1d(problem.subgradient(x, sample))


def expected_subgradient(problem, x):
    """Expected recourse subgradient, exact or by quadrature"""
    return np.atleast_1d(problem.expected_subgradient(x))


@verbose
def check_recourse_assumptions(problem, x_samples, random_state=None,
                               n_samples=20, verbose=None):
    """Spot-check relatively complete recourse and dual feasibility

    Parameters
    ----------
    problem : instance of LinearRecourse | QuadraticRecourse | CapacityRecourse
        The second stage.
    x_samples : array-like, shape (n_x, n_dim)
        First-stage decisions to test, usually points of X_i.
    random_state : int | None | instance of Generator
        Seed for the scenario draws.
    n_samples : int
        Scenarios per decision.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    report : dict
        ``'6(a)'`` and ``'6(b)'`` booleans (True when no violation was
        seen), ``'psd'`` for the sampled H and the number of checks.
    """
    rng = (random_state if isinstance(random_state, np.random.Generator)
           else np.random.default_rng(random_state))
    report = {'6(a)': True, '6(b)': True, 'psd': True, 'n_checked': 0}
    x_samples = np.atleast_2d(np.asarray(x_samples, dtype=float))
    for x in x_samples:
        for sample in problem.draw(rng, n_samples):
            H = getattr(sample, 'H', None)
            if H is not None and np.linalg.eigvalsh(
                    (H + H.T) / 2.)[0] < -1e-10:
                report['psd'] = False
            try:
                problem.value(x, sample)
                problem.subgradient(x, sample)
            except RecourseError as err:
                report[err.assumption or '6(b)'] = False
            report['n_checked'] += 1
    logger.info('    Checked %d second-stage samples: %s'
                % (report['n_checked'],
                   ', '.join('%s=%s' % (k, report[k])
                             for k in ('6(a)', '6(b)', 'psd'))))
    return report
