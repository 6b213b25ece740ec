"""Per-trajectory bookkeeping"""

# License: BSD (3-clause)

import numpy as np

from ..game import Profile


class TrajectoryRecord(object):
    """Snapshots of one trajectory of a scheme

    Row ``k`` of every array refers to the profile x_k: ``beta[k, i]`` is
    the number of updates player ``i`` carried out before iteration ``k``
    and ``sg_counts[k, i]`` the cumulative number of projected SG steps
    spent by player ``i`` to produce x_k.

    Parameters
    ----------
    x0 : instance of Profile
        The initial profile.
    kind : str
        The scheme that produced the trajectory.
    trajectory : int
        Index of the trajectory.

    Attributes
    ----------
    iterates : array, shape (n_iter + 1, n_total)
        The stacked profiles.
    beta : array of int, shape (n_iter + 1, n_players)
        Update counters.
    sg_counts : array of int, shape (n_iter + 1, n_players)
        Cumulative SG step counts.
    comm_rounds : array of int, shape (n_iter + 1,)
        Cumulative communication rounds.
    active_sets : list of list of int
        The players that updated at each iteration.
    error : str | None
        Why the trajectory stopped early, None when it completed.
    """

    def __init__(self, x0, kind, trajectory=0):
        self.kind = kind
        self.trajectory = int(trajectory)
        self.dims = x0.dims
        self._iterates = [x0.vector.copy()]
        n_players = x0.n_players
        self._beta = [np.zeros(n_players, int)]
        self._sg = [np.zeros(n_players, int)]
        self._rounds = [0]
        self.active_sets = list()
        self.error = None

    def append(self, profile, active, steps, rounds=1):
        """Record x_{k+1} produced by the players in ``active``

        ``steps`` holds the SG steps spent by each player at this
        iteration, zero for the idle ones.
        """
        active = sorted(int(i) for i in active)
        beta = self._beta[-1].copy()
        beta[active] += 1
        steps = np.asarray(steps, dtype=int)
        if np.any(steps < 0):
            raise ValueError('step counts must be nonnegative')
        self._iterates.append(profile.vector.copy())
        self._beta.append(beta)
        self._sg.append(self._sg[-1] + steps)
        self._rounds.append(self._rounds[-1] + int(rounds))
        self.active_sets.append(active)

    @property
    def n_iter(self):
        """Number of completed major iterations"""
        return len(self._iterates) - 1

    @property
    def iterates(self):
        return np.array(self._iterates)

    @property
    def beta(self):
        return np.array(self._beta)

    @property
    def sg_counts(self):
        return np.array(self._sg)

    @property
    def comm_rounds(self):
        return np.array(self._rounds)

    @property
    def completed(self):
        return self.error is None

    def profile(self, k):
        return Profile(self._iterates[k], self.dims)

    def errors(self, x_star):
        """Per-player distances to a reference profile

        Parameters
        ----------
        x_star : instance of Profile | array
            The reference equilibrium.

        Returns
        -------
        err : array, shape (n_iter + 1, n_players)
            ``||x_{i,k} - x_i*||``.
        """
        if isinstance(x_star, Profile):
            x_star = x_star.vector
        diff = self.iterates - np.asarray(x_star, dtype=float)[np.newaxis]
        bounds = np.concatenate([[0], np.cumsum(self.dims)])
        return np.array([np.linalg.norm(diff[:, lo:hi], axis=1)
                         for lo, hi in zip(bounds[:-1], bounds[1:])]).T

    def to_frame(self, x_star=None):
        """Row stream of the trajectory as a DataFrame

        Columns are ``trajectory``, ``k``, ``comm_rounds``, the stacked
        error ``err_2`` (when ``x_star`` is given) and, per player ``i``,
        ``sg_i``, ``beta_i`` and ``err_i``.
        """
        import pandas as pd
        data = dict(trajectory=self.trajectory, k=np.arange(self.n_iter + 1),
                    comm_rounds=self.comm_rounds)
        sg, beta = self.sg_counts, self.beta
        err = None if x_star is None else self.errors(x_star)
        if err is not None:
            data['err_2'] = np.linalg.norm(err, axis=1)
        for i in range(len(self.dims)):
            data['sg_%d' % i] = sg[:, i]
            data['beta_%d' % i] = beta[:, i]
            if err is not None:
                data['err_%d' % i] = err[:, i]
        return pd.DataFrame(data)

    def to_dict(self):
        """JSON-ready summary"""
        return dict(kind=self.kind, trajectory=self.trajectory,
                    n_iter=self.n_iter, error=self.error,
                    final=self._iterates[-1].tolist(),
                    sg_counts=self._sg[-1].tolist(),
                    comm_rounds=self._rounds[-1])

    def __repr__(self):
        status = 'ok' if self.completed else 'stopped: %s' % self.error
        return '<TrajectoryRecord | %s #%d, %d iterations, %s>' % (
            self.kind, self.trajectory, self.n_iter, status)
