"""Result container shared by the dense solvers"""

# License: BSD (3-clause)

OPTIMAL = 'Optimal'
INFEASIBLE = 'Infeasible'
UNBOUNDED = 'Unbounded'
ITER_LIMIT = 'IterLimit'


class SolveOutcome(object):
    """Outcome of an LP or QP solve

    Parameters
    ----------
    status : str
        One of ``'Optimal'``, ``'Infeasible'``, ``'Unbounded'`` or
        ``'IterLimit'``.
    x : array | None
        The primal solution (last iterate unless Optimal).
    value : float
        The objective value at ``x`` in the problem's own sense.
    duals : array | None
        Multipliers of the equality rows of an LP, or of the inequality
        rows of a QP.
    eq_duals : array | None
        Multipliers of the equality rows of a QP.
    n_iter : int
        Pivots (LP) or active-set changes (QP).
    pivots : list of tuple
        The ``(row, column)`` pivot sequence of a simplex solve.
    """

    def __init__(self, status, x=None, value=float('nan'), duals=None,
                 eq_duals=None, n_iter=0, pivots=None):
        self.status = status
        self.x = x
        self.value = value
        self.duals = duals
        self.eq_duals = eq_duals
        self.n_iter = n_iter
        self.pivots = list() if pivots is None else pivots

    @property
    def ok(self):
        return self.status == OPTIMAL

    def __repr__(self):
        return '<SolveOutcome | %s, value=%s, n_iter=%d>' % (
            self.status, self.value, self.n_iter)
