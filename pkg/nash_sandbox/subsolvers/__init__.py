from ._outcome import (SolveOutcome, OPTIMAL, INFEASIBLE, UNBOUNDED,
                       ITER_LIMIT)
from ._simplex import LinearProgram, simplex_solve
from ._qp import QuadraticProgram, qp_active_set, scalar_box_qp
