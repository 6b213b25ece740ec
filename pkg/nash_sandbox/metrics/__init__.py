"""Reference equilibria, empirical metrics and theoretical bounds"""

from ._equilibrium import (ReferenceEquilibrium, reference_equilibrium,
                           proximal_response, best_response_map)
from ._empirical import (RunMetrics, compute_u_k, compute_inf_metric,
                         compute_variance, compute_weighted_error,
                         k_of_epsilon, default_eps_grid, fit_inverse_square,
                         fit_log_linear)
from ._bounds import (BoundInputs, domination_constant, randomized_constants,
                      theoretical_bounds, synchronous_recursion,
                      randomized_recursion, bound_dominance_report)
