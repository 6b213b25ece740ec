from ._problems import (RecourseSample, LinearRecourse, QuadraticRecourse,
                        CapacityRecourse, recourse_value,
                        recourse_subgradient, expected_subgradient,
                        dorn_dual, check_recourse_assumptions)
from ._quadrature import uniform_grid, uniform_expectation
from ._sa import sa_solve_recourse
