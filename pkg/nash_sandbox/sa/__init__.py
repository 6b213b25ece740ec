from ._schedules import (InnerSchedule, VARIANTS, steps_for, accuracy_for,
                         q_constant, q_constant_recourse, game_q_constants)
from ._solver import sa_solve
