"""Synchronous, randomized and asynchronous best-response schemes"""

from ._config import (SchemeConfig, KINDS, generate_update_sets,
                      validate_update_sets, cyclic_update_sets)
from ._buffer import DelayBuffer, delayed_view
from ._record import TrajectoryRecord
from ._runners import (run_synchronous, run_randomized, run_asynchronous,
                       run_cyclic, run_sg_baseline, run_trajectories)
