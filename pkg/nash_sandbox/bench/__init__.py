"""Example games, experiment configurations and the command line"""

from .games import (PortfolioConfig, CapacityConfig, build_portfolio,
                    build_capacity, GAMES)
from .config import ExperimentConfig, shipped_configs
from .experiment import (run_preflight, run_bounds, run_experiment,
                         compare_with_sg, fit_metrics_file,
                         complexity_table, dominance_table, delay_sweep)
