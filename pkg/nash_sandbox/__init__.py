"""Inexact proximal best-response schemes for stochastic Nash games"""

__version__ = '0.1.dev0'

from . import game
from . import contraction
from . import subsolvers
from . import sa
from . import recourse
from . import schemes
from . import metrics
from . import bench
