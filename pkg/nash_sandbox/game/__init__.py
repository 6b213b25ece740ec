from ._sets import BoxSet, project, diameter
from ._streams import (SampleStream, GRADIENT, ACTIVATION, DELAY,
                       UPDATE_SETS, RUN)
from ._players import (PlayerSpec, GameSpec, Profile, sample_stoch_grad,
                       deterministic_gradient)
