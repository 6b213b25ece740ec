from ._gamma import (CurvatureBounds, ContractionReport, build_gamma,
                     norm_inf, norm_2, spectral_radius, check_assumptions,
                     estimate_curvature, preflight)
