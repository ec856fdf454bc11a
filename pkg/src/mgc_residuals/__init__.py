"""
Exact, simulated and approximate performance measures of the M/Cox2/c queue,
with a focus on the mean minimum residual service time seen by an arriving
customer who has to wait.
"""
from .approx import (ApproxBundle, classic_bundle, min_residual_eq2, relative_error,
                     wait_eq1)
from .catalog import dist_catalog
from .cox2 import (Cox2Params, ServiceMoments, fit_from_moments, moments_from_params,
                   sample_service)
from .errors import (EstimationError, InfeasibleFitError, OracleInfeasibleError,
                     ParameterError, QueueModelError, SolverError,
                     UndefinedConditionalError, UnstableQueueError)
from .mmc import MMcResult, erlang_c, mmc_measures
from .model import ModelSpec
from .qbd import (PerfMeasures, StationarySolution, departure_times, measures,
                  min_residual_exact, solve, stationary, truncated_oracle)
from .sim import SimConfig, SimEstimates, estimate

__version__ = "0.1.0"
