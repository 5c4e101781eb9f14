"""Radio resource dimensioning for users on Poisson-line-process roads."""

__version__ = "0.1.0"

from .congestion import (
    CongestionEstimate,
    DemandProfile,
    RealizationSet,
    alpha,
    brute_force_ccdf,
    brute_force_pmf,
    conditional_ccdf,
    congestion_avg,
    congestion_avg_curve,
    congestion_conditional,
    congestion_mc,
    congestion_mc_curve,
    demand_profile_cox,
    demand_profile_ppp,
    pgf_eval,
    sample_gamma,
)
from .dimensioning import DimensioningResult, dimension, region_study, sweep_traffic
from .errors import (
    InvalidParameterError,
    OracleResourceError,
    PlpdimError,
    QuadratureError,
    ScenarioError,
    SearchExhaustedError,
)
from .geometry import (
    Line,
    PlpRealization,
    UserPositions,
    chord_half_length,
    mean_users_in_disk,
    sample_plp,
    sample_spatial_ppp,
    sample_users_on_realization,
)
from .kernels import BACKEND
from .radio import (
    InterferenceProfile,
    RadioConfig,
    Region,
    RingPartition,
    interference_from_margin,
    prb_demand,
    ring_radii,
    sinr,
    terminal_n,
    throughput,
)
from .scenario import Scenario, load_scenario, parse_scenario
