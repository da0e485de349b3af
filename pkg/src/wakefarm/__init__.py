"""Wake-aware wind farm design toolkit.

Evaluates farm energy production under top-hat wake interactions with
heterogeneous hub heights, and optimizes turbine layout, capacity mix,
substation placement and cable routing for annual economic benefit.
"""

from .cable_routing import CableTree, minimum_spanning_tree, tree_length
from .energy_economics import (
    Boundary,
    CostParams,
    EvaluationReport,
    FarmLayout,
    Placement,
    annual_energy,
    capacity_factor,
    capital_recovery_factor,
    evaluate,
    farm_power,
    production_benefit,
)
from .layout_optimizer import FarmContext, GAConfig, Genome, InfeasibleError, OptimizationResult
from .turbine_model import (
    TurbineCatalog,
    TurbineSpec,
    actuator_coefficients,
    available_power,
    default_catalog,
    electrical_power,
    swept_area,
)
from .wake_engine import (
    DeficitMatrix,
    WakeParams,
    WindFramePosition,
    centerline_deficit,
    center_distance,
    effective_speeds,
    expansion_coefficient,
    overlap_area,
    overlap_fraction,
    pair_deficit,
    rotate_to_wind_frame,
    wake_radius,
)
from .wind_resource import (
    SurfaceRoughness,
    WindDistribution,
    WindSample,
    build_distribution,
    extrapolate_speed,
    mean_speed,
    parse_observations,
)

__version__ = "0.1.0"
