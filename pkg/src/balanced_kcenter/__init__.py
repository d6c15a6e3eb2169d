"""Balanced k-center clustering: minimize the largest cluster radius while
keeping every cluster size inside [lower, upper].

The solver seeds centers farthest-first, enumerates small center tuples over
the seeds, binary-searches candidate radii, and certifies each radius by
solving a region-level assignment system exactly and rounding it to integers
without breaking the size bounds.
"""
from .backends import available_backends, resolve
from .coverage import CandidateRadii, CenterTuple, RegionTable, build_region_table, candidate_radii
from .metric_core import (
    BoundsError,
    ClusterCapError,
    DistanceOracle,
    InstanceParseError,
    MetricInstance,
    load_instance,
)
from .oracles import FlowNetwork, brute_force_optimum, flow_feasible, min_enclosing_ball
from .rounding import RoundingError, round_to_integer
from .search import (
    ClusteringResult,
    balanced_kcenter,
    enumerate_tuples,
    extract_labels,
    feasible,
    min_feasible_radius,
)
from .seeding import SeedSet, gonzalez_select
from .sol import SolSolution, SolSystem, build_sol, fractionalize, solve_sol

__version__ = "0.1.0"

__all__ = [
    "BoundsError",
    "CandidateRadii",
    "CenterTuple",
    "ClusterCapError",
    "ClusteringResult",
    "DistanceOracle",
    "FlowNetwork",
    "InstanceParseError",
    "MetricInstance",
    "RegionTable",
    "RoundingError",
    "SeedSet",
    "SolSolution",
    "SolSystem",
    "__version__",
    "available_backends",
    "balanced_kcenter",
    "brute_force_optimum",
    "build_region_table",
    "build_sol",
    "candidate_radii",
    "enumerate_tuples",
    "extract_labels",
    "feasible",
    "flow_feasible",
    "fractionalize",
    "gonzalez_select",
    "load_instance",
    "min_enclosing_ball",
    "min_feasible_radius",
    "resolve",
    "round_to_integer",
    "solve_sol",
]
