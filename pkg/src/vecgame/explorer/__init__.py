from .boundary import (
    BoundarySample,
    Budget,
    ExplorationReport,
    ExploreConfig,
    adhere_boundary,
    bisect_to_boundary,
    explore,
    find_boundary_pair,
)
from .classifiers import (
    WEIGHT_SPACE,
    HalfSpaceClassifier,
    ParamSpace,
    PlaneClassifier,
    SphereClassifier,
    race_predicate,
)
from .grid import grid_points, grid_search
from .protocol import RemoteClassifier, make_race_evaluator, serve_evaluator
from .volume import estimate_volume

__all__ = [
    "BoundarySample",
    "Budget",
    "ExplorationReport",
    "ExploreConfig",
    "HalfSpaceClassifier",
    "ParamSpace",
    "PlaneClassifier",
    "RemoteClassifier",
    "SphereClassifier",
    "WEIGHT_SPACE",
    "adhere_boundary",
    "bisect_to_boundary",
    "estimate_volume",
    "explore",
    "find_boundary_pair",
    "grid_points",
    "grid_search",
    "make_race_evaluator",
    "race_predicate",
    "serve_evaluator",
]
