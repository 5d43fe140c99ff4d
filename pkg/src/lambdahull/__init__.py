"""Toolkit for bodies cut out by congruent balls of radius 1/lambda."""

from lambdahull.bodies import (
    BallPolytope,
    ConvexBodyView,
    RotSymBody,
    as_ballpoly,
    as_view,
    ball,
    contains,
    distance,
    dual_contains,
    dual_support,
    farthest_distance,
    feasibility,
    from_json,
    lens,
    minkowski_contains,
    minkowski_contains_batch,
    project,
    rotsym_dual,
    scale,
    spindle,
    support,
    support_ballpoly,
    support_bisect,
    support_rotsym,
    to_json,
)
from lambdahull.config import DEFAULT_CONFIG, SolverConfig
from lambdahull.errors import (
    DegenerateCellError,
    DegenerateSupportError,
    EmptyBodyError,
    HemisphereViolationError,
    IllConditionedError,
    InvalidGroupError,
    InvalidParamError,
    LambdahullError,
    NonConvergenceError,
    RejectionExhaustedError,
    UnsupportedError,
)

__version__ = "0.1.0"

__all__ = [
    "BallPolytope",
    "ConvexBodyView",
    "DEFAULT_CONFIG",
    "DegenerateCellError",
    "DegenerateSupportError",
    "EmptyBodyError",
    "HemisphereViolationError",
    "IllConditionedError",
    "InvalidGroupError",
    "InvalidParamError",
    "LambdahullError",
    "NonConvergenceError",
    "RejectionExhaustedError",
    "RotSymBody",
    "SolverConfig",
    "UnsupportedError",
    "as_ballpoly",
    "as_view",
    "ball",
    "contains",
    "distance",
    "dual_contains",
    "dual_support",
    "farthest_distance",
    "feasibility",
    "from_json",
    "lens",
    "minkowski_contains",
    "minkowski_contains_batch",
    "project",
    "rotsym_dual",
    "scale",
    "spindle",
    "support",
    "support_ballpoly",
    "support_bisect",
    "support_rotsym",
    "to_json",
]
