"""Orthogonal projections ("shadows") of smooth convex bodies, computed from
the body's gauge by minimising over the fiber above each point."""
from ._accel import backend
from .errors import ConvergenceError, DomainError, RankError, ShadowError, ValidationError
from .gauge_core import (
    ConvexBody,
    Ellipsoid,
    LinearImage,
    PNormBall,
    Recentered,
    body_from_dict,
    boundary_point,
    gauge_eval,
    gauge_gradient,
    support_function,
    supporting_hyperplane_normal,
)
from .shadow import (
    BoundaryPolyline,
    FiberQuery,
    ShadowResult,
    boundary_trace,
    eta_eval,
    eta_partial_perp,
    fiber_minimize,
    membership,
    shadow_gauge,
)
from .subspace import (
    OrthoFrame,
    assemble,
    frame_from_bases,
    frame_from_normal,
    frame_from_spanning,
    general_projector,
    projector_matrix,
    split,
)

__version__ = "0.1.0"
