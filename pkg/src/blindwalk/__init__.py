"""blindwalk: redirected walking for room-scale VR by moving unseen walls.

A multi-room virtual environment is folded into one fixed tracked rectangle.
Walls of the room the user occupies glide back to their true dimensions while
out of view, within measured detectability limits; everything else is
re-seated around the user between rooms. The package provides the geometry
and gain model, the wall-management engine, scripted locomotion policies, a
deterministic simulator with trace auditing, psychometric threshold fitting,
and a websocket bridge for interactive control.
"""

from .agent import (
    Action,
    CoinTask,
    CoinCollectorPolicy,
    IdlePolicy,
    LookAroundPolicy,
    Observation,
    Policy,
    make_policy,
)
from .gain import (
    DEFAULT_THRESHOLDS,
    Direction,
    DistanceClass,
    GainThresholds,
    PlannedTrial,
    PsychometricFit,
    ResponseSample,
    ThresholdRow,
    detection_range,
    fit_by_class,
    fit_psychometric,
    max_imperceptible_step,
    plan_threshold_session,
    pse,
    read_responses,
    thresholds_at,
    wall_movement_gain,
)
from .geometry import (
    DEFAULT_FOV_HALF_ANGLE,
    Rect,
    Side,
    UserPose,
    Vec2,
    WallSegment,
    fully_outside_fov,
    shortest_distance,
    wall_segments,
)
from .layout import (
    Door,
    DoorState,
    LayoutError,
    RealSpace,
    Room,
    VirtualLayout,
    load_layout,
    parse_layout,
    serialize_layout,
    validate,
)
from .redirection import (
    EventKind,
    NavState,
    Phase,
    RedirectionEvent,
    compress_neighbors,
    init_navigation,
    nav_tick,
    restore_step,
)
from .rng import stream
from .simulator import (
    AppliedInput,
    ConfigError,
    RunConfig,
    RunMetrics,
    SimSession,
    TraceViolation,
    check_trace_invariants,
    load_run_config,
    load_trace,
    metrics_from_trace,
    parse_run_config,
    replay,
    run,
    run_session,
    write_trace,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AppliedInput",
    "CoinCollectorPolicy",
    "CoinTask",
    "ConfigError",
    "DEFAULT_FOV_HALF_ANGLE",
    "DEFAULT_THRESHOLDS",
    "Direction",
    "DistanceClass",
    "Door",
    "DoorState",
    "EventKind",
    "GainThresholds",
    "IdlePolicy",
    "LayoutError",
    "LookAroundPolicy",
    "NavState",
    "Observation",
    "Phase",
    "PlannedTrial",
    "Policy",
    "PsychometricFit",
    "RealSpace",
    "Rect",
    "RedirectionEvent",
    "ResponseSample",
    "Room",
    "RunConfig",
    "RunMetrics",
    "Side",
    "SimSession",
    "ThresholdRow",
    "TraceViolation",
    "UserPose",
    "Vec2",
    "VirtualLayout",
    "WallSegment",
    "check_trace_invariants",
    "compress_neighbors",
    "detection_range",
    "fit_by_class",
    "fit_psychometric",
    "fully_outside_fov",
    "init_navigation",
    "load_layout",
    "load_run_config",
    "load_trace",
    "make_policy",
    "max_imperceptible_step",
    "metrics_from_trace",
    "nav_tick",
    "parse_layout",
    "parse_run_config",
    "plan_threshold_session",
    "pse",
    "read_responses",
    "replay",
    "restore_step",
    "run",
    "run_session",
    "serialize_layout",
    "shortest_distance",
    "stream",
    "thresholds_at",
    "validate",
    "wall_movement_gain",
    "wall_segments",
    "write_trace",
]
