from .core import (
    DIVERGED,
    REGULAR,
    SINGULAR,
    Homotopy,
    PairingError,
    TrackedSolution,
    TrackOptions,
    classify_real,
    default_workers,
    distinct_regular,
    parameter_track,
    solve,
    total_degree_start,
    track,
    track_many,
)

__all__ = [
    "DIVERGED",
    "REGULAR",
    "SINGULAR",
    "Homotopy",
    "PairingError",
    "TrackedSolution",
    "TrackOptions",
    "classify_real",
    "default_workers",
    "distinct_regular",
    "parameter_track",
    "solve",
    "total_degree_start",
    "track",
    "track_many",
]
