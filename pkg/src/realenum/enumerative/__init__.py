"""Enumerative problems: builders, experiments and fixtures."""

from .conics import (
    ConicDegenConfig,
    MaximalConfig,
    conditioning_transform,
    conic_family,
    figure_seed_config,
    maximal_config_verify,
    mixed_table_problems,
    search_maximal_config,
    transform_conditions,
)
from .problems import (
    ConicChart,
    InstanceResult,
    Line,
    NonGenericInput,
    Point,
    ProblemInstance,
    build_conics_mixed,
    build_lines4,
    build_planes9,
    chasles_table,
    conic_rank,
    expected_conic_count,
    random_frame,
    random_instance,
    solve_instance,
)
from .sweep import PlanesPencilFamily, SweepReport, SweepStep, conics5_sweep, degeneration_sweep, planes9_sweep
from .fixtures import fixture_names, fixture_payload, load_fixture, osculating_planes_instance, tangent_lines_instance
from .veronese import parametrization_check, veronese_count, veronese_limit_check

__all__ = [
    "ConicChart", "ConicDegenConfig", "fixture_names", "fixture_payload", "load_fixture",
    "osculating_planes_instance", "tangent_lines_instance", "InstanceResult", "Line", "MaximalConfig", "NonGenericInput",
    "PlanesPencilFamily", "Point", "ProblemInstance", "SweepReport", "SweepStep", "build_conics_mixed",
    "build_lines4", "build_planes9", "chasles_table", "conditioning_transform", "conic_family", "conic_rank",
    "conics5_sweep", "degeneration_sweep", "expected_conic_count", "figure_seed_config", "maximal_config_verify",
    "mixed_table_problems", "parametrization_check", "planes9_sweep", "random_frame", "random_instance", "search_maximal_config",
    "solve_instance", "transform_conditions", "veronese_count", "veronese_limit_check",
]
