"""Exact geometric solver for least gradient functions on the unit disk.

Boundary data are piecewise constant functions on the circle; solutions are
built from non-crossing chord systems whose level sets can be reasoned about
exactly.  The package provides the boundary-data model, the binary and
multi-level solvers, verification scenarios, and a small CLI.
"""

from .circle_geometry import (
    Angle,
    Arc,
    ArcEdge,
    Cell,
    ChordEdge,
    DomainError,
    chord_length,
    segment_area,
)
from .boundary_data import (
    CantorStage,
    DiscreteConvolution,
    EvaluableBoundary,
    PiecewiseConstantBoundary,
    build_fn,
    build_gn,
    cantor_measure_limit,
    cantor_stage,
    eta_minus,
    eta_plus,
    quantize,
)
from .chord_solver import (
    BinaryDiskFunction,
    ChordConfiguration,
    Transition,
    config_energy,
    config_to_function,
    enumerate_optimal,
    region_subset,
    solve_binary,
    transitions_of,
)
from .level_stack import (
    DEFAULT_SEED,
    L1Estimate,
    LevelSetStack,
    LevelSlice,
    NestednessError,
    bv_energy,
    disk_samples,
    l1_distance,
    solve_general,
)
from .analysis import (
    ScenarioReport,
    TraceEstimate,
    Verdict,
    cantor_nonexistence_demo,
    collect_trace_points,
    minmax_check,
    monotone_pipeline,
    nonlin_demo,
    nonlocality_demo,
    oracle_check,
    sin_meanval_check,
    trace,
    trapezoid_check,
)

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "Arc",
    "ArcEdge",
    "BinaryDiskFunction",
    "CantorStage",
    "Cell",
    "ChordConfiguration",
    "ChordEdge",
    "DEFAULT_SEED",
    "DiscreteConvolution",
    "DomainError",
    "EvaluableBoundary",
    "L1Estimate",
    "LevelSetStack",
    "LevelSlice",
    "NestednessError",
    "PiecewiseConstantBoundary",
    "ScenarioReport",
    "TraceEstimate",
    "Transition",
    "Verdict",
    "build_fn",
    "build_gn",
    "bv_energy",
    "cantor_measure_limit",
    "cantor_nonexistence_demo",
    "cantor_stage",
    "chord_length",
    "collect_trace_points",
    "config_energy",
    "config_to_function",
    "disk_samples",
    "enumerate_optimal",
    "eta_minus",
    "eta_plus",
    "l1_distance",
    "minmax_check",
    "monotone_pipeline",
    "nonlin_demo",
    "nonlocality_demo",
    "oracle_check",
    "quantize",
    "region_subset",
    "segment_area",
    "sin_meanval_check",
    "solve_binary",
    "solve_general",
    "trace",
    "transitions_of",
    "trapezoid_check",
    "__version__",
]
