"""Independent numerical checks: dynamic programming, competitors, structure."""

from .competitors import (
    CompetitorEntry,
    CompetitorResult,
    competitor_costs,
    descent_process,
    up_boundary_down_process,
    up_down_process,
)
from .dp import DpConfig, DpResult, solve_dp, value_csv
from .kernels import COMPILED_AVAILABLE, active_backend
from .structure import StructureReport, extract_structure

__all__ = [
    "COMPILED_AVAILABLE",
    "CompetitorEntry",
    "CompetitorResult",
    "DpConfig",
    "DpResult",
    "StructureReport",
    "active_backend",
    "competitor_costs",
    "descent_process",
    "extract_structure",
    "solve_dp",
    "up_boundary_down_process",
    "up_down_process",
    "value_csv",
]
