"""Optimal syntheses, maximum-principle certificates and DP cross-checks for a
five-parameter family of finite-horizon discounted control problems with an
optional unilateral state constraint ``x <= 1``."""

from .core import (
    Control,
    FeasibilityReport,
    Params,
    Process,
    ProblemKind,
    Trajectory,
    augment_mayer,
    check_feasibility,
    cost,
    integrate_control,
)
from .errors import (
    ConfigurationError,
    DomainMismatch,
    GrowthPMPError,
    InvalidInput,
    InvalidKind,
    InvalidParams,
)
from .synthesis import (
    CaseLabel,
    Landmarks,
    SynthesisResult,
    classify,
    landmarks,
    synthesize,
    synthesize_fp1,
    synthesize_fp2,
)

__version__ = "0.1.0"
