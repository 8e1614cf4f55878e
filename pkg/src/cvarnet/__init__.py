"""Coupled VARX estimation and Granger-causality network extraction for
paired macroeconomic panels (quarterly GDP levels vs annual corruption
scores interpolated to quarters)."""

from .panel import (
    Frequency,
    Panel,
    RawSeriesSet,
    VariableKind,
    align_panel,
    interpolate_annual_to_quarterly,
    load_series_csv,
    panel_from_csv,
    panel_to_csv,
)
from .varx import (
    CoupledFit,
    Criterion,
    EquationRole,
    LagSelection,
    VarxFit,
    fit_coupled,
    fit_varx,
    log_likelihood,
    select_lag,
)
from .granger import (
    AdjacencyRole,
    CausalityNetwork,
    Correction,
    GrangerTest,
    WeightedAdjacency,
    assemble_network,
    block_f_test,
    build_adjacency,
    f_cdf,
)
from .diagnostics import (
    CusumReport,
    StabilityReport,
    companion_matrix,
    companion_stability,
    ols_cusum,
)
from .simulate import GeneratorSpec, random_stable_spec, simulate, spectral_radius
from .estimators import CoupledVarx, GrangerNetwork

__version__ = "0.1.0"

__all__ = [
    "AdjacencyRole",
    "CausalityNetwork",
    "CoupledFit",
    "CoupledVarx",
    "Correction",
    "Criterion",
    "CusumReport",
    "EquationRole",
    "Frequency",
    "GeneratorSpec",
    "GrangerNetwork",
    "GrangerTest",
    "LagSelection",
    "Panel",
    "RawSeriesSet",
    "StabilityReport",
    "VariableKind",
    "VarxFit",
    "WeightedAdjacency",
    "align_panel",
    "assemble_network",
    "block_f_test",
    "build_adjacency",
    "companion_matrix",
    "companion_stability",
    "f_cdf",
    "fit_coupled",
    "fit_varx",
    "interpolate_annual_to_quarterly",
    "load_series_csv",
    "log_likelihood",
    "ols_cusum",
    "panel_from_csv",
    "panel_to_csv",
    "random_stable_spec",
    "select_lag",
    "simulate",
    "spectral_radius",
]
