"""Metric-bracket relaxation solvers for fluid and plasma equilibria."""

from ._core import (
    GridSpec,
    emit_config,
    fit_exponential_rate,
    gradient,
    gs_solve,
    integrate,
    parse_config,
    poisson_dirichlet,
    poisson_periodic,
    preset_names,
    preset_table_text,
    run_preset,
)

__all__ = [
    "GridSpec",
    "emit_config",
    "fit_exponential_rate",
    "gradient",
    "gs_solve",
    "integrate",
    "parse_config",
    "poisson_dirichlet",
    "poisson_periodic",
    "preset_names",
    "preset_table_text",
    "run_preset",
]
