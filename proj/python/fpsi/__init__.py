"""Python bindings for the fpsi Stokes-Biot solver."""

from ._fpsi import (
    BlockSystem,
    FpsiError,
    PhysicalParams,
    StabilityConstants,
    alpha1_formula,
    build_block_system,
    convergence_study,
    energy_check,
    estimate_coercivity,
    estimate_inf_sup,
    h_half_seminorm_squared,
    parse_config,
    stability_constants,
)

__all__ = [
    "BlockSystem",
    "FpsiError",
    "PhysicalParams",
    "StabilityConstants",
    "alpha1_formula",
    "build_block_system",
    "convergence_study",
    "energy_check",
    "estimate_coercivity",
    "estimate_inf_sup",
    "h_half_seminorm_squared",
    "parse_config",
    "stability_constants",
]
