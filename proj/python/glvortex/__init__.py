"""Vortex energies, obstacle problems and identities on planar domains."""

from ._glvortex import (
    ConfigError,
    Domain,
    DomainError,
    Error,
    NumericError,
    PreconditionError,
    Workspace,
    H,
    H_mod,
    N_max,
    W,
    __version__,
    check_B1_identity,
    check_WH_identity,
    estimate_gamma,
    grad_H,
    green,
    lambda_floor,
    minimize,
    random_configs,
    run_obstacle,
    solve_m,
)

__all__ = [
    "ConfigError",
    "Domain",
    "DomainError",
    "Error",
    "NumericError",
    "PreconditionError",
    "Workspace",
    "H",
    "H_mod",
    "N_max",
    "W",
    "__version__",
    "check_B1_identity",
    "check_WH_identity",
    "estimate_gamma",
    "grad_H",
    "green",
    "lambda_floor",
    "minimize",
    "random_configs",
    "run_obstacle",
    "solve_m",
]
