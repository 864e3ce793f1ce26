"""Spectral solver for bounded epicyclic orbits of a charged particle in a
cylindrically symmetric magnetic field, with direct ODE cross-validation."""

from ._core import (
    AnsatzParams,
    ClosureReport,
    ConfigError,
    FieldModel,
    PeriodicScalar,
    ReducedSolution,
    RhoResult,
    ScalingReport,
    SimConfig,
    SolverConfig,
    SolverError,
    Trajectory,
    UniformGrid,
    VerifyReport,
    analyze,
    ansatz_curvature,
    closure_check,
    closure_check_solved,
    differentiate,
    eval_B,
    eval_Q,
    F_operator,
    fixed_point_solve,
    grad_B,
    integrate_lorentz3d,
    integrate_planar,
    l0_apply,
    l0_invert,
    leading_order_rho,
    norms,
    rotation_equivariance_check,
    run_config,
    solve_rho,
    sweep_scaling,
    synthesize,
    verify_solution,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
