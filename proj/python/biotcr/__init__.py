"""Biot poroelasticity with Crouzeix-Raviart displacement and mass-lumped RT0 flux."""

from ._core import (
    ConvergenceLevel,
    ConvergenceOptions,
    ConvergenceReport,
    DiagonalRule,
    FootingOptions,
    FootingResult,
    JumpOptions,
    KappaSpec,
    ManufacturedRun,
    MassMode,
    Mesh,
    OscillationMetrics,
    SolverError,
    State,
    convergence_study,
    cr_vertex_values,
    default_convergence_levels,
    footing_case,
    footing_step,
    lame_from_E_nu,
    manufactured_sources,
    oscillation_metric,
    read_state_csv,
    run_manufactured,
    structured_mesh,
    write_state_csv,
    write_vtk,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
