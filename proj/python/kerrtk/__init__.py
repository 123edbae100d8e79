"""Floquet Kerr oscillator toolkit (Python bindings)."""

from ._core import (
    ConfigInvalid,
    DegenerateSteady,
    DimensionMismatch,
    Diverged,
    DriveProtocol,
    EigenFailure,
    EmptyOrbit,
    ExpFailure,
    InvalidArgument,
    InvalidState,
    KerrError,
    NoRealEigenvalue,
    NotPositive,
    StepTooLarge,
    TailTooHeavy,
    TooFewPoints,
    __version__,
    bifurcation_sweep,
    effective_spectrum,
    fit_critical_drive,
    floquet_propagator,
    hamiltonian,
    integrate_master_equation,
    integrate_orbit,
    liouvillian,
    mean_field_rhs,
    run_oracles,
    steady_observables,
    steady_state,
    thermal_entropy,
    thermal_state,
    wigner,
    wigner_at,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
