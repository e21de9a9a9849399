"""Adiabatic Dicke model: ground states, observables, entanglement, scaling."""

from ._kernels import BACKEND
from .model import (
    DimensionlessParams,
    ModelParams,
    ThermoObservables,
    adiabatic_amplitudes,
    effective_potential,
    effective_potential_profile,
    reduce_params,
    theta,
    thermo_limit,
    well_minima,
)
from .solver import (
    ConvergenceError,
    GridSpec,
    GroundState,
    NonConfiningPotentialError,
    QuarticConstants,
    WaveFunction,
    auto_grid,
    discrete_ground_energy,
    quartic_constants,
    quartic_reduced_profile,
    scaled_quartic_profile,
    solve_full_potential,
    solve_ground,
    solve_quartic_reduced,
    solve_scaled_quartic,
)
from .observables import (
    FeynmanHellmannReport,
    MomentRecursionReport,
    ObservableSet,
    SpinObservables,
    feynman_hellmann_check,
    full_observables,
    moment,
    moment_recursion_check,
    momentum_variance,
    observables_from_state,
    phi_nu,
    spin_observables,
)
from .entanglement import (
    TangleResult,
    overlap_kernel,
    purity_qubits,
    single_qubit_density,
    tau_infinity,
    tau_n,
    tau_n_converged,
    tau_n_critical_prediction,
    tau_one,
)
from .scaling import (
    FitResult,
    ScalingPoint,
    finite_size_prediction,
    fit_exponent,
    reconstruct_energy,
    symanzik_map,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
