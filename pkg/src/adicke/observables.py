"""Ground-state expectation values of the adiabatic Dicke model.

Every spin moment reduces to quadratures of the integral family
Phi_nu = int phi0^2 (1 + 2 alpha Q^2 / ND)^nu dQ over the solved
oscillator wavefunction; oscillator moments and the momentum variance
close the energy bookkeeping identity E0 = <P^2> + <Q^2> - ND Phi_{1/2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import DimensionlessParams
from .solver import (
    ConvergenceError,
    GroundState,
    QuarticConstants,
    WaveFunction,
    quartic_constants,
    solve_full_potential,
    solve_quartic_reduced,
)


@dataclass(frozen=True)
class SpinObservables:
    """Spin moments per qubit (all dimensionless)."""

    sx_per_n: float
    sx2_per_n2: float
    sy2_per_n2: float
    sz2_per_n2: float


@dataclass(frozen=True)
class ObservableSet:
    """Everything measured at one (alpha, N, D) point, reduced units."""

    sx_per_n: float
    sx2_per_n2: float
    sy2_per_n2: float
    sz2_per_n2: float
    q2: float
    q4: float
    p2: float
    order_param: float
    e0_reduced: float
    phi_table: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FeynmanHellmannReport:
    residual_alpha: float
    residual_nd: float
    de_dalpha: float
    de_dnd: float
    q2: float
    q4: float


@dataclass(frozen=True)
class MomentRecursionReport:
    residuals: dict
    max_residual: float


def phi_nu(wavefunction: WaveFunction, nu: float, p: DimensionlessParams) -> float:
    """Quadrature of phi0^2 (1 + 2 alpha Q^2 / nd)^nu; equals 1 at nu=0 or alpha=0."""
    q = wavefunction.nodes()
    phi2 = wavefunction.values**2
    base = 1.0 + 2.0 * p.alpha * q * q / p.nd
    return float(np.trapezoid(phi2 * base**nu, q))


def spin_observables(
    wavefunction: WaveFunction, p: DimensionlessParams, n_qubits: int
) -> SpinObservables:
    """Spin moments from Phi_{-1/2} and Phi_{-1}.

    <S_y> and <S_z> vanish identically in the adiabatic ground state and
    are not computed; <S_y^2>/N^2 = 1/N and the S_z^2 complement are
    exact identities, not quadratures.
    """
    phim_half = phi_nu(wavefunction, -0.5, p)
    phim_one = phi_nu(wavefunction, -1.0, p)
    sx2 = 1.0 / n_qubits + (1.0 - 1.0 / n_qubits) * phim_one
    return SpinObservables(
        sx_per_n=-phim_half,
        sx2_per_n2=sx2,
        sy2_per_n2=1.0 / n_qubits,
        sz2_per_n2=(1.0 + 1.0 / n_qubits) - sx2,
    )


def momentum_variance(wavefunction: WaveFunction) -> float:
    """<P^2> as the staggered derivative quadrature sum((dphi/dQ)^2) h.

    The forward-difference form is the one that is summation-by-parts
    exact against the central-difference Hamiltonian, so the energy
    identity closes at solver precision rather than at O(h^2).
    """
    phi = wavefunction.values
    h = wavefunction.grid.spacing
    d = np.diff(phi) / h
    return float(np.sum(d * d) * h)


def moment(wavefunction: WaveFunction, k: int) -> float:
    """<Q^k>; odd k returns exactly 0 by parity without quadrature."""
    if k < 0:
        raise ValueError(f"moment order must be non-negative, got {k}")
    if k % 2 == 1:
        return 0.0
    q = wavefunction.nodes()
    return float(np.trapezoid(q**k * wavefunction.values**2, q))


def full_observables(
    p: DimensionlessParams, n_qubits: int, tolerance: float = 1e-8, grid=None
) -> ObservableSet:
    """Solve the full adiabatic potential and assemble all observables.

    Raises ConvergenceError if the eigensolver fails to certify the
    requested tolerance, and if the assembled pieces violate the energy
    bookkeeping identity beyond the certified error.  A grid argument
    overrides the automatic domain choice.
    """
    state = solve_full_potential(p.alpha, p.nd, p.d_ratio, tolerance, grid=grid)
    if not state.converged:
        raise ConvergenceError(
            f"ground state not converged at alpha={p.alpha}, nd={p.nd} "
            f"(refinement error {state.refinement_error:.3e})",
            state,
        )
    return observables_from_state(state, p, n_qubits, tolerance)


def observables_from_state(
    state: GroundState,
    p: DimensionlessParams,
    n_qubits: int,
    tolerance: float = 1e-8,
) -> ObservableSet:
    """Assemble an ObservableSet from an already-solved ground state."""
    wf = state.wavefunction
    spins = spin_observables(wf, p, n_qubits)
    q2 = moment(wf, 2)
    q4 = moment(wf, 4)
    p2 = momentum_variance(wf)
    phi_p_half = phi_nu(wf, 0.5, p)
    phi_table = {
        -1.0: phi_nu(wf, -1.0, p),
        -0.5: -spins.sx_per_n,
        0.5: phi_p_half,
    }
    e0 = state.energy
    bookkeeping = p2 + q2 - p.nd * phi_p_half
    slack = 10.0 * max(tolerance, state.refinement_error) + 1e-11 * (1.0 + abs(e0))
    if abs(e0 - bookkeeping) > slack:
        raise ConvergenceError(
            f"energy bookkeeping violated: E0={e0} vs "
            f"<P^2>+<Q^2>-ND*Phi_1/2={bookkeeping}",
            state,
        )
    return ObservableSet(
        sx_per_n=spins.sx_per_n,
        sx2_per_n2=spins.sx2_per_n2,
        sy2_per_n2=spins.sy2_per_n2,
        sz2_per_n2=spins.sz2_per_n2,
        q2=q2,
        q4=q4,
        p2=p2,
        order_param=(p2 + q2) / n_qubits,
        e0_reduced=e0,
        phi_table=phi_table,
    )


def feynman_hellmann_check(
    p: DimensionlessParams,
    n_qubits: int,
    step: float = 2e-5,
    tolerance: float = 1e-8,
) -> FeynmanHellmannReport:
    """Finite-difference derivatives of E0(alpha, ND) against the moment forms.

    Works on the quartic-reduced problem, where dE0/dalpha must equal
    -<Q^2> + (alpha/ND)<Q^4> and dE0/d(ND) must equal
    -1 - (alpha^2/2(ND)^2)<Q^4>.  All solves share the center problem's
    grid family, so the discretization bias largely cancels inside the
    differences instead of being amplified by 1/step.  Residuals are
    returned, not judged; their scale is
    max(solver error, step^2 * curvature).
    """
    from .solver import auto_grid, quartic_reduced_profile, solve_ground

    alpha, nd = p.alpha, p.nd
    grid = auto_grid(
        quartic_reduced_profile(alpha, nd),
        solve_quartic_reduced(alpha, nd, 1e-4, max_refinements=2).energy,
        tolerance,
    )
    budget = 10

    def e0_at(a, n):
        state = solve_ground(quartic_reduced_profile(a, n), grid, tolerance, budget)
        return state.energy, state.wavefunction

    e0, wf = e0_at(alpha, nd)
    q2 = moment(wf, 2)
    q4 = moment(wf, 4)

    if alpha >= step:
        de_da = (e0_at(alpha + step, nd)[0] - e0_at(alpha - step, nd)[0]) / (2.0 * step)
    else:
        # second-order one-sided difference at the alpha = 0 boundary
        e1 = e0_at(alpha + step, nd)[0]
        e2 = e0_at(alpha + 2.0 * step, nd)[0]
        de_da = (-3.0 * e0 + 4.0 * e1 - e2) / (2.0 * step)

    step_nd = step * nd
    de_dnd = (e0_at(alpha, nd + step_nd)[0] - e0_at(alpha, nd - step_nd)[0]) / (
        2.0 * step_nd
    ) - 1.0

    residual_alpha = abs(de_da - (-q2 + alpha / nd * q4))
    residual_nd = abs(de_dnd - (-1.0 - alpha**2 / (2.0 * nd * nd) * q4))
    return FeynmanHellmannReport(
        residual_alpha=residual_alpha,
        residual_nd=residual_nd,
        de_dalpha=de_da,
        de_dnd=de_dnd,
        q2=q2,
        q4=q4,
    )


def moment_recursion_check(
    wavefunction: WaveFunction,
    nd: float,
    k_max: int = 2,
    constants: QuarticConstants | None = None,
) -> MomentRecursionReport:
    """Critical-point moment recursion residuals for even k up to k_max.

    <Q^{k+4}>/(2ND)^{2/3} = ((k+1)/(k+3)) beta0 <Q^k>
                            + (k(k^2-1)/(4(k+3))) (2ND)^{1/3} <Q^{k-2}>.
    The k=0 case reduces to <Q^4> = (beta0/3)(2ND)^{2/3}.  Expects the
    wavefunction solved at alpha=1 on the quartic-reduced problem.
    """
    if constants is None:
        constants = quartic_constants(1e-8)
    beta0 = constants.beta0
    s = (2.0 * nd) ** (1.0 / 3.0)
    residuals = {}
    for k in range(0, k_max + 1, 2):
        lhs = moment(wavefunction, k + 4) / s**2
        rhs = (k + 1.0) / (k + 3.0) * beta0 * moment(wavefunction, k)
        if k >= 2:
            rhs += (
                k * (k * k - 1.0) / (4.0 * (k + 3.0)) * s * moment(wavefunction, k - 2)
            )
        residuals[k] = abs(lhs - rhs) / abs(lhs)
    return MomentRecursionReport(
        residuals=residuals, max_residual=max(residuals.values())
    )
