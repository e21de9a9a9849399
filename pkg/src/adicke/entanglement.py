"""Tangles: single-qubit linear entropy and the oscillator-qubits bipartition.

The N-qubit purity is a 2D quadrature of the per-qubit overlap kernel

    O(Q, Q') = 1/2 [1 + (D^2 + L^2 Q Q'/N) / (Theta(Q) Theta(Q'))]

raised to the N-th power.  O is 1 on the diagonal and at zero coupling,
which pins purity to 1 for product states; O^N is evaluated as
exp(N log O) so arbitrarily large N stays in range.  The D^2 + L^2 Q Q'/N
numerator is the analytic continuation of Theta^2 to mixed arguments and
is well defined for Q Q' < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import purity_double_sum
from .model import DimensionlessParams, effective_potential_profile, thermo_limit
from .observables import phi_nu
from .solver import GridSpec, WaveFunction, _solve_on_grid, auto_grid


@dataclass(frozen=True)
class TangleResult:
    tau1: float
    tau_n: float
    purity: float
    eta: float


def tau_one(sx_per_n: float) -> float:
    """Single-qubit tangle 1 - (<S_x>/N)^2."""
    if abs(sx_per_n) > 1.0 + 1e-12:
        raise ValueError(f"|sx_per_n| must be <= 1, got {sx_per_n}")
    return max(0.0, 1.0 - sx_per_n * sx_per_n)


def overlap_kernel(q, q_prime, p: DimensionlessParams) -> np.ndarray:
    """Per-qubit overlap O(Q, Q') on a coordinate mesh (values in [0, 1])."""
    q = np.asarray(q, dtype=float)
    q_prime = np.asarray(q_prime, dtype=float)
    alpha, nd = p.alpha, p.nd
    th = np.sqrt(1.0 + 2.0 * alpha * q * q / nd)
    th_p = np.sqrt(1.0 + 2.0 * alpha * q_prime * q_prime / nd)
    f = (1.0 + 2.0 * alpha * np.multiply.outer(q, q_prime) / nd) / np.multiply.outer(
        th, th_p
    )
    return 0.5 * (1.0 + f)


def purity_qubits(
    wavefunction: WaveFunction, p: DimensionlessParams, n_qubits: int
) -> float:
    """Tr rho_N^2 by tensor-product trapezoid quadrature of O(Q,Q')^N.

    Cost is O(M^2) in the grid size; evaluate on a few thousand nodes
    (see tau_n_converged for the refinement loop), not on the auto-refined
    solver grids.
    """
    q = wavefunction.nodes()
    h = wavefunction.grid.spacing
    weights = wavefunction.values**2 * h
    # trapezoid end weights (the amplitudes there are already ~0)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    theta_rel = np.sqrt(1.0 + 2.0 * p.alpha * q * q / p.nd)
    return float(
        purity_double_sum(weights, q, theta_rel, p.alpha, p.nd, int(n_qubits))
    )


def qubit_normalization(n_qubits: int) -> float:
    """eta = 1/(1 - 2^-N); indistinguishable from 1 beyond N ~ 60."""
    if n_qubits >= 60:
        return 1.0
    return 1.0 / (1.0 - 2.0 ** (-float(n_qubits)))


def tau_n(
    wavefunction: WaveFunction, p: DimensionlessParams, n_qubits: int
) -> TangleResult:
    """Oscillator-qubits tangle eta (1 - Tr rho_N^2) on the given grid."""
    purity = purity_qubits(wavefunction, p, n_qubits)
    eta = qubit_normalization(n_qubits)
    sx = -phi_nu(wavefunction, -0.5, p)
    return TangleResult(
        tau1=tau_one(sx),
        tau_n=eta * (1.0 - purity),
        purity=purity,
        eta=eta,
    )


def tau_n_converged(
    p: DimensionlessParams,
    n_qubits: int,
    purity_tol: float = 1e-6,
    start_points: int | None = None,
    max_doublings: int = 7,
) -> TangleResult:
    """Tangle with the 2D quadrature refined until purity moves < purity_tol.

    The 1D problem is re-solved on each refinement level of the same
    domain, so the quadrature grid always carries a consistent
    wavefunction; grids above ~26k points are never needed because the
    purity kernel is smooth.
    """
    base = effective_potential_profile(p.alpha, p.nd)

    def shifted(q):
        return base(q) + p.nd

    n_qubits_eff = p.nd / p.d_ratio
    guess = thermo_limit(p.alpha, p.d_ratio).e0_per_n * n_qubits_eff + p.nd
    domain = auto_grid(shifted, guess, 1e-8)
    if start_points is None:
        # initial spacing ~ 0.12 resolves any well the solver can produce
        start_points = max(401, int(16.0 * domain.q_max) | 1)
    grid = GridSpec(domain.q_max, start_points)
    _, wf = _solve_on_grid(shifted, grid)
    prev = purity_qubits(wf, p, n_qubits)
    result_wf = wf
    purity = prev
    for _ in range(max_doublings):
        if 2 * (grid.num_points - 1) + 1 > 30001:  # O(M^2) kernel guard
            break
        grid = grid.refined()
        _, wf = _solve_on_grid(shifted, grid)
        purity = purity_qubits(wf, p, n_qubits)
        result_wf = wf
        if abs(purity - prev) < purity_tol:
            break
        prev = purity
    eta = qubit_normalization(n_qubits)
    sx = -phi_nu(result_wf, -0.5, p)
    return TangleResult(
        tau1=tau_one(sx), tau_n=eta * (1.0 - purity), purity=purity, eta=eta
    )


def tau_infinity(alpha: float, d_ratio: float) -> float:
    """Thermodynamic-limit tangle; cusp with value 1 at alpha = 1."""
    return thermo_limit(alpha, d_ratio).tau_infinity


def tau_n_critical_prediction(n_qubits: int, d_ratio: float, k_const: float) -> float:
    """Large-N critical asymptote 1 - sqrt(pi) K / ((2D)^{1/3} N^{1/6})."""
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    return 1.0 - math.sqrt(math.pi) * k_const / (
        (2.0 * d_ratio) ** (1.0 / 3.0) * float(n_qubits) ** (1.0 / 6.0)
    )


def single_qubit_density(
    wavefunction: WaveFunction, p: DimensionlessParams, n_qubits: int
) -> np.ndarray:
    """Reduced 2x2 density matrix of one qubit by explicit quadrature.

    Independent route to tau1: the diagonal carries the (parity-odd,
    hence vanishing) polarization integral, the off-diagonal is
    -Phi_{-1/2}/2.  Kept as a cross-check against tau_one.
    """
    q = wavefunction.nodes()
    phi2 = wavefunction.values**2
    u_over_theta = (p.l_coupling * q / math.sqrt(n_qubits)) / np.sqrt(
        p.d_ratio**2 + p.l_coupling**2 * q * q / n_qubits
    )
    pol = float(np.trapezoid(phi2 * u_over_theta, q))
    base = 1.0 + 2.0 * p.alpha * q * q / p.nd
    off = -0.5 * float(np.trapezoid(phi2 * base**-0.5, q))
    return np.array([[0.5 * (1.0 - pol), off], [off, 0.5 * (1.0 + pol)]])
