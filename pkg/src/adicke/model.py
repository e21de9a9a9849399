"""Parameter algebra, adiabatic qubit solution and thermodynamic-limit forms.

Energies are kept in the reduced unit E = 2*eps/omega throughout; the
dimensionless potential profile depends only on the pair (alpha, N*D),
which is what makes two-parameter collapse exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT8 = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: oscillator frequency, qubit gap, coupling, qubit count."""

    omega: float
    delta: float
    coupling: float
    n_qubits: int

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be non-negative, got {self.coupling}")
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {self.n_qubits}")


@dataclass(frozen=True)
class DimensionlessParams:
    """Reduced parameters D = 2*delta/omega, L = 2*sqrt(2)*lambda/omega,
    alpha = L^2/(2D) and the product nd = N*D.

    ``alpha`` is stored as given when built through :meth:`from_alpha`
    (so sweeps hit the critical point exactly) and derived from
    ``l_coupling`` when built through :func:`reduce_params`.
    """

    d_ratio: float
    l_coupling: float
    alpha: float
    nd: float

    def __post_init__(self):
        if not self.d_ratio > 0:
            raise ValueError(f"d_ratio must be positive, got {self.d_ratio}")
        if not self.nd > 0:
            raise ValueError(f"nd must be positive, got {self.nd}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        target = self.l_coupling * self.l_coupling / (2.0 * self.d_ratio)
        if abs(self.alpha - target) > 1e-12 * max(1.0, abs(target)):
            raise ValueError(
                f"inconsistent parameters: alpha={self.alpha} but "
                f"L^2/(2D)={target}"
            )

    @classmethod
    def from_alpha(cls, alpha: float, d_ratio: float, n_qubits: int) -> "DimensionlessParams":
        """Build from (alpha, D, N); l_coupling is derived as sqrt(2*alpha*D)."""
        return cls(
            d_ratio=float(d_ratio),
            l_coupling=math.sqrt(2.0 * alpha * d_ratio),
            alpha=float(alpha),
            nd=float(n_qubits) * float(d_ratio),
        )


@dataclass(frozen=True)
class ThermoObservables:
    """Thermodynamic-limit (N -> infinity) values at one (alpha, D)."""

    sx_per_n: float
    sx2_per_n2: float
    sz2_per_n2: float
    sy2_per_n2: float
    order_param: float
    e0_per_n: float
    tau_infinity: float


def reduce_params(params: ModelParams) -> DimensionlessParams:
    """Map physical parameters to the reduced set (D, L, alpha, N*D)."""
    d_ratio = 2.0 * params.delta / params.omega
    l_coupling = SQRT8 * params.coupling / params.omega
    return DimensionlessParams(
        d_ratio=d_ratio,
        l_coupling=l_coupling,
        alpha=l_coupling * l_coupling / (2.0 * d_ratio),
        nd=params.n_qubits * d_ratio,
    )


def theta(q, p: DimensionlessParams, n_qubits: int):
    """Adiabatic qubit eigenvalue scale sqrt(D^2 + L^2 q^2 / N); >= D always."""
    q = np.asarray(q, dtype=float)
    return np.sqrt(p.d_ratio**2 + p.l_coupling**2 * q * q / n_qubits)


def adiabatic_amplitudes(q, p: DimensionlessParams, n_qubits: int):
    """Qubit ground-state amplitudes (a_plus, a_minus) at slow coordinate q.

    Normalized so a_plus^2 + a_minus^2 = 2.
    """
    q = np.asarray(q, dtype=float)
    x = p.l_coupling * q / (math.sqrt(n_qubits) * theta(q, p, n_qubits))
    x = np.clip(x, -1.0, 1.0)
    return np.sqrt(1.0 + x), np.sqrt(1.0 - x)


def effective_potential_profile(alpha: float, nd: float):
    """Reduced adiabatic potential q^2 - N*Theta(q) as a callable profile.

    Written in terms of (alpha, nd) only: N*Theta = sqrt(nd^2 + 2 alpha nd q^2),
    so parameter sets sharing (alpha, nd) produce bitwise-identical profiles.
    """

    def profile(q):
        q = np.asarray(q, dtype=float)
        return q * q - np.sqrt(nd * nd + 2.0 * alpha * nd * q * q)

    return profile


def effective_potential(q, p: DimensionlessParams, n_qubits: int):
    """Reduced adiabatic potential (units of omega/2) at coordinate q."""
    return effective_potential_profile(p.alpha, n_qubits * p.d_ratio)(q)


def well_minima(p: DimensionlessParams, n_qubits: int) -> np.ndarray:
    """Minimizing coordinates of the effective potential.

    Single minimum at 0 for alpha <= 1, symmetric pair otherwise.
    """
    if p.alpha <= 1.0:
        return np.array([0.0])
    q0 = (
        math.sqrt(n_qubits)
        * p.d_ratio
        * math.sqrt(p.alpha**2 - 1.0)
        / p.l_coupling
    )
    return np.array([-q0, q0])


def _thermo_branch_low(alpha: float, d_ratio: float) -> ThermoObservables:
    """Normal-phase (alpha <= 1) closed forms; see :func:`thermo_limit`."""
    if alpha < 1.0:
        tau = 1.0 - (1.0 + alpha / (d_ratio * math.sqrt(1.0 - alpha))) ** -0.5
    else:
        tau = 1.0  # cusp value, the alpha -> 1 limit of the line above
    return ThermoObservables(
        sx_per_n=-1.0,
        sx2_per_n2=1.0,
        sz2_per_n2=0.0,
        sy2_per_n2=0.0,
        order_param=0.0,
        e0_per_n=-d_ratio,
        tau_infinity=tau,
    )


def _thermo_branch_high(alpha: float, d_ratio: float) -> ThermoObservables:
    """Superradiant-phase (alpha >= 1) closed forms."""
    l2 = 2.0 * alpha * d_ratio
    root = math.sqrt(alpha * alpha - 1.0)
    if root > 0.0:
        tau = 1.0 - 0.5 * (1.0 + 1.0 / (d_ratio * alpha * alpha * root)) ** -0.5
    else:
        tau = 1.0
    return ThermoObservables(
        sx_per_n=-1.0 / alpha,
        sx2_per_n2=1.0 / alpha**2,
        sz2_per_n2=1.0 - 1.0 / alpha**2,
        sy2_per_n2=0.0,
        order_param=(d_ratio**2 / l2) * (alpha**2 - 1.0),
        e0_per_n=-0.5 * d_ratio * (alpha + 1.0 / alpha),
        tau_infinity=tau,
    )


def thermo_limit(alpha: float, d_ratio: float) -> ThermoObservables:
    """Thermodynamic-limit observables; second-order transition at alpha = 1."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    if not d_ratio > 0:
        raise ValueError(f"d_ratio must be positive, got {d_ratio}")
    if alpha <= 1.0:
        return _thermo_branch_low(alpha, d_ratio)
    return _thermo_branch_high(alpha, d_ratio)
