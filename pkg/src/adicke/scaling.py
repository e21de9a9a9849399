"""Symanzik change of variables, finite-size expansions, and exponent fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .solver import QuarticConstants


@dataclass(frozen=True)
class ScalingPoint:
    n_qubits: int
    d_ratio: float
    alpha: float
    observable_name: str
    value: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError(f"non-finite value for {self.observable_name}")


@dataclass(frozen=True)
class FitResult:
    exponent: float
    prefactor: float
    r_squared: float
    n_range: tuple

    def __post_init__(self):
        if not (0.0 <= self.r_squared <= 1.0):
            raise ValueError(f"r_squared out of [0,1]: {self.r_squared}")
        if not self.n_range[0] < self.n_range[1]:
            raise ValueError(f"degenerate fit range {self.n_range}")


def symanzik_map(alpha: float, nd: float):
    """Map (alpha, ND) onto the one-parameter family zeta q^2 + q^4.

    Returns (zeta, q_scale) with q = Q * q_scale,
    zeta = (2 ND / alpha^2)^{2/3} (1 - alpha); zeta is exactly 0 at the
    critical coupling and positive below it.
    """
    if not alpha > 0:
        raise ValueError("symanzik map degenerate at alpha = 0")
    if not nd > 0:
        raise ValueError(f"nd must be positive, got {nd}")
    q_scale = (alpha * alpha / (2.0 * nd)) ** (1.0 / 6.0)
    zeta = (2.0 * nd / (alpha * alpha)) ** (2.0 / 3.0) * (1.0 - alpha)
    return zeta, q_scale


def reconstruct_energy(alpha: float, nd: float, e0_scaled: float) -> float:
    """E0(alpha, ND) = -ND + (alpha^2/2ND)^{1/3} e0(zeta)."""
    return -nd + (alpha * alpha / (2.0 * nd)) ** (1.0 / 3.0) * e0_scaled


_KNOWN_OBSERVABLES = (
    "sx_per_n",
    "sx2_per_n2",
    "order_param_over_D",
    "q2",
    "q4",
    "e0_correction",
    "tau1",
    "tau_n",
)


def finite_size_prediction(
    observable_name: str,
    n_qubits: int,
    d_ratio: float,
    constants: QuarticConstants,
) -> float:
    """Truncated critical-point asymptotics with the supplied constants.

    ``phi_nu:<nu>`` is accepted for the integral family; the remaining
    names match the observable fields.  All formulas are the alpha = 1
    leading-plus-first-correction forms.
    """
    nd2 = (2.0 * float(n_qubits) * d_ratio) ** (2.0 / 3.0)
    nd4 = nd2 * nd2
    b0, b1 = constants.beta0, constants.beta1
    if observable_name.startswith("phi_nu:"):
        nu = float(observable_name.split(":", 1)[1])
        return 1.0 + 4.0 * nu * b1 / nd2 + (8.0 / 3.0) * nu * (nu - 1.0) * b0 / nd4
    if observable_name == "sx_per_n":
        return -1.0 + 2.0 * b1 / nd2 - 2.0 * b0 / nd4
    if observable_name == "sx2_per_n2":
        frac = (n_qubits - 1.0) / n_qubits
        return 1.0 - frac * (4.0 * b1 / nd2 - (16.0 / 3.0) * b0 / nd4)
    if observable_name == "order_param_over_D":
        return 2.0 * b1 / nd2 + (4.0 / 3.0) * b0 / nd4
    if observable_name == "q2":
        return b1 * (2.0 * n_qubits * d_ratio) ** (1.0 / 3.0)
    if observable_name == "q4":
        return (b0 / 3.0) * nd2
    if observable_name == "e0_correction":
        return b0 / (2.0 * n_qubits * d_ratio) ** (1.0 / 3.0)
    if observable_name == "tau1":
        return 4.0 * b1 / nd2
    if observable_name == "tau_n":
        from .entanglement import tau_n_critical_prediction

        return tau_n_critical_prediction(n_qubits, d_ratio, constants.k_const)
    raise ValueError(
        f"unknown observable {observable_name!r}; expected phi_nu:<nu> or one of "
        f"{_KNOWN_OBSERVABLES}"
    )


_TRANSFORMS = {
    "identity": lambda v: v,
    "abs": np.abs,
    "one_plus": lambda v: 1.0 + v,
    "one_minus": lambda v: 1.0 - v,
    "negate": lambda v: -v,
}


def fit_exponent(points, transform: str = "identity") -> FitResult:
    """Least-squares log-log fit of transformed values against N.

    ``transform`` is a named map applied before taking logs (deviations
    from a limit are fitted as e.g. ``one_plus`` for 1 + <S_x>/N); an
    explicit offset can be given as ``shift:<c>`` meaning value - c.
    Requires >= 4 points spanning >= 1.5 decades, all transformed values
    positive.
    """
    if transform.startswith("shift:"):
        c = float(transform.split(":", 1)[1])

        def tf(v):
            return v - c

    else:
        try:
            tf = _TRANSFORMS[transform]
        except KeyError:
            raise ValueError(
                f"unknown transform {transform!r}; expected shift:<c> or one of "
                f"{sorted(_TRANSFORMS)}"
            ) from None
    pts = sorted(points, key=lambda s: s.n_qubits)
    if len(pts) < 4:
        raise ValueError(f"need >= 4 points for a fit, got {len(pts)}")
    n = np.array([float(s.n_qubits) for s in pts])
    span = math.log10(n[-1] / n[0])
    if span < 1.5:
        raise ValueError(f"N span must cover >= 1.5 decades, got {span:.2f}")
    y = tf(np.array([s.value for s in pts]))
    if np.any(y <= 0.0):
        raise ValueError("transformed values must be positive for a log-log fit")
    ln_n = np.log(n)
    ln_y = np.log(y)
    slope, intercept = np.polyfit(ln_n, ln_y, 1)
    fitted = slope * ln_n + intercept
    ss_res = float(np.sum((ln_y - fitted) ** 2))
    ss_tot = float(np.sum((ln_y - ln_y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return FitResult(
        exponent=float(slope),
        prefactor=float(math.exp(intercept)),
        r_squared=r2,
        n_range=(int(n[0]), int(n[-1])),
    )
