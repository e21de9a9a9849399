import pytest

import adicke as ad
from adicke.model import effective_potential_profile, thermo_limit
from adicke.solver import GridSpec, _solve_on_grid


@pytest.fixture(scope="session")
def constants():
    """Pure quartic oscillator constants, shared across the whole run."""
    return ad.quartic_constants(1e-8)


@pytest.fixture(scope="session")
def critical_state_1e4():
    """Full-potential ground state at alpha=1, D=10, N=10^4."""
    p = ad.DimensionlessParams.from_alpha(1.0, 10.0, 10**4)
    return p, ad.solve_full_potential(1.0, p.nd, 10.0, 1e-9)


def moderate_wavefunction(p, num_points=2001):
    """Full-potential ground state on an explicit moderate grid.

    The O(M^2) purity quadrature wants a few thousand nodes, not the
    auto-refined solver grid; identities tested against it hold on any
    single grid.
    """
    base = effective_potential_profile(p.alpha, p.nd)

    def shifted(q):
        return base(q) + p.nd

    guess = thermo_limit(p.alpha, p.d_ratio).e0_per_n * (p.nd / p.d_ratio) + p.nd
    domain = ad.auto_grid(shifted, guess, 1e-8)
    _, wf = _solve_on_grid(shifted, GridSpec(domain.q_max, num_points))
    return wf
