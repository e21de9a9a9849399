import math

import numpy as np
import pytest

import adicke as ad
from adicke.solver import GridSpec


def harmonic(q):
    q = np.asarray(q, dtype=float)
    return q * q


class TestGridSpec:
    def test_rejects_even_or_small_counts(self):
        with pytest.raises(ValueError):
            GridSpec(5.0, 200)
        with pytest.raises(ValueError):
            GridSpec(5.0, 101)
        with pytest.raises(ValueError):
            GridSpec(0.0, 201)

    def test_center_node_and_spacing(self):
        g = GridSpec(5.0, 201)
        q = g.nodes()
        assert q[100] == 0.0
        assert g.spacing == pytest.approx(0.05)
        assert g.refined().num_points == 401


class TestAutoGrid:
    def test_harmonic_domain(self):
        g = ad.auto_grid(harmonic, 1.0, 1e-8)
        assert g.q_max >= 6.5  # Gaussian tail below 1e-9 needs |q| ~ 6.4+
        assert g.num_points >= 201

    def test_pure_quartic_domain(self):
        g = ad.auto_grid(ad.scaled_quartic_profile(0.0), 1.06, 1e-8)
        assert g.q_max >= 4.0

    def test_double_well_encloses_minima(self):
        prof = ad.effective_potential_profile(2.0, 40.0)
        g = ad.auto_grid(lambda q: prof(q) + 40.0, -10.0, 1e-8)
        assert g.q_max > 5.4772

    def test_non_confining_rejected(self):
        with pytest.raises(ad.NonConfiningPotentialError):
            ad.auto_grid(lambda q: -np.asarray(q, dtype=float) ** 2, 0.0, 1e-8)


class TestSolveGround:
    def test_harmonic_energy(self):
        state = ad.solve_ground(harmonic, GridSpec(7.0, 401), 1e-9)
        assert state.converged
        assert state.energy == pytest.approx(1.0, abs=1e-8)
        assert state.refinement_error <= 1e-9

    def test_pure_quartic_energy(self):
        state = ad.solve_ground(ad.scaled_quartic_profile(0.0), GridSpec(4.5, 401), 1e-8)
        assert state.energy == pytest.approx(1.06036, abs=1e-4)

    def test_zero_coupling_full_potential(self):
        state = ad.solve_full_potential(0.0, 40.0, 10.0, 1e-9)
        assert state.converged
        assert state.energy == pytest.approx(-39.0, abs=1e-8)

    def test_unconverged_reported_not_hidden(self):
        state = ad.solve_ground(harmonic, GridSpec(7.0, 201), 1e-15, max_refinements=2)
        assert not state.converged
        assert state.refinement_error > 1e-15
        assert np.isfinite(state.energy)

    def test_wavefunction_contract(self):
        state = ad.solve_ground(harmonic, GridSpec(7.0, 401), 1e-8)
        phi = state.wavefunction.values
        q = state.wavefunction.nodes()
        assert abs(np.trapezoid(phi * phi, q) - 1.0) <= 1e-10
        assert np.max(np.abs(phi - phi[::-1])) <= 1e-8
        floor = 1e-12 * np.max(np.abs(phi))
        assert not np.any(phi < -floor)
        assert phi[q.size // 2] > 0.0

    def test_double_well_state_is_even_not_localized(self):
        # quasi-degenerate doublet: the solver must return the symmetric
        # member, never a one-well (parity-broken) mixture
        nd = 10.0 * 1024
        state = ad.solve_full_potential(2.0, nd, 10.0, 1e-8)
        phi = state.wavefunction.values
        assert np.max(np.abs(phi - phi[::-1])) <= 1e-10
        q = state.wavefunction.nodes()
        left = np.trapezoid(np.where(q < 0, phi * phi, 0.0), q)
        assert left == pytest.approx(0.5, abs=1e-10)


class TestVariationalConvergence:
    @pytest.mark.parametrize(
        "profile,grid",
        [
            (harmonic, GridSpec(7.0, 201)),
            (ad.scaled_quartic_profile(0.0), GridSpec(4.5, 201)),
            (ad.quartic_reduced_profile(2.0, 640.0), GridSpec(40.0, 401)),
        ],
    )
    def test_discrete_energy_increases_under_refinement(self, profile, grid):
        # central differences under-resolve the kinetic term, so discrete
        # eigenvalues approach the continuum limit from below
        energies = []
        g = grid
        for _ in range(5):
            energies.append(ad.discrete_ground_energy(profile, g))
            g = g.refined()
        for a, b in zip(energies, energies[1:]):
            assert b >= a - 1e-12 * max(1.0, abs(a))

    def test_richardson_error_bounds_truth(self):
        state = ad.solve_ground(harmonic, GridSpec(7.0, 201), 1e-10)
        assert abs(state.energy - 1.0) <= 10.0 * state.refinement_error + 1e-12


class TestScaledQuartic:
    def test_zeta_zero(self):
        state = ad.solve_scaled_quartic(0.0, 1e-8)
        assert state.energy == pytest.approx(1.06036, abs=1e-4)

    def test_large_zeta_perturbative(self):
        # oracle: e0 ~ sqrt(zeta) + 3/(4 zeta) from first-order theory
        state = ad.solve_scaled_quartic(100.0, 1e-9)
        assert 10.0 < state.energy < 10.1
        assert state.energy == pytest.approx(10.0075, abs=5e-4)

    def test_slope_at_origin(self):
        ep = ad.solve_scaled_quartic(0.01, 1e-9).energy
        em = ad.solve_scaled_quartic(-0.01, 1e-9).energy
        assert (ep - em) / 0.02 == pytest.approx(0.36203, abs=1e-3)

    def test_negative_zeta_double_well(self):
        state = ad.solve_scaled_quartic(-8.0, 1e-8)
        assert state.converged
        assert state.energy < 0.0  # below the central barrier

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            ad.solve_scaled_quartic(math.inf, 1e-8)


class TestQuarticConstants:
    def test_sanity_corridors(self, constants):
        assert 1.05 < constants.beta0 < 1.07
        assert 0.355 < constants.beta1 < 0.37
        assert 0.44 < constants.k_const < 0.48

    def test_reference_values(self, constants):
        assert constants.beta0 == pytest.approx(1.06036, abs=1e-4)
        assert constants.beta1 == pytest.approx(0.36203, abs=1e-4)
        assert constants.k_const == pytest.approx(0.46, abs=5e-3)

    def test_refinement_errors_reported(self, constants):
        assert 0.0 < constants.beta0_err < 1e-7
        assert 0.0 < constants.beta1_err < 1e-7
        assert 0.0 < constants.k_const_err < 1e-7


class TestSymanzikConsistency:
    def test_direct_vs_rescaled_energy(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            alpha = float(rng.uniform(0.8, 1.2))
            nd = float(10 ** rng.uniform(1.0, 4.0))
            direct = ad.solve_quartic_reduced(alpha, nd, 1e-9).energy
            zeta, _ = ad.symanzik_map(alpha, nd)
            recon = ad.reconstruct_energy(
                alpha, nd, ad.solve_scaled_quartic(zeta, 1e-9).energy
            ) + nd
            assert abs(direct - recon) / abs(direct) <= 1e-6


def test_quartic_vs_full_truncation_gap():
    # the quartic reduction drops a -Q^6/(2(ND)^2) term; at ND = 10^4 the
    # induced relative gap on e0 is a genuine, converged 1.35e-3
    nd = 100.0 * 100.0
    full = ad.solve_full_potential(1.0, nd, 100.0, 1e-10).energy + nd
    quart = ad.solve_quartic_reduced(1.0, nd, 1e-10).energy
    rel = abs(full - quart) / abs(quart)
    assert 5e-4 < rel < 2e-3
