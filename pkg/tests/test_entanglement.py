import math

import numpy as np
import pytest

import adicke as ad
from conftest import moderate_wavefunction


class TestTauOne:
    def test_product_state(self):
        assert ad.tau_one(-1.0) == 0.0

    def test_thermodynamic_superradiant(self):
        sx = ad.thermo_limit(2.0, 10.0).sx_per_n
        assert ad.tau_one(sx) == pytest.approx(0.75, abs=1e-14)

    def test_critical_scaling(self, constants, critical_state_1e4):
        p, state = critical_state_1e4
        sx = -ad.phi_nu(state.wavefunction, -0.5, p)
        pred = 4.0 * constants.beta1 / (2.0 * p.nd) ** (2.0 / 3.0)
        assert ad.tau_one(sx) == pytest.approx(pred, rel=0.05)

    def test_rejects_unphysical_polarization(self):
        with pytest.raises(ValueError):
            ad.tau_one(1.5)


class TestPurity:
    def test_product_state_purity_is_one(self):
        p = ad.DimensionlessParams.from_alpha(0.0, 10.0, 16)
        wf = moderate_wavefunction(p)
        assert abs(ad.purity_qubits(wf, p, 16) - 1.0) <= 1e-12

    def test_bounded(self):
        p = ad.DimensionlessParams.from_alpha(1.5, 10.0, 32)
        wf = moderate_wavefunction(p)
        purity = ad.purity_qubits(wf, p, 32)
        assert 0.0 < purity <= 1.0

    def test_single_qubit_closed_form(self):
        # oracle: for N=1 the double integral reduces to the explicit 2x2
        # density matrix result (1 + Phi_{-1/2}^2)/2, odd terms vanishing
        p = ad.DimensionlessParams.from_alpha(1.2, 10.0, 1)
        wf = moderate_wavefunction(p, num_points=4001)
        purity = ad.purity_qubits(wf, p, 1)
        phim = ad.phi_nu(wf, -0.5, p)
        assert purity == pytest.approx(0.5 * (1.0 + phim**2), abs=1e-10)

    def test_kernel_symmetric_and_bounded(self):
        p = ad.DimensionlessParams.from_alpha(1.4, 10.0, 32)
        q = np.linspace(-12.0, 12.0, 101)
        o = ad.overlap_kernel(q, q, p)
        assert np.array_equal(o, o.T)
        assert np.all(o <= 1.0 + 1e-12)
        assert np.all(o >= 0.0)
        assert np.allclose(np.diag(o), 1.0, atol=1e-12)


class TestTauN:
    def test_product_state(self):
        p = ad.DimensionlessParams.from_alpha(0.0, 10.0, 16)
        wf = moderate_wavefunction(p)
        res = ad.tau_n(wf, p, 16)
        assert abs(res.tau_n) <= 1e-11
        assert res.eta == pytest.approx(1.0 / (1.0 - 2.0**-16), rel=1e-15)

    def test_superradiant_approaches_thermo_limit(self):
        p = ad.DimensionlessParams.from_alpha(2.0, 10.0, 1024)
        res = ad.tau_n_converged(p, 1024)
        target = ad.tau_infinity(2.0, 10.0)
        assert abs(res.tau_n - target) / target <= 0.02

    def test_quenching_monotone_in_n(self):
        values = []
        for n in (4, 16, 64, 256):
            p = ad.DimensionlessParams.from_alpha(1.0, 10.0, n)
            values.append(ad.tau_n_converged(p, n).tau_n)
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[-1] < 1.0

    def test_tangle_result_identity(self):
        p = ad.DimensionlessParams.from_alpha(1.0, 10.0, 64)
        wf = moderate_wavefunction(p)
        res = ad.tau_n(wf, p, 64)
        assert res.tau_n == pytest.approx(res.eta * (1.0 - res.purity), abs=1e-15)
        assert res.tau1 == pytest.approx(
            ad.tau_one(-ad.phi_nu(wf, -0.5, p)), abs=1e-12
        )

    def test_critical_amplitude_matches_defining_integral(self, constants):
        # the large-N tail of 1 - tau_N follows
        #   sqrt(pi) K (2D)^{1/3} N^{-1/6}
        # (kernel-width asymptotics of the purity integral; the same
        # computation reproduces both closed-form tau_infinity branches)
        amp = math.sqrt(math.pi) * constants.k_const * 20.0 ** (1.0 / 3.0)
        n = 2**18
        p = ad.DimensionlessParams.from_alpha(1.0, 10.0, n)
        res = ad.tau_n_converged(p, n)
        ratio = (1.0 - res.tau_n) * n ** (1.0 / 6.0) / amp
        assert 0.9 <= ratio <= 1.02


class TestTauInfinity:
    def test_decoupled(self):
        assert ad.tau_infinity(0.0, 10.0) == 0.0

    def test_cusp(self):
        assert ad.tau_infinity(1.0, 10.0) == 1.0

    def test_superradiant_value(self):
        assert ad.tau_infinity(2.0, 10.0) == pytest.approx(0.5035698406733917, abs=1e-14)

    def test_cusp_is_maximum(self):
        taus = [ad.tau_infinity(a, 10.0) for a in (0.9, 0.99, 1.0, 1.01, 1.1)]
        assert taus[2] == max(taus)


class TestCriticalPrediction:
    def test_reference_value(self):
        # 1 - sqrt(pi) 0.46 / (20^{1/3} 10)
        val = ad.tau_n_critical_prediction(10**6, 10.0, 0.46)
        assert val == pytest.approx(0.9699630312435371, abs=1e-12)

    def test_limits(self):
        assert ad.tau_n_critical_prediction(10**30, 10.0, 0.46) == pytest.approx(1.0, abs=1e-4)
        assert ad.tau_n_critical_prediction(10**6, 1e12, 0.46) == pytest.approx(1.0, abs=1e-4)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            ad.tau_n_critical_prediction(0, 10.0, 0.46)


class TestDualRoute:
    @pytest.mark.parametrize("alpha,n", [(0.5, 16), (1.0, 64), (1.8, 32)])
    def test_tau1_from_density_matrix(self, alpha, n):
        p = ad.DimensionlessParams.from_alpha(alpha, 10.0, n)
        state = ad.solve_full_potential(alpha, p.nd, 10.0, 1e-9)
        rho = ad.single_qubit_density(state.wavefunction, p, n)
        assert rho[0, 1] == rho[1, 0]
        assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
        tau_direct = 2.0 * (1.0 - float(np.trace(rho @ rho)))
        sx = ad.spin_observables(state.wavefunction, p, n).sx_per_n
        assert abs(tau_direct - ad.tau_one(sx)) <= 1e-8
