import math

import numpy as np
import pytest

import adicke as ad
from adicke.model import _thermo_branch_high, _thermo_branch_low


def test_reduce_zero_coupling():
    r = ad.reduce_params(ad.ModelParams(1.0, 5.0, 0.0, 4))
    assert r.d_ratio == 10.0
    assert r.l_coupling == 0.0
    assert r.alpha == 0.0
    assert r.nd == 40.0


def test_reduce_critical_point():
    r = ad.reduce_params(ad.ModelParams(1.0, 5.0, math.sqrt(2.5), 4))
    assert r.d_ratio == 10.0
    assert r.l_coupling == pytest.approx(2.0 * math.sqrt(5.0), rel=1e-15)
    assert r.alpha == pytest.approx(1.0, rel=1e-14)
    assert r.nd == 40.0


def test_reduce_scale_invariance():
    a = ad.reduce_params(ad.ModelParams(1.0, 5.0, math.sqrt(2.5), 4))
    b = ad.reduce_params(ad.ModelParams(2.0, 10.0, math.sqrt(10.0), 4))
    assert a == b


@pytest.mark.parametrize(
    "omega,delta,coupling,n",
    [(0.0, 1.0, 0.0, 1), (-1.0, 1.0, 0.0, 1), (1.0, 0.0, 0.0, 1),
     (1.0, 1.0, -0.5, 1), (1.0, 1.0, 0.0, 0), (1.0, 1.0, 0.0, 2.5)],
)
def test_model_params_rejects_bad_input(omega, delta, coupling, n):
    with pytest.raises(ValueError):
        ad.ModelParams(omega, delta, coupling, n)


def test_dimensionless_params_reject_inconsistent_alpha():
    with pytest.raises(ValueError):
        ad.DimensionlessParams(d_ratio=10.0, l_coupling=1.0, alpha=0.9, nd=40.0)
    with pytest.raises(ValueError):
        ad.DimensionlessParams(d_ratio=-1.0, l_coupling=0.0, alpha=0.0, nd=40.0)


def test_theta_zero_coupling_and_origin():
    p0 = ad.DimensionlessParams.from_alpha(0.0, 10.0, 4)
    q = np.linspace(-20, 20, 41)
    assert np.all(ad.theta(q, p0, 4) == 10.0)
    p = ad.DimensionlessParams.from_alpha(1.3, 10.0, 4)
    assert float(ad.theta(0.0, p, 4)) == 10.0


def test_theta_direct_value():
    # D=10, L=sqrt(20), N=1 at q=1: sqrt(100 + 20) = sqrt(120)
    p = ad.DimensionlessParams(10.0, math.sqrt(20.0), 1.0, 10.0)
    assert float(ad.theta(1.0, p, 1)) == pytest.approx(10.954451150103322, abs=1e-12)


def test_theta_lower_bound_strict():
    p = ad.DimensionlessParams.from_alpha(0.8, 7.0, 16)
    q = np.linspace(-30, 30, 1001)
    th = ad.theta(q, p, 16)
    assert np.all(th >= 7.0)
    assert np.all(th[q != 0.0] > 7.0)


def test_amplitudes_symmetric_point():
    p = ad.DimensionlessParams.from_alpha(1.7, 10.0, 8)
    ap, am = ad.adiabatic_amplitudes(0.0, p, 8)
    assert float(ap) == 1.0 and float(am) == 1.0


def test_amplitudes_strong_field_limit():
    p = ad.DimensionlessParams.from_alpha(1.0, 10.0, 4)
    ap, am = ad.adiabatic_amplitudes(1e12, p, 4)
    assert float(ap) == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert float(am) == pytest.approx(0.0, abs=1e-9)


def test_amplitudes_direct_value():
    p = ad.DimensionlessParams(10.0, math.sqrt(20.0), 1.0, 10.0)
    ap, am = ad.adiabatic_amplitudes(1.0, p, 1)
    assert float(ap) == pytest.approx(1.1866963766961889, abs=1e-12)
    assert float(am) == pytest.approx(0.769253995463226, abs=1e-12)


def test_amplitude_normalization_property():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        alpha = float(rng.uniform(0.0, 3.0))
        d = float(rng.uniform(1.0, 200.0))
        n = int(rng.integers(1, 1024))
        q = float(rng.uniform(-100.0, 100.0))
        p = ad.DimensionlessParams.from_alpha(alpha, d, n)
        ap, am = ad.adiabatic_amplitudes(q, p, n)
        assert abs(float(ap) ** 2 + float(am) ** 2 - 2.0) <= 1e-12
        assert 0.0 <= float(ap) <= math.sqrt(2.0)
        assert 0.0 <= float(am) <= math.sqrt(2.0)


def test_effective_potential_center_value():
    p = ad.DimensionlessParams.from_alpha(1.2, 10.0, 4)
    assert float(ad.effective_potential(0.0, p, 4)) == -40.0


def test_effective_potential_double_well_dips():
    p = ad.DimensionlessParams.from_alpha(2.0, 10.0, 4)
    q0 = ad.well_minima(p, 4)[1]
    v0 = float(ad.effective_potential(0.0, p, 4))
    vmin = float(ad.effective_potential(q0, p, 4))
    assert vmin < v0


def test_effective_potential_single_well_min_at_zero():
    p = ad.DimensionlessParams.from_alpha(0.5, 10.0, 4)
    q = np.linspace(-10.0, 10.0, 2001)
    v = ad.effective_potential(q, p, 4)
    assert int(np.argmin(v)) == 1000


def test_effective_potential_parity():
    rng = np.random.default_rng(3)
    q = rng.uniform(-50, 50, 400)
    for alpha in (0.0, 0.5, 1.0, 2.5):
        prof = ad.effective_potential_profile(alpha, 160.0)
        assert np.array_equal(prof(q), prof(-q))


def test_effective_potential_zero_coupling_is_shifted_harmonic():
    p = ad.DimensionlessParams.from_alpha(0.0, 10.0, 4)
    q = np.linspace(-5, 5, 11)
    assert np.allclose(ad.effective_potential(q, p, 4), q**2 - 40.0, atol=0.0)


def test_profile_collapse_pointwise():
    q = np.linspace(-40.0, 40.0, 4001)
    for alpha in (0.3, 1.0, 1.9):
        va = ad.effective_potential_profile(alpha, 1000.0)(q)
        vb = ad.effective_potential_profile(alpha, 1000.0 + 0.0)(q)
        assert np.array_equal(va, vb)
    # distinct (D, N) with equal products give bitwise-equal profiles
    pa = ad.DimensionlessParams.from_alpha(1.0, 10.0, 100)
    pb = ad.DimensionlessParams.from_alpha(1.0, 100.0, 10)
    assert np.array_equal(
        ad.effective_potential(q, pa, 100), ad.effective_potential(q, pb, 10)
    )


def test_well_minima_branches():
    p_low = ad.DimensionlessParams.from_alpha(0.5, 10.0, 4)
    assert list(ad.well_minima(p_low, 4)) == [0.0]
    p_crit = ad.DimensionlessParams.from_alpha(1.0, 10.0, 4)
    assert list(ad.well_minima(p_crit, 4)) == [0.0]
    p_high = ad.DimensionlessParams.from_alpha(2.0, 10.0, 4)
    minima = ad.well_minima(p_high, 4)
    assert minima[1] == pytest.approx(5.477225575051661, abs=1e-12)
    assert minima[0] == -minima[1]


def test_thermo_limit_normal_phase():
    t = ad.thermo_limit(0.5, 10.0)
    assert t.sx_per_n == -1.0
    assert t.order_param == 0.0
    assert t.e0_per_n == -10.0
    # frozen from the closed form 1 - (1 + a/(D sqrt(1-a)))^(-1/2)
    assert t.tau_infinity == pytest.approx(0.03358439713098138, abs=1e-14)


def test_thermo_limit_superradiant_phase():
    t = ad.thermo_limit(2.0, 10.0)
    assert t.sx_per_n == -0.5
    assert t.sx2_per_n2 == 0.25
    assert t.e0_per_n == -12.5
    assert t.order_param == pytest.approx(7.5, abs=1e-14)


def test_thermo_limit_cusp():
    assert ad.thermo_limit(1.0, 10.0).tau_infinity == 1.0
    assert ad.thermo_limit(1.0, 3.0).tau_infinity == 1.0


def test_thermo_limit_spin_sum_rule():
    for alpha in (0.0, 0.3, 1.0, 1.5, 4.0):
        t = ad.thermo_limit(alpha, 10.0)
        assert t.sx2_per_n2 + t.sz2_per_n2 == pytest.approx(1.0, abs=1e-15)
        assert t.sy2_per_n2 == 0.0


def test_thermo_branches_agree_at_critical_point():
    for d in (3.0, 10.0, 100.0):
        lo = _thermo_branch_low(1.0, d)
        hi = _thermo_branch_high(1.0, d)
        for f in ("sx_per_n", "sx2_per_n2", "sz2_per_n2", "sy2_per_n2",
                  "order_param", "e0_per_n", "tau_infinity"):
            assert abs(getattr(lo, f) - getattr(hi, f)) <= 1e-12


def test_thermo_limit_rejects_bad_input():
    with pytest.raises(ValueError):
        ad.thermo_limit(-0.1, 10.0)
    with pytest.raises(ValueError):
        ad.thermo_limit(1.0, 0.0)
