"""Self-contained invariant suite behind the `validate` CLI subcommand.

Each check returns (name, passed, detail); the CLI prints one line per
check and exits nonzero if any fail.  Checks mirror the properties the
test suite asserts, sized to finish in a couple of minutes.
"""

from __future__ import annotations

import math

import numpy as np

from . import entanglement, model, observables, scaling, solver

D_REF = 10.0


def _params(alpha, d_ratio, n):
    return model.DimensionlessParams.from_alpha(alpha, d_ratio, n)


def check_potential_parity():
    rng = np.random.default_rng(7)
    q = rng.uniform(-50.0, 50.0, 500)
    for alpha in (0.0, 0.5, 1.0, 2.0):
        prof = model.effective_potential_profile(alpha, 640.0)
        diff = np.max(np.abs(prof(q) - prof(-q)))
        if diff != 0.0:
            return False, f"parity violated by {diff:.2e} at alpha={alpha}"
    return True, "V(q) == V(-q) bitwise on 500 random nodes x 4 couplings"


def check_theta_bound():
    rng = np.random.default_rng(8)
    q = rng.uniform(-30.0, 30.0, 1000)
    p = _params(1.3, D_REF, 16)
    th = model.theta(q, p, 16)
    if np.any(th < p.d_ratio):
        return False, "Theta dipped below D"
    p0 = _params(0.0, D_REF, 16)
    th0 = model.theta(q, p0, 16)
    if np.max(np.abs(th0 - p0.d_ratio)) != 0.0:
        return False, "Theta != D at zero coupling"
    return True, "Theta >= D, equality at L=0"


def check_amplitude_normalization():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(1000):
        alpha = rng.uniform(0.0, 3.0)
        n = int(rng.integers(1, 512))
        q = rng.uniform(-40.0, 40.0)
        p = _params(alpha, rng.uniform(2.0, 100.0), n)
        ap, am = model.adiabatic_amplitudes(q, p, n)
        worst = max(worst, abs(float(ap) ** 2 + float(am) ** 2 - 2.0))
    ok = worst <= 1e-12
    return ok, f"max |a+^2 + a-^2 - 2| = {worst:.2e} over 1000 random draws"


def check_profile_collapse():
    q = np.linspace(-40.0, 40.0, 801)
    for alpha in (0.5, 1.0, 2.0):
        va = model.effective_potential_profile(alpha, 10.0 * 100)(q)
        vb = model.effective_potential_profile(alpha, 100.0 * 10)(q)
        rel = np.max(np.abs(va - vb) / np.maximum(np.abs(va), 1.0))
        if rel > 1e-12:
            return False, f"profiles differ by {rel:.2e} at alpha={alpha}"
    return True, "(alpha, ND)-equal parameter sets give identical profiles"


def check_thermo_continuity():
    lo = model._thermo_branch_low(1.0, D_REF)
    hi = model._thermo_branch_high(1.0, D_REF)
    worst = max(
        abs(getattr(lo, f) - getattr(hi, f))
        for f in (
            "sx_per_n",
            "sx2_per_n2",
            "sz2_per_n2",
            "sy2_per_n2",
            "order_param",
            "e0_per_n",
            "tau_infinity",
        )
    )
    return worst <= 1e-12, f"branch mismatch at alpha=1: {worst:.2e}"


def check_discrete_energy_monotone():
    cases = [
        (lambda q: np.asarray(q) ** 2, solver.GridSpec(7.0, 201)),
        (solver.scaled_quartic_profile(0.0), solver.GridSpec(4.5, 201)),
        (solver.quartic_reduced_profile(2.0, 640.0), solver.GridSpec(40.0, 401)),
    ]
    for prof, grid in cases:
        prev = -np.inf
        g = grid
        for _ in range(5):
            e = solver.discrete_ground_energy(prof, g)
            if e < prev - 1e-12 * max(1.0, abs(prev)):
                return False, f"discrete energy decreased on refinement: {e} < {prev}"
            prev = e
            g = g.refined()
    return True, "discrete ground energy increases monotonically under refinement"


def check_ground_state_shape():
    for prof, guess in [
        (lambda q: np.asarray(q) ** 2, 1.0),
        (solver.quartic_reduced_profile(2.0, 640.0), -10.0),
        (solver.scaled_quartic_profile(-8.0), -10.0),
    ]:
        grid = solver.auto_grid(prof, guess, 1e-8)
        state = solver.solve_ground(prof, grid, 1e-8)
        phi = state.wavefunction.values
        q = state.wavefunction.nodes()
        norm = abs(np.trapezoid(phi * phi, q) - 1.0)
        parity = np.max(np.abs(phi - phi[::-1]))
        floor = 1e-12 * np.max(np.abs(phi))
        nodeless = not np.any(phi < -floor)
        if norm > 1e-10 or parity > 1e-8 or not nodeless:
            return False, f"norm {norm:.1e} parity {parity:.1e} nodeless {nodeless}"
    return True, "solved states normalized, even, nodeless"


def check_harmonic_energy():
    state = solver.solve_ground(
        lambda q: np.asarray(q) ** 2, solver.GridSpec(7.0, 401), 1e-9
    )
    err = abs(state.energy - 1.0)
    full = solver.solve_full_potential(0.0, 640.0, D_REF, 1e-9)
    err2 = abs(full.energy - (1.0 - 640.0))
    ok = err <= 1e-8 and err2 <= 1e-8
    return ok, f"|E-1| = {err:.1e} (harmonic), |E0-(1-ND)| = {err2:.1e} (L=0 full)"


def check_symanzik_consistency():
    pts = [
        (0.8, 10.0),
        (0.9, 100.0),
        (1.0, 40.0),
        (1.05, 300.0),
        (1.2, 1000.0),
        (0.85, 3000.0),
        (1.1, 30.0),
        (1.0, 10000.0),
    ]
    worst = 0.0
    for alpha, nd in pts:
        direct = solver.solve_quartic_reduced(alpha, nd, 1e-10).energy
        zeta, _ = scaling.symanzik_map(alpha, nd)
        recon = scaling.reconstruct_energy(
            alpha, nd, solver.solve_scaled_quartic(zeta, 1e-10).energy
        ) + nd
        worst = max(worst, abs(direct - recon) / max(abs(direct), 1e-30))
        if worst > 1e-6:
            return False, f"mismatch {worst:.2e} at alpha={alpha}, nd={nd}"
    return True, f"direct vs rescaled e0 agree; worst rel diff {worst:.2e}"


def check_quartic_vs_full():
    nd = 100.0 * 100.0
    full = solver.solve_full_potential(1.0, nd, 100.0, 1e-10).energy + nd
    quart = solver.solve_quartic_reduced(1.0, nd, 1e-10).energy
    rel = abs(full - quart) / abs(quart)
    # measured truncation gap of the quartic reduction is 1.35e-3 here
    return rel <= 2e-3, f"rel gap {rel:.2e} (quartic reduction truncation)"


def check_exact_spin_identities():
    for alpha, n in [(0.0, 4), (0.7, 16), (1.0, 64), (1.6, 8)]:
        p = _params(alpha, D_REF, n)
        obs = observables.full_observables(p, n, 1e-8)
        if abs(obs.sx2_per_n2 + obs.sz2_per_n2 - (1.0 + 1.0 / n)) > 1e-15:
            return False, f"S_z^2 complement broken at alpha={alpha}"
        if obs.sy2_per_n2 != 1.0 / n:
            return False, f"S_y^2 != 1/N at alpha={alpha}"
        state = solver.solve_full_potential(alpha, p.nd, D_REF, 1e-8)
        if abs(observables.phi_nu(state.wavefunction, 0.0, p) - 1.0) > 1e-13:
            return False, "Phi_0 != 1"
        if observables.moment(state.wavefunction, 3) != 0.0:
            return False, "odd moment not exactly zero"
    return True, "S_z^2 complement, S_y^2 = 1/N, Phi_0 = 1, odd moments = 0"


def check_energy_bookkeeping():
    worst = 0.0
    for alpha in (0.0, 0.5, 1.0, 1.5):
        for n in (4, 16, 64, 256):
            p = _params(alpha, D_REF, n)
            obs = observables.full_observables(p, n, 1e-8)
            lhs = obs.e0_reduced
            rhs = obs.p2 + obs.q2 - p.nd * obs.phi_table[0.5]
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return worst <= 1e-6, f"worst bookkeeping residual {worst:.2e} on 4x4 lattice"


def check_sx_monotone_in_alpha():
    # <S_x>/N starts at -1 and rises toward -1/alpha: the magnitude of the
    # x-polarization shrinks as the coupling tilts the qubits along z
    n = 64
    alphas = np.linspace(0.0, 2.0, 11)
    vals = []
    for alpha in alphas:
        p = _params(float(alpha), D_REF, n)
        vals.append(observables.full_observables(p, n, 1e-8).sx_per_n)
    diffs = np.diff(vals)
    ok = bool(np.all(diffs >= -1e-9))
    return ok, f"min step {np.min(diffs):.2e} (signed value must not decrease)"


def check_observable_collapse():
    pa = _params(1.0, 10.0, 100)
    pb = _params(1.0, 100.0, 10)
    oa = observables.full_observables(pa, 100, 1e-9)
    ob = observables.full_observables(pb, 10, 1e-9)
    worst = 0.0
    for f in ("sx_per_n", "e0_reduced", "q2", "q4", "p2"):
        a, b = getattr(oa, f), getattr(ob, f)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    for nu in (-1.0, -0.5, 0.5):
        worst = max(worst, abs(oa.phi_table[nu] - ob.phi_table[nu]))
    return worst <= 1e-8, f"worst (alpha, ND)-collapse residual {worst:.2e}"


def check_feynman_hellmann():
    worst = 0.0
    for alpha in (0.0, 0.5, 1.0):
        for nd in (30.0, 300.0, 3000.0):
            n = max(int(nd / D_REF), 1)
            p = _params(alpha, D_REF, n)
            rep = observables.feynman_hellmann_check(p, n)
            worst = max(worst, rep.residual_alpha, rep.residual_nd)
    return worst <= 1e-5, f"worst FH residual {worst:.2e} on 3x3 lattice"


def check_moment_recursion():
    nd = D_REF * 1e4
    state = solver.solve_quartic_reduced(1.0, nd, 1e-9)
    rep = observables.moment_recursion_check(state.wavefunction, nd, k_max=2)
    ok = rep.residuals[0] <= 0.02 and rep.residuals[2] <= 0.05
    return ok, f"k=0 residual {rep.residuals[0]:.2e}, k=2 residual {rep.residuals[2]:.2e}"


def check_tau1_dual_route():
    worst = 0.0
    for alpha, n in [(0.5, 16), (1.0, 64), (1.8, 32)]:
        p = _params(alpha, D_REF, n)
        state = solver.solve_full_potential(alpha, p.nd, D_REF, 1e-9)
        obs = observables.spin_observables(state.wavefunction, p, n)
        rho = entanglement.single_qubit_density(state.wavefunction, p, n)
        tau_direct = 2.0 * (1.0 - float(np.trace(rho @ rho)))
        worst = max(worst, abs(tau_direct - entanglement.tau_one(obs.sx_per_n)))
    return worst <= 1e-8, f"worst dual-route tangle gap {worst:.2e}"


def check_purity_product_state():
    p = _params(0.0, D_REF, 16)
    # explicit moderate grid: the purity identity is grid-independent and
    # the O(M^2) kernel should not run on an auto-refined solver grid
    prof = model.effective_potential_profile(0.0, p.nd)
    grid = solver.auto_grid(lambda q: prof(q) + p.nd, 1.0, 1e-8)
    _, wf = solver._solve_on_grid(
        lambda q: prof(q) + p.nd, solver.GridSpec(grid.q_max, 2001)
    )
    purity = entanglement.purity_qubits(wf, p, 16)
    return abs(purity - 1.0) <= 1e-12, f"|purity - 1| = {abs(purity - 1.0):.2e} at L=0"


def check_kernel_symmetry():
    p = _params(1.4, D_REF, 32)
    q = np.linspace(-12.0, 12.0, 101)
    o = entanglement.overlap_kernel(q, q, p)
    asym = np.max(np.abs(o - o.T))
    bounded = bool(np.all(o <= 1.0 + 1e-12) and np.all(o >= -1e-12))
    return asym == 0.0 and bounded, f"max |O - O^T| = {asym:.2e}, bounded {bounded}"


def check_monotone_quenching():
    vals = []
    for n in (4, 16, 64, 256):
        p = _params(1.0, D_REF, n)
        vals.append(entanglement.tau_n_converged(p, n).tau_n)
    ok = bool(np.all(np.diff(vals) > 0.0)) and vals[-1] < 1.0
    return ok, "tau_N rises with N toward 1 at criticality: " + ", ".join(
        f"{v:.4f}" for v in vals
    )


def check_zeta_sign():
    za, _ = scaling.symanzik_map(0.9, 100.0)
    zb, _ = scaling.symanzik_map(1.1, 100.0)
    zc, _ = scaling.symanzik_map(1.0, 100.0)
    ok = za > 0.0 and zb < 0.0 and zc == 0.0
    return ok, f"zeta(0.9)={za:.3f} > 0, zeta(1.1)={zb:.3f} < 0, zeta(1)={zc}"


def check_fit_power_law():
    pts = [
        scaling.ScalingPoint(n, D_REF, 1.0, "synthetic", 7.0 * n ** (-2.0 / 3.0))
        for n in (64, 256, 1024, 4096, 16384)
    ]
    fit = scaling.fit_exponent(pts, "identity")
    ok = abs(fit.exponent + 2.0 / 3.0) < 1e-12 and abs(fit.prefactor - 7.0) < 1e-10
    return ok, f"exponent {fit.exponent:.14f}, prefactor {fit.prefactor:.14f}"


def check_prediction_convergence():
    consts = solver.quartic_constants(1e-8)
    # N -> infinity endpoint of each observable, so residuals are measured
    # against the scaling part of the prediction rather than its O(1) piece
    limits = {
        "sx_per_n": -1.0,
        "sx2_per_n2": 1.0,
        "q2": 0.0,
        "q4": 0.0,
        "order_param_over_D": 0.0,
        "tau1": 0.0,
    }
    ns = (2**10, 2**12, 2**14)
    sets = {}
    for n in ns:
        p = _params(1.0, D_REF, n)
        sets[n] = observables.full_observables(p, n, 1e-9)
    for name, limit in limits.items():
        devs = []
        for n in ns:
            obs = sets[n]
            pred = scaling.finite_size_prediction(name, n, D_REF, consts)
            if name == "order_param_over_D":
                val = obs.order_param / D_REF
            elif name == "tau1":
                val = entanglement.tau_one(obs.sx_per_n)
            else:
                val = getattr(obs, name)
            devs.append(abs(val - pred) / abs(pred - limit))
        if not (devs[0] > devs[1] > devs[2]):
            return False, f"{name} deviations not decreasing: {devs}"
    return True, "prediction deviations shrink along the dyadic ladder"


def check_critical_fits():
    pts_sx, pts_e0 = [], []
    for k in range(6, 17):
        n = 2**k
        p = _params(1.0, D_REF, n)
        obs = observables.full_observables(p, n, 1e-9)
        pts_sx.append(scaling.ScalingPoint(n, D_REF, 1.0, "sx_per_n", obs.sx_per_n))
        pts_e0.append(
            scaling.ScalingPoint(
                n, D_REF, 1.0, "e0_per_nd", (obs.e0_reduced + p.nd) / p.nd
            )
        )
    fit_sx = scaling.fit_exponent(pts_sx, "one_plus")
    fit_e0 = scaling.fit_exponent(pts_e0, "identity")
    drop_sx = scaling.fit_exponent(pts_sx[1:], "one_plus")
    drop_e0 = scaling.fit_exponent(pts_e0[1:], "identity")
    ok = (
        abs(fit_sx.exponent + 2.0 / 3.0) <= 0.02
        and abs(fit_e0.exponent + 4.0 / 3.0) <= 0.02
        and abs(drop_sx.exponent - fit_sx.exponent) < 0.01
        and abs(drop_e0.exponent - fit_e0.exponent) < 0.01
    )
    return ok, (
        f"slopes {fit_sx.exponent:.4f} (target -2/3), {fit_e0.exponent:.4f} "
        f"(target -4/3); drop-one shifts {abs(drop_sx.exponent - fit_sx.exponent):.4f}, "
        f"{abs(drop_e0.exponent - fit_e0.exponent):.4f}"
    )


def check_tangle_critical_scaling():
    consts = solver.quartic_constants(1e-8)
    pts = []
    for k in range(13, 19):
        n = 2**k
        p = _params(1.0, D_REF, n)
        res = entanglement.tau_n_converged(p, n)
        pts.append(scaling.ScalingPoint(n, D_REF, 1.0, "tau_n", res.tau_n))
    fit = scaling.fit_exponent(pts, "one_minus")
    # the defining purity integral gives amplitude sqrt(pi) K (2D)^{1/3};
    # the ladder ratio approaches it from below with an N^{-1/3} correction
    amp_true = math.sqrt(math.pi) * consts.k_const * (2.0 * D_REF) ** (1.0 / 3.0)
    top = (1.0 - pts[-1].value) * pts[-1].n_qubits ** (1.0 / 6.0)
    ok = abs(fit.exponent + 1.0 / 6.0) <= 0.03 and 0.9 <= top / amp_true <= 1.02
    return ok, (
        f"slope {fit.exponent:.4f} (target -1/6); "
        f"(1-tau_N) N^(1/6) / [sqrt(pi) K (2D)^(1/3)] = {top / amp_true:.4f}"
    )


ALL_CHECKS = [
    ("potential parity", check_potential_parity),
    ("theta lower bound", check_theta_bound),
    ("amplitude normalization", check_amplitude_normalization),
    ("profile collapse", check_profile_collapse),
    ("thermo continuity at alpha=1", check_thermo_continuity),
    ("discrete energy monotone", check_discrete_energy_monotone),
    ("ground state shape", check_ground_state_shape),
    ("harmonic energies", check_harmonic_energy),
    ("symanzik consistency", check_symanzik_consistency),
    ("quartic vs full potential", check_quartic_vs_full),
    ("exact spin identities", check_exact_spin_identities),
    ("energy bookkeeping", check_energy_bookkeeping),
    ("sx monotone in alpha", check_sx_monotone_in_alpha),
    ("observable collapse", check_observable_collapse),
    ("feynman-hellmann residuals", check_feynman_hellmann),
    ("moment recursion", check_moment_recursion),
    ("tau1 dual route", check_tau1_dual_route),
    ("purity of product state", check_purity_product_state),
    ("kernel symmetry", check_kernel_symmetry),
    ("monotone quenching", check_monotone_quenching),
    ("zeta sign convention", check_zeta_sign),
    ("power-law fit exactness", check_fit_power_law),
    ("prediction convergence", check_prediction_convergence),
    ("critical exponent fits", check_critical_fits),
    ("tangle critical scaling", check_tangle_critical_scaling),
]


def run_all(report=print):
    """Run every check; returns the number of failures."""
    failures = 0
    for name, fn in ALL_CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        report(f"{status}  {name}: {detail}")
    return failures
