"""Command-line front end: sweeps, constants, scaling fits, validation.

All output is CSV (RFC-4180, '.' decimal, 17 significant digits) written
to --output or stdout.  Runs are fully deterministic: identical configs
produce byte-identical files regardless of worker count.

Exit codes: 0 ok, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import entanglement, model, observables, scaling, solver, validate

SWEEP_COLUMNS = [
    "alpha",
    "n_qubits",
    "d_ratio",
    "e0_reduced",
    "e0_per_nd",
    "sx_per_n",
    "sx2_per_n2",
    "sy2_per_n2",
    "sz2_per_n2",
    "q2",
    "p2",
    "order_param",
    "tau1",
    "tau_n",
    "phi_m1",
    "phi_mhalf",
    "phi_phalf",
]

LIMIT_COLUMNS = [
    "alpha",
    "d_ratio",
    "sx_per_n",
    "sx2_per_n2",
    "sy2_per_n2",
    "sz2_per_n2",
    "order_param",
    "e0_per_n",
    "tau_infinity",
]

ENTANGLEMENT_COLUMNS = [
    "alpha",
    "n_qubits",
    "d_ratio",
    "tau1",
    "tau_n",
    "purity",
    "eta",
    "tau_infinity",
]


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.16e}"
    return str(x)


def _write_csv(columns, rows, path):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    text = "\r\n".join(lines) + "\r\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _parse_float_list(spec: str, name: str):
    """Comma-separated floats; each item may be an inclusive start:stop:step range."""
    out = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise ValueError(f"{name} range must be start:stop:step, got {item!r}")
            start, stop, step = (float(p) for p in parts)
            if step <= 0 or stop < start:
                raise ValueError(f"bad {name} range {item!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            out.extend(start + i * step for i in range(count))
        else:
            out.append(float(item))
    if not out:
        raise ValueError(f"empty {name} list")
    return out


def _parse_int_list(spec: str, name: str):
    """Comma-separated ints; 'a:b:*k' expands geometrically, 'a:b:k' arithmetically."""
    out = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise ValueError(f"{name} range must be a:b:step, got {item!r}")
            start, stop = int(parts[0]), int(parts[1])
            if parts[2].startswith("*"):
                factor = int(parts[2][1:])
                if factor < 2 or start < 1:
                    raise ValueError(f"bad geometric {name} range {item!r}")
                v = start
                while v <= stop:
                    out.append(v)
                    v *= factor
            else:
                step = int(parts[2])
                if step < 1:
                    raise ValueError(f"bad {name} range {item!r}")
                out.extend(range(start, stop + 1, step))
        else:
            out.append(int(item))
    if not out:
        raise ValueError(f"empty {name} list")
    return out


def _sweep_point(task):
    """One (alpha, N) solve; module-level so worker processes can pickle it."""
    alpha, n_qubits, d_ratio, tolerance, with_tangles, grid = task
    p = model.DimensionlessParams.from_alpha(alpha, d_ratio, n_qubits)
    row = {"alpha": alpha, "n_qubits": n_qubits, "d_ratio": d_ratio, "error": False}
    try:
        obs = observables.full_observables(p, n_qubits, tolerance, grid=grid)
        row.update(
            e0_reduced=obs.e0_reduced,
            e0_per_nd=(obs.e0_reduced + p.nd) / p.nd,
            sx_per_n=obs.sx_per_n,
            sx2_per_n2=obs.sx2_per_n2,
            sy2_per_n2=obs.sy2_per_n2,
            sz2_per_n2=obs.sz2_per_n2,
            q2=obs.q2,
            p2=obs.p2,
            order_param=obs.order_param,
            tau1=entanglement.tau_one(obs.sx_per_n),
            phi_m1=obs.phi_table[-1.0],
            phi_mhalf=obs.phi_table[-0.5],
            phi_phalf=obs.phi_table[0.5],
        )
        if with_tangles:
            row["tau_n"] = entanglement.tau_n_converged(p, n_qubits).tau_n
        else:
            row["tau_n"] = math.nan
    except (solver.ConvergenceError, solver.NonConfiningPotentialError):
        for col in SWEEP_COLUMNS:
            row.setdefault(col, math.nan)
        row["error"] = True
    return row


def _entanglement_point(task):
    alpha, n_qubits, d_ratio = task
    p = model.DimensionlessParams.from_alpha(alpha, d_ratio, n_qubits)
    row = {"alpha": alpha, "n_qubits": n_qubits, "d_ratio": d_ratio, "error": False}
    try:
        res = entanglement.tau_n_converged(p, n_qubits)
        row.update(
            tau1=res.tau1,
            tau_n=res.tau_n,
            purity=res.purity,
            eta=res.eta,
            tau_infinity=entanglement.tau_infinity(alpha, d_ratio),
        )
    except (solver.ConvergenceError, solver.NonConfiningPotentialError):
        for col in ENTANGLEMENT_COLUMNS:
            row.setdefault(col, math.nan)
        row["error"] = True
    return row


def _run_tasks(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))  # map preserves task order


def _worker_count(args) -> int:
    env = os.environ.get("ADICKE_WORKERS")
    if env is not None:
        return max(1, int(env))
    return max(1, args.workers)


def _resolve_point_params(args, parser):
    """Dimensionless (alphas, d) from either reduced or physical flags."""
    physical = args.omega is not None or args.delta is not None or args.coupling is not None
    if physical:
        if None in (args.omega, args.delta, args.coupling):
            parser.error("physical input needs all of --omega, --delta, --coupling")
        try:
            params = model.ModelParams(args.omega, args.delta, args.coupling, 1)
        except ValueError as exc:
            parser.error(str(exc))
        reduced = model.reduce_params(params)
        return [reduced.alpha], reduced.d_ratio
    try:
        alphas = _parse_float_list(args.alpha, "alpha")
    except ValueError as exc:
        parser.error(str(exc))
    if any(a < 0 for a in alphas):
        parser.error("alpha values must be non-negative")
    if args.d <= 0:
        parser.error("--d must be positive")
    return alphas, args.d


def _parse_n(args, parser):
    try:
        ns = _parse_int_list(args.n, "n")
    except ValueError as exc:
        parser.error(str(exc))
    if any(n < 1 for n in ns):
        parser.error("n_qubits values must be >= 1")
    return ns


def _finalize_rows(columns, rows, path):
    failed = any(r["error"] for r in rows)
    cols = list(columns) + (["error"] if failed else [])
    _write_csv(cols, rows, path)
    return 1 if failed else 0


def _grid_override(args, parser):
    if (args.q_max is None) != (args.points is None):
        parser.error("grid override needs both --q-max and --points")
    if args.q_max is None:
        return None
    try:
        return solver.GridSpec(args.q_max, args.points)
    except ValueError as exc:
        parser.error(str(exc))


def cmd_sweep(args, parser):
    alphas, d = _resolve_point_params(args, parser)
    ns = _parse_n(args, parser)
    grid = _grid_override(args, parser)
    tasks = [
        (alpha, n, d, args.tol, not args.no_tangles, grid)
        for n in sorted(ns)
        for alpha in sorted(alphas)
    ]
    rows = _run_tasks(_sweep_point, tasks, _worker_count(args))
    return _finalize_rows(SWEEP_COLUMNS, rows, args.output)


def cmd_quartic(args, parser):
    try:
        consts = solver.quartic_constants(args.tol)
    except solver.ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rows = [
        {"constant": "beta0", "value": consts.beta0, "refinement_error": consts.beta0_err},
        {"constant": "beta1", "value": consts.beta1, "refinement_error": consts.beta1_err},
        {"constant": "k_const", "value": consts.k_const, "refinement_error": consts.k_const_err},
    ]
    _write_csv(["constant", "value", "refinement_error"], rows, args.output)
    return 0


def cmd_limit(args, parser):
    alphas, d = _resolve_point_params(args, parser)
    rows = []
    for alpha in sorted(alphas):
        t = model.thermo_limit(alpha, d)
        rows.append(
            {
                "alpha": alpha,
                "d_ratio": d,
                "sx_per_n": t.sx_per_n,
                "sx2_per_n2": t.sx2_per_n2,
                "sy2_per_n2": t.sy2_per_n2,
                "sz2_per_n2": t.sz2_per_n2,
                "order_param": t.order_param,
                "e0_per_n": t.e0_per_n,
                "tau_infinity": t.tau_infinity,
            }
        )
    _write_csv(LIMIT_COLUMNS, rows, args.output)
    return 0


def cmd_entanglement(args, parser):
    alphas, d = _resolve_point_params(args, parser)
    ns = _parse_n(args, parser)
    tasks = [(alpha, n, d) for n in sorted(ns) for alpha in sorted(alphas)]
    rows = _run_tasks(_entanglement_point, tasks, _worker_count(args))
    return _finalize_rows(ENTANGLEMENT_COLUMNS, rows, args.output)


def cmd_scaling_fit(args, parser):
    ns = _parse_n(args, parser)
    if len(ns) < 4:
        parser.error("scaling-fit needs >= 4 N values")
    wanted = [w.strip() for w in args.observables.split(",") if w.strip()]
    known = {"sx_per_n", "e0_per_nd", "tau_n"}
    bad = set(wanted) - known
    if bad:
        parser.error(f"unknown observables {sorted(bad)}; choose from {sorted(known)}")
    d = args.d
    rows = []
    pts = {name: [] for name in wanted}
    for n in sorted(ns):
        p = model.DimensionlessParams.from_alpha(args.alpha, d, n)
        try:
            if {"sx_per_n", "e0_per_nd"} & set(wanted):
                obs = observables.full_observables(p, n, args.tol)
                if "sx_per_n" in pts:
                    pts["sx_per_n"].append(
                        scaling.ScalingPoint(n, d, args.alpha, "sx_per_n", obs.sx_per_n)
                    )
                if "e0_per_nd" in pts:
                    pts["e0_per_nd"].append(
                        scaling.ScalingPoint(
                            n, d, args.alpha, "e0_per_nd", (obs.e0_reduced + p.nd) / p.nd
                        )
                    )
            if "tau_n" in pts:
                res = entanglement.tau_n_converged(p, n)
                pts["tau_n"].append(
                    scaling.ScalingPoint(n, d, args.alpha, "tau_n", res.tau_n)
                )
        except (solver.ConvergenceError, solver.NonConfiningPotentialError) as exc:
            print(f"error at N={n}: {exc}", file=sys.stderr)
            return 1
    transforms = {"sx_per_n": "one_plus", "e0_per_nd": "identity", "tau_n": "one_minus"}
    for name in wanted:
        try:
            fit = scaling.fit_exponent(pts[name], transforms[name])
        except ValueError as exc:
            print(f"error fitting {name}: {exc}", file=sys.stderr)
            return 1
        rows.append(
            {
                "observable": name,
                "transform": transforms[name],
                "exponent": fit.exponent,
                "prefactor": fit.prefactor,
                "r_squared": fit.r_squared,
                "n_min": fit.n_range[0],
                "n_max": fit.n_range[1],
            }
        )
    _write_csv(
        ["observable", "transform", "exponent", "prefactor", "r_squared", "n_min", "n_max"],
        rows,
        args.output,
    )
    return 0


def cmd_validate(args, parser):
    failures = validate.run_all()
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adicke",
        description="Adiabatic Dicke model ground states, observables and scaling",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(sp, with_n=True, with_solver=True, with_workers=True):
        sp.add_argument(
            "--alpha",
            default="1",
            help="coupling values: single, comma list, or start:stop:step",
        )
        sp.add_argument("--d", type=float, default=10.0, help="D = 2*delta/omega")
        if with_n:
            sp.add_argument(
                "--n",
                default="16",
                help="qubit counts: comma list, a:b:step, or a:b:*factor",
            )
        if with_solver:
            sp.add_argument("--tol", type=float, default=1e-8, help="energy tolerance")
            sp.add_argument("--q-max", type=float, default=None,
                            help="override the automatic grid half-width")
            sp.add_argument("--points", type=int, default=None,
                            help="override the automatic node count (odd, >= 201)")
        if with_workers:
            sp.add_argument("--workers", type=int, default=1,
                            help="parallel sweep workers")
        sp.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
        sp.add_argument("--omega", type=float, default=None, help="physical oscillator frequency")
        sp.add_argument("--delta", type=float, default=None, help="physical qubit gap")
        sp.add_argument("--coupling", type=float, default=None, help="physical coupling")

    sp = sub.add_parser("solve", help="single-point observables")
    add_common(sp)
    sp.set_defaults(func=cmd_sweep, no_tangles=False)

    sp = sub.add_parser("sweep", help="(alpha, N) parameter sweep")
    add_common(sp)
    sp.add_argument(
        "--no-tangles", action="store_true", help="skip the 2D purity quadrature"
    )
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("quartic", help="pure quartic oscillator constants")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_quartic)

    sp = sub.add_parser("limit", help="thermodynamic-limit branches")
    add_common(sp, with_n=False, with_solver=False, with_workers=False)
    sp.set_defaults(func=cmd_limit)

    sp = sub.add_parser("entanglement", help="tangles tau_1 and tau_N")
    add_common(sp, with_solver=False)
    sp.set_defaults(func=cmd_entanglement)

    sp = sub.add_parser("scaling-fit", help="log-log exponent fits at criticality")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--d", type=float, default=10.0)
    sp.add_argument("--n", default="64:65536:*2")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument(
        "--observables",
        default="sx_per_n,e0_per_nd",
        help="comma list from sx_per_n,e0_per_nd,tau_n",
    )
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_scaling_fit)

    sp = sub.add_parser("validate", help="run the invariant suite")
    sp.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
