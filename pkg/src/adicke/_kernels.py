"""Hot numeric kernels, JIT-compiled with numba when available.

The environment variable ``ADICKE_BACKEND`` selects the implementation:

* ``auto`` (default): numba if importable, otherwise pure numpy/scipy
* ``numba``: require the JIT path (ImportError if numba is missing)
* ``numpy``: force the pure numpy/scipy fallback

Both paths are deterministic and produce matching results to solver
tolerance; ``benchmarks/bench_backends.py`` compares their speed.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via ADICKE_BACKEND=numpy
    _HAVE_NUMBA = False

_choice = os.environ.get("ADICKE_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"ADICKE_BACKEND={_choice!r} not understood (use auto, numba or numpy)"
    )
if _choice == "numba" and not _HAVE_NUMBA:
    raise ImportError("ADICKE_BACKEND=numba but numba is not importable")

USE_NUMBA = _choice == "numba" or (_choice == "auto" and _HAVE_NUMBA)

BACKEND = "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _sturm_count(diag, off2, x, pivmin):
        """Number of eigenvalues of the tridiagonal matrix below x."""
        count = 0
        q = 1.0
        for i in range(diag.size):
            if i == 0:
                q = diag[0] - x
            else:
                q = diag[i] - x - off2[i - 1] / q
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0.0:
                count += 1
        return count

    @njit(cache=True)
    def _bisect_lowest(diag, off2, lo, hi, pivmin, tol):
        """Smallest eigenvalue by Sturm-sequence bisection."""
        while hi - lo > tol + 4.0 * 2.220446049250313e-16 * max(abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if _sturm_count(diag, off2, mid, pivmin) >= 1:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    @njit(cache=True)
    def _thomas_shifted(diag, off, shift, rhs, out, cp, dp):
        """Solve (T - shift I) out = rhs for symmetric tridiagonal T."""
        n = diag.size
        b0 = diag[0] - shift
        if b0 == 0.0:
            b0 = 1e-300
        cp[0] = off[0] / b0
        dp[0] = rhs[0] / b0
        for i in range(1, n):
            denom = (diag[i] - shift) - off[i - 1] * cp[i - 1]
            if denom == 0.0:
                denom = 1e-300
            if i < n - 1:
                cp[i] = off[i] / denom
            dp[i] = (rhs[i] - off[i - 1] * dp[i - 1]) / denom
        out[n - 1] = dp[n - 1]
        for i in range(n - 2, -1, -1):
            out[i] = dp[i] - cp[i] * out[i + 1]

    @njit(cache=True)
    def _inverse_iterate_even(diag, off, shift, maxiter):
        """Even-parity inverse iteration toward the lowest eigenvector.

        The grid is symmetric about the middle node, so parity projection
        is index reversal; symmetrizing every sweep keeps the iterate in
        the even sector, which selects the nodeless member of the
        quasi-degenerate doublet in deep double wells.
        """
        n = diag.size
        v = np.full(n, 1.0 / np.sqrt(n))
        w = np.empty(n)
        cp = np.empty(n)
        dp = np.empty(n)
        for it in range(maxiter):
            _thomas_shifted(diag, off, shift, v, w, cp, dp)
            for i in range(n // 2 + 1):
                a = 0.5 * (w[i] + w[n - 1 - i])
                w[i] = a
                w[n - 1 - i] = a
            nrm = np.sqrt(np.dot(w, w))
            if nrm == 0.0 or not np.isfinite(nrm):
                break
            delta = 0.0
            for i in range(n):
                w[i] /= nrm
                d = abs(w[i] - v[i])
                if d > delta:
                    delta = d
            sign = 1.0 if np.dot(w, v) >= 0.0 else -1.0
            for i in range(n):
                v[i] = sign * w[i]
            if it >= 2 and delta <= 1e-14:
                break
        return v

    def tridiag_ground_even(diag, off):
        """Lowest even eigenpair of a symmetric tridiagonal matrix.

        Returns (lambda_estimate, vector); the vector is l2-normalized and
        exactly even.  Callers wanting full eigenvalue precision should
        recompute the Rayleigh quotient in a cancellation-free form.
        """
        off2 = off * off
        # Gershgorin bracket for the spectrum
        lo = float(np.min(diag)) - 2.0 * float(np.max(np.abs(off)))
        hi = float(np.max(diag)) + 2.0 * float(np.max(np.abs(off)))
        scale = max(abs(lo), abs(hi), 1.0)
        pivmin = max(float(np.max(off2)), 1.0) * 1e-290
        lam = _bisect_lowest(diag, off2, lo, hi, pivmin, 1e-14 * scale)
        shift = lam - 1e-11 * scale
        v = _inverse_iterate_even(diag, off, shift, 50)
        return lam, v

    @njit(cache=True)
    def purity_double_sum(weights, q, theta_rel, alpha, nd, n_qubits):
        """2D quadrature of the qubit-purity kernel O(Q,Q')^N.

        ``weights`` are the 1D quadrature weights of phi0^2, ``theta_rel``
        is sqrt(1 + 2 alpha q^2 / nd).  The kernel is evaluated in log
        form, exp(N log O), so O^N never under/overflows for large N.
        """
        n = weights.size
        total = 0.0
        fn = float(n_qubits)
        for i in range(n):
            total += weights[i] * weights[i]
            wi = weights[i]
            qi = q[i]
            ti = theta_rel[i]
            acc = 0.0
            for j in range(i + 1, n):
                f = (1.0 + 2.0 * alpha * qi * q[j] / nd) / (ti * theta_rel[j])
                overlap = 0.5 * (1.0 + f)
                if overlap > 0.0:
                    acc += weights[j] * np.exp(fn * np.log(overlap))
            total += 2.0 * wi * acc
        return total


# ---------------------------------------------------------------------------
# pure numpy / scipy fallback
# ---------------------------------------------------------------------------

else:

    from scipy.linalg import eigh_tridiagonal

    def tridiag_ground_even(diag, off):
        """Lowest even eigenpair via LAPACK bisection + inverse iteration."""
        k = 2 if diag.size >= 2 else 1
        w, v = eigh_tridiagonal(
            diag, off, select="i", select_range=(0, k - 1), check_finite=False
        )
        # Inverse iteration may return an arbitrary mix of a quasi-degenerate
        # doublet; keep the candidate with the largest even component.
        best = None
        for col in range(v.shape[1]):
            vec = v[:, col]
            sym = 0.5 * (vec + vec[::-1])
            nrm = np.linalg.norm(sym)
            if best is None or nrm > best[0]:
                best = (nrm, sym)
        vec = best[1] / best[0]
        return float(w[0]), vec

    def purity_double_sum(weights, q, theta_rel, alpha, nd, n_qubits):
        """Chunked numpy evaluation of the purity double sum."""
        total = 0.0
        n = weights.size
        step = max(1, int(4.0e6 // max(n, 1)))
        inv_t = 1.0 / theta_rel
        for start in range(0, n, step):
            stop = min(start + step, n)
            f = (1.0 + 2.0 * alpha * np.outer(q[start:stop], q) / nd) * np.outer(
                inv_t[start:stop], inv_t
            )
            overlap = 0.5 * (1.0 + f)
            # tiny floor keeps log finite; exp(N log tiny) underflows to 0
            np.clip(overlap, 1e-300, None, out=overlap)
            block = np.exp(n_qubits * np.log(overlap))
            total += float(weights[start:stop] @ block @ weights)
        return total
