"""Compiled line kernel for 1-D ideal-gas Euler (optional, needs numba).

``wenoz_faces`` evaluates both one-sided WENO-Z values for flattened
stencils of any model.  The Euler kernel fuses WENO-Z interpolation
(componentwise or in the characteristic frame at the arithmetic-average
state), the Rusanov flux and either
correction variant for one padded line ``(3, n + 6)``.  It evaluates the same
expressions in the same order as the array code in ``weno``, ``fvflux`` and
``awenocorr`` and is only used where that code would do exactly this work:
long accuracy and reference runs otherwise spend most of their time in
numpy temporaries.  Set ``AWENO_NO_JIT=1`` to disable it.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised when numba is installed
    if os.environ.get("AWENO_NO_JIT"):
        raise ImportError("disabled")
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

AVAILABLE = njit is not None

if AVAILABLE:

    @njit(cache=True)
    def _wenoz(a, b, c, d, e, eps, power):
        da, db, dd, de = a - c, b - c, d - c, e - c
        q0 = (3.0 * da - 10.0 * db) * 0.125
        q1 = (3.0 * dd - db) * 0.125
        q2 = (6.0 * dd - de) * 0.125
        b0 = 13.0 / 12.0 * (da - 2.0 * db) ** 2 + 0.25 * (da - 4.0 * db) ** 2
        b1 = 13.0 / 12.0 * (db + dd) ** 2 + 0.25 * (db - dd) ** 2
        b2 = 13.0 / 12.0 * (de - 2.0 * dd) ** 2 + 0.25 * (de - 4.0 * dd) ** 2
        tau = abs(b0 - b2)
        if power == 2:
            r0, r1, r2 = tau / (b0 + eps), tau / (b1 + eps), tau / (b2 + eps)
            a0 = 1.0 / 16.0 * (1.0 + r0 * r0)
            a1 = 10.0 / 16.0 * (1.0 + r1 * r1)
            a2 = 5.0 / 16.0 * (1.0 + r2 * r2)
        else:
            a0 = 1.0 / 16.0 * (1.0 + (tau / (b0 + eps)) ** power)
            a1 = 10.0 / 16.0 * (1.0 + (tau / (b1 + eps)) ** power)
            a2 = 5.0 / 16.0 * (1.0 + (tau / (b2 + eps)) ** power)
        return c + (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)

    @njit(cache=True)
    def wenoz_faces(stencils, eps, power):
        """``(w^-, w^+)`` for stencils ``(6, K)`` holding cells ``j-2 .. j+3``."""
        K = stencils.shape[1]
        minus = np.empty(K)
        plus = np.empty(K)
        for k in range(K):
            a, b, c = stencils[0, k], stencils[1, k], stencils[2, k]
            d, e, f = stencils[3, k], stencils[4, k], stencils[5, k]
            minus[k] = _wenoz(a, b, c, d, e, eps, power)
            plus[k] = _wenoz(f, e, d, c, b, eps, power)
        return minus, plus

    @njit(cache=True)
    def _frame(rho_, m_, E_, gamma, L, R):
        g1 = gamma - 1.0
        rho = rho_
        u = m_ / rho
        q2 = u * u + 0.0 * 0.0
        p = g1 * (E_ - 0.5 * rho * q2)
        c2 = gamma * p / rho
        if not (c2 > 0.0) or not (rho > 0.0):
            return False
        c = np.sqrt(c2)
        H = (E_ + p) / rho
        b1 = g1 / c2
        b2 = 0.5 * b1 * q2
        R[0, 0], R[1, 0], R[2, 0] = 1.0, u - c, H - u * c
        R[0, 1], R[1, 1], R[2, 1] = 1.0, u, 0.5 * q2
        R[0, 2], R[1, 2], R[2, 2] = 1.0, u + c, H + u * c
        L[0, 0], L[0, 1], L[0, 2] = 0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), 0.5 * b1
        L[1, 0], L[1, 1], L[1, 2] = 1.0 - b2, b1 * u, -b1
        L[2, 0], L[2, 1], L[2, 2] = 0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), 0.5 * b1
        return True

    @njit(cache=True)
    def _flux(r, m, E, gamma, out):
        u = m / r
        p = (gamma - 1.0) * (E - 0.5 * m * m / r)
        out[0] = m
        out[1] = m * u + p
        out[2] = u * (E + p)
        return abs(m / r) + np.sqrt(gamma * p / r)

    @njit(cache=True)
    def _admissible(r, m, E, gamma):
        p = (gamma - 1.0) * (E - 0.5 * m * m / r)
        return np.isfinite(p) and r > 0.0 and p > 0.0

    @njit(cache=True)
    def euler1d_line(lines, gamma, dx, dx4, new, characteristic, periodic, eps, power):
        """A-WENO fluxes ``(3, n+1)``, FV fluxes and face speeds of one padded line.

        ``dx4`` is ``dx ** 4`` as Python computes it (compiled integer powers
        round differently).

        Returns ``(H, fv, speed, bad, clean)``; ``bad >= 0`` is the first face
        whose averaged state has no real eigen-decomposition (the arrays are
        then incomplete) and ``clean`` tells whether every one-sided state is
        admissible.
        """
        N = lines.shape[1]
        m = N - 5
        fv = np.empty((3, m))
        speed = np.empty(m)
        L = np.zeros((3, 3))
        R = np.zeros((3, 3))
        w = np.empty((3, 6))
        wm = np.empty(3)
        wp = np.empty(3)
        Fm = np.empty(3)
        Fp = np.empty(3)
        cm = np.empty(3)
        cp = np.empty(3)
        clean = True
        for j in range(m):
            if characteristic:
                ok = _frame(0.5 * (lines[0, j + 2] + lines[0, j + 3]),
                            0.5 * (lines[1, j + 2] + lines[1, j + 3]),
                            0.5 * (lines[2, j + 2] + lines[2, j + 3]), gamma, L, R)
                if not ok:
                    return fv, fv, speed, j, False
                for a in range(3):
                    for k in range(6):
                        w[a, k] = (L[a, 0] * lines[0, j + k] + L[a, 1] * lines[1, j + k]
                                   + L[a, 2] * lines[2, j + k])
            else:
                for a in range(3):
                    for k in range(6):
                        w[a, k] = lines[a, j + k]
            for a in range(3):
                cm[a] = _wenoz(w[a, 0], w[a, 1], w[a, 2], w[a, 3], w[a, 4], eps, power)
                cp[a] = _wenoz(w[a, 5], w[a, 4], w[a, 3], w[a, 2], w[a, 1], eps, power)
            if characteristic:
                for a in range(3):
                    wm[a] = R[a, 0] * cm[0] + R[a, 1] * cm[1] + R[a, 2] * cm[2]
                    wp[a] = R[a, 0] * cp[0] + R[a, 1] * cp[1] + R[a, 2] * cp[2]
            else:
                for a in range(3):
                    wm[a] = cm[a]
                    wp[a] = cp[a]
            if clean:
                clean = (_admissible(wm[0], wm[1], wm[2], gamma)
                         and _admissible(wp[0], wp[1], wp[2], gamma))
            sm = _flux(wm[0], wm[1], wm[2], gamma, Fm)
            sp = _flux(wp[0], wp[1], wp[2], gamma, Fp)
            s = max(sm, sp)
            speed[j] = s
            for a in range(3):
                fv[a, j] = 0.5 * (Fm[a] + Fp[a]) - 0.5 * s * (wp[a] - wm[a])

        H = np.empty((3, m))
        c2 = dx * dx / 24.0
        c4 = 7.0 * dx4 / 5760.0
        if new:
            ext = np.empty((3, m + 4))
            for a in range(3):
                for j in range(m):
                    ext[a, j + 2] = fv[a, j]
                if periodic:
                    n = m - 1
                    ext[a, 0], ext[a, 1] = fv[a, n - 2], fv[a, n - 1]
                    ext[a, m + 2], ext[a, m + 3] = fv[a, 1], fv[a, 2]
                else:
                    ext[a, 0] = ext[a, 1] = fv[a, 0]
                    ext[a, m + 2] = ext[a, m + 3] = fv[a, m - 1]
                for j in range(m):
                    outer = ext[a, j] + ext[a, j + 4]
                    inner = ext[a, j + 1] + ext[a, j + 3]
                    mid = ext[a, j + 2]
                    d2 = (-outer + 16.0 * inner - 30.0 * mid) / (12.0 * dx * dx)
                    d4 = (outer - 4.0 * inner + 6.0 * mid) / dx4
                    H[a, j] = fv[a, j] - c2 * d2 + c4 * d4
        else:
            P = np.empty((3, N))
            F = np.empty(3)
            for k in range(N):
                _flux(lines[0, k], lines[1, k], lines[2, k], gamma, F)
                for a in range(3):
                    P[a, k] = F[a]
            for a in range(3):
                for j in range(m):
                    outer = P[a, j] + P[a, j + 5]
                    inner = P[a, j + 1] + P[a, j + 4]
                    mid = P[a, j + 2] + P[a, j + 3]
                    d2 = (-5.0 * outer + 39.0 * inner - 34.0 * mid) / (48.0 * dx * dx)
                    d4 = (outer - 3.0 * inner + 2.0 * mid) / (2.0 * dx4)
                    H[a, j] = fv[a, j] - c2 * d2 + c4 * d4
        return H, fv, speed, -1, clean
