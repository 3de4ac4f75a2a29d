"""Positivity-preserving flux limiting for ideal-gas Euler lines (opt-in).

A forward-Euler stage ``U_j - lam (H_{j+1/2} - H_{j-1/2})`` is split into the
half-updates ``U_j - 2 lam H_{j+1/2}`` and ``U_{j+1} + 2 lam H_{j+1/2}`` per
face.  With the first-order Lax-Friedrichs flux ``h`` these are admissible
when ``lam * alpha <= 1/2``; the high-order flux is blended towards ``h`` by
the largest ``theta`` in [0, 1] keeping both half-updates admissible.  Faces
that need no limiting keep ``H`` bitwise.  One-sided face values that are
themselves inadmissible are replaced by the adjacent cell values.
"""

from __future__ import annotations

import numpy as np

from .grid import GHOST

FLOOR = 1e-13


def lax_friedrichs_flux(lines: np.ndarray, model, alpha: float) -> np.ndarray:
    """First-order flux at the interior faces of padded lines ``(d, ..., n+6)``."""
    g = GHOST
    left = lines[..., g - 1:-g]
    right = lines[..., g:lines.shape[-1] - g + 1]
    return 0.5 * (model.flux(left) + model.flux(right)) - 0.5 * alpha * (right - left)


def _theta(model, base, delta, eps_rho, eps_p):
    """Largest safe fraction of ``delta`` added to the admissible state ``base``."""
    full = base + delta
    theta = np.ones(base.shape[1:])
    rho0, rho1 = base[0], full[0]
    low = rho1 < eps_rho
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(low, (rho0 - eps_rho) / (rho0 - rho1), theta)
    theta = np.clip(theta, 0.0, 1.0)
    # the pressure is concave in U (rho > 0), so the chord gives a safe bound
    with np.errstate(divide="ignore", invalid="ignore"):
        p0 = model.pressure(base)
        p1 = model.pressure(base + theta * delta)
        low = ~(p1 >= eps_p)
        scale = np.where(low, (p0 - eps_p) / (p0 - p1), 1.0)
    scale = np.where(np.isfinite(scale), scale, 0.0)
    return theta * np.clip(scale, 0.0, 1.0)


def limit_fluxes(lines: np.ndarray, H: np.ndarray, model, lam: float) -> np.ndarray:
    """Blend ``H`` towards the Lax-Friedrichs flux where positivity requires it."""
    g = GHOST
    alpha = float(np.max(model.max_speed(lines)))
    h = lax_friedrichs_flux(lines, model, alpha)
    cells = lines[..., g:-g]
    eps_rho = min(FLOOR, float(np.min(cells[0])))
    eps_p = min(FLOOR, float(np.min(model.pressure(cells))))
    left = lines[..., g - 1:-g]
    right = lines[..., g:lines.shape[-1] - g + 1]
    delta = H - h
    theta = np.minimum(
        _theta(model, left - 2.0 * lam * h, -2.0 * lam * delta, eps_rho, eps_p),
        _theta(model, right + 2.0 * lam * h, 2.0 * lam * delta, eps_rho, eps_p),
    )
    limited = theta < 1.0
    if not np.any(limited):
        return H
    return np.where(limited, h + theta * delta, H)


def fallback_states(lines: np.ndarray, states, model) -> None:
    """Replace inadmissible one-sided face values by the adjacent cell values."""
    g = GHOST
    left = lines[..., g - 1:-g]
    right = lines[..., g:lines.shape[-1] - g + 1]
    with np.errstate(all="ignore"):
        bad = ~(model.admissible(states.U_minus) & model.admissible(states.U_plus))
    if np.any(bad):
        states.U_minus = np.where(bad, left, states.U_minus)
        states.U_plus = np.where(bad, right, states.U_plus)
        states.W_minus = states.W_plus = None


def lambda_bound(lines: np.ndarray, model) -> float:
    """``dt/dx`` up to which the Lax-Friedrichs half-updates stay admissible."""
    return 0.5 / float(np.max(model.max_speed(lines)))


def _shifted(a: np.ndarray, axis: int, lo: int, hi: int) -> np.ndarray:
    index = [slice(None)] * a.ndim
    index[axis] = slice(lo, a.shape[axis] + hi if hi <= 0 else hi)
    return a[tuple(index)]


def limit_corrections(U: np.ndarray, fv: list, H: list, model, lams: list,
                      iterations: int = 10) -> list:
    """Blend each face flux ``H`` towards its FV flux ``fv`` to keep cells admissible.

    ``U`` holds the interior cells ``(d, n_1, .., n_k)``; ``fv[a]`` and ``H[a]``
    the face fluxes along axis ``a`` (one more entry along that axis) and
    ``lams[a] = dt/dx_a``.  The low-order update ``base = U - sum lam D fv`` is
    taken as the reference; every face correction ``delta = H - fv`` is then
    shared between ``2k`` admissible pieces ``base -/+ 2k lam theta delta`` and
    ``theta`` is halved until both neighbours accept it.  Faces with
    ``theta = 1`` return ``H`` bitwise.
    """
    k = len(fv)
    base = U.copy()
    for a in range(k):
        base -= lams[a] * np.diff(fv[a], axis=a + 1)
    with np.errstate(all="ignore"):
        base_ok = model.admissible(base)
    out = []
    for a in range(k):
        ax = a + 1
        delta = H[a] - fv[a]
        c = 2.0 * k * lams[a]
        # cells left/right of the interior faces; boundary faces check one side
        b_left, b_right = _shifted(base, ax, 0, -1), _shifted(base, ax, 1, 0)
        ok_left, ok_right = _shifted(base_ok, a, 0, -1), _shifted(base_ok, a, 1, 0)
        d_in = _shifted(delta, ax, 1, -1)
        theta = np.ones(d_in.shape[1:])

        def accepted(th):
            with np.errstate(all="ignore"):
                left = model.admissible(b_left - c * th * d_in)
                right = model.admissible(b_right + c * th * d_in)
            return left & right

        good = accepted(theta)
        for _ in range(iterations):
            if np.all(good):
                break
            theta = np.where(good, theta, 0.5 * theta)
            good = accepted(theta)
        theta = np.where(good & ok_left & ok_right, theta, 0.0)
        full = np.ones(delta.shape[1:])
        inner = [slice(None)] * full.ndim
        inner[a] = slice(1, -1)
        full[tuple(inner)] = theta
        # boundary faces: only the interior neighbour matters
        for side, cell in ((0, 0), (-1, -1)):
            face = [slice(None)] * full.ndim
            face[a] = side
            cidx = [slice(None)] * base.ndim
            cidx[ax] = cell
            sign = 1.0 if side == 0 else -1.0
            th = np.ones(full[tuple(face)].shape)
            d_b = delta[(slice(None),) + tuple(face)]
            b_c = base[tuple(cidx)]
            for _ in range(iterations + 1):
                with np.errstate(all="ignore"):
                    okb = model.admissible(b_c + sign * c * th * d_b)
                if np.all(okb):
                    break
                th = np.where(okb, th, 0.5 * th)
            with np.errstate(all="ignore"):
                okb = model.admissible(b_c + sign * c * th * d_b) & base_ok[tuple(cidx[1:])]
            full[tuple(face)] = np.where(okb, th, 0.0)
        limited = full < 1.0
        if np.any(limited):
            out.append(np.where(limited, fv[a] + full * delta, H[a]))
        else:
            out.append(H[a])
    return out
