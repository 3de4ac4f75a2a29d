"""Flux globalization for nonconservative systems ``U_t + F(U)_x = B(U) U_x``.

The system is rewritten as ``U_t + K_x = 0`` with the global flux
``K = F - R`` and ``R(x) = int_{x_{1/2}}^x B(U) U_xi dxi``.  Along each line
``R`` is accumulated from two kinds of increments:

* cell integrals ``B_j`` of the smooth part inside ``C_j``;
* path jumps ``B_psi`` across each interface (straight-line path, trapezoidal
  average of the coefficient).

Nonconservative models expose the product as ``M(U) V_x`` through
``nc_factors(U, W) -> (M, V)`` where ``W`` are the interpolated (equilibrium)
variables.  With ``nc_flux_form`` the model's balance is ``F_x - B U_x = M V_x``
(so ``B U_x = F_x - M V_x``), otherwise ``B U_x = M V_x`` directly.

Interface states are recovered from WENO-Z interpolants of the equilibrium
variables, so a field with constant equilibrium variables yields identical
one-sided states and vanishing increments: the scheme is well balanced.
"""

from __future__ import annotations

from collections import Counter
from typing import NamedTuple

import numpy as np

from .awenocorr import (NEW, LineFlux, SchemeConfig, assemble_awenoflux, correction_new,
                        correction_old)
from .errors import ReconstructionError, first_bad_index
from .fvflux import flux_line_1d
from .grid import FLUX_GHOST, GHOST, PERIODIC, Grid1D, fill_ghost_fluxes
from .weno import InterfaceData, interpolate_lines

# W[m, e] = int l_m(s) l_e'(s) ds for the quadratic Lagrange basis on the
# nodes s = -1/2, 0, 1/2 (left face, centre, right face of a cell)
FULL_CELL = np.array([
    [-1.0 / 2.0, 2.0 / 3.0, -1.0 / 6.0],
    [-2.0 / 3.0, 0.0, 2.0 / 3.0],
    [1.0 / 6.0, -2.0 / 3.0, 1.0 / 2.0],
])
# same on the left half [-1/2, 0] (from x_{j-1/2} to the cell centre)
LEFT_HALF = np.array([
    [-1.0 / 2.0, 7.0 / 12.0, -1.0 / 12.0],
    [-7.0 / 12.0, 1.0 / 2.0, 1.0 / 12.0],
    [1.0 / 12.0, -1.0 / 12.0, 0.0],
])


def quadrature(M: tuple, V: tuple, weights: np.ndarray = FULL_CELL) -> np.ndarray:
    """``int M V_x`` over a cell from the node values ``M_0..M_2``, ``V_0..V_2``.

    Rows of ``weights`` sum to zero, so the rule is written in differences of
    ``V`` and vanishes exactly when ``V`` is constant on the cell.
    """
    dl = V[0] - V[1]
    dr = V[2] - V[1]
    out = M[0] * (weights[0, 0] * dl + weights[0, 2] * dr)
    for m in (1, 2):
        out = out + M[m] * (weights[m, 0] * dl + weights[m, 2] * dr)
    return out


def reconstruct_equilibrium_states(lines: np.ndarray, model, config: SchemeConfig,
                                   x_cells=None, x_faces=None) -> tuple[InterfaceData, np.ndarray]:
    """Interface states from WENO-Z interpolants of the equilibrium variables.

    Returns the interface data and the equilibrium variables at all padded
    cells.  Inadmissible recovered states raise ``ReconstructionError`` when
    validation is on.
    """
    W = model.to_interp(lines, x_cells)
    frame = model.eigenframe if config.characteristic else None
    Wm, Wp = interpolate_lines(W, frame, config.eps, config.power)
    Um, Up = model.from_interp(Wm, x_faces), model.from_interp(Wp, x_faces)
    if config.positivity:
        g = GHOST
        with np.errstate(all="ignore"):
            bad = ~(model.admissible(Um) & model.admissible(Up))
        if np.any(bad):
            Um = np.where(bad, lines[..., g - 1:-g], Um)
            Up = np.where(bad, lines[..., g:lines.shape[-1] - g + 1], Up)
            Wm = np.where(bad, W[..., g - 1:-g], Wm)
            Wp = np.where(bad, W[..., g:W.shape[-1] - g + 1], Wp)
    if config.validate:
        for U, side in ((Um, "left"), (Up, "right")):
            ok = model.admissible(U)
            if not np.all(ok):
                raise ReconstructionError(f"no admissible {side} state for the interpolated "
                                          "equilibrium variables", first_bad_index(~ok))
    return InterfaceData(Um, Up, Wm, Wp), W


def path_jump_term(U_minus, U_plus, W_minus, W_plus, model, F_minus=None, F_plus=None):
    """Increment of ``R`` across an interface along the straight path."""
    if not model.has_nonconservative:
        return np.zeros(np.shape(U_minus))
    Mm, Vm = model.nc_factors(U_minus, W_minus)
    Mp, Vp = model.nc_factors(U_plus, W_plus)
    jump = 0.5 * (Mm + Mp) * (Vp - Vm)
    if not model.nc_flux_form:
        return jump
    if F_minus is None:
        F_minus, F_plus = model.flux(U_minus), model.flux(U_plus)
    return (F_plus - F_minus) - jump


def cell_integral_term(nodes_U: tuple, nodes_W: tuple, model, weights: np.ndarray = FULL_CELL,
                       flux_ends: tuple | None = None):
    """``int B(U) U_x`` over a cell (or its left half) from three node states.

    ``nodes_U``/``nodes_W`` hold the states and equilibrium variables at the
    left face (``U^+_{j-1/2}``), the centre (``U_j``) and the right face
    (``U^-_{j+1/2}``).  ``flux_ends`` are the physical fluxes at the two ends
    of the integration interval (default: left and right face states).
    """
    if not model.has_nonconservative:
        return np.zeros(np.shape(nodes_U[1]))
    factors = [model.nc_factors(U, W) for U, W in zip(nodes_U, nodes_W)]
    Q = quadrature(tuple(f[0] for f in factors), tuple(f[1] for f in factors), weights)
    if not model.nc_flux_form:
        return Q
    if flux_ends is None:
        flux_ends = (model.flux(nodes_U[0]), model.flux(nodes_U[2]))
    return (flux_ends[1] - flux_ends[0]) - Q


class GlobalFluxLine(NamedTuple):
    R_minus: np.ndarray  # (d, ..., n+1)
    R_plus: np.ndarray


def accumulate_global_flux(B_psi: np.ndarray, B_cell: np.ndarray) -> GlobalFluxLine:
    """Recursive sums ``R^-_{1/2} = 0``, ``R^+ = R^- + B_psi``, ``R^-_{j+1/2} = R^+_{j-1/2} + B_j``.

    ``B_psi`` has ``n + 1`` interface entries and ``B_cell`` ``n`` cell entries
    along the last axis; the recursion is one running sum over the
    interleaved sequence ``B_psi_{1/2}, B_1, B_psi_{3/2}, ..., B_n, B_psi_{n+1/2}``.
    """
    n = B_cell.shape[-1]
    seq = np.empty(B_psi.shape[:-1] + (2 * n + 1,))
    seq[..., 0::2] = B_psi
    seq[..., 1::2] = B_cell
    total = np.cumsum(seq, axis=-1)
    R_plus = total[..., 0::2]
    R_minus = np.empty_like(R_plus)
    R_minus[..., 0] = 0.0
    R_minus[..., 1:] = total[..., 1::2]
    return GlobalFluxLine(R_minus, R_plus)


def pointvalue_global_flux(F_center, R_plus_left, nodes_U: tuple, nodes_W: tuple, model,
                           F_left_plus=None):
    """Global flux point values ``K_j = F(U_j) - R_j`` at cell centres.

    ``R_j = R^+_{j-1/2} + int_{x_{j-1/2}}^{x_j} B(U) U_x`` with the half-cell
    rule consistent with the full-cell quadrature.
    """
    if not model.has_nonconservative:
        return F_center - R_plus_left
    if F_left_plus is None:
        F_left_plus = model.flux(nodes_U[0])
    half = cell_integral_term(nodes_U, nodes_W, model, LEFT_HALF, (F_left_plus, F_center))
    return F_center - (R_plus_left + half)


def _periodic_extension(values: np.ndarray, ghost: int, shift: np.ndarray,
                        interfaces: bool) -> tuple[np.ndarray, np.ndarray]:
    """Left/right ghost values of a quantity that grows by ``shift`` per period."""
    n = values.shape[-1] - 1 if interfaces else values.shape[-1]
    left = values[..., n - ghost:n] - shift[..., None]
    start = 1 if interfaces else 0
    right = values[..., start:start + ghost] + shift[..., None]
    return left, right


def extend_global_fluxes(K_fv: np.ndarray, sides) -> np.ndarray:
    """Interface ghost values of ``K^FV`` for the five-point corrections.

    Non-periodic sides copy the boundary flux.  On periodic lines ``K`` is
    periodic up to the accumulated increment, which is carried along.
    """
    if sides[0] != PERIODIC:
        return fill_ghost_fluxes(K_fv, sides)
    shift = K_fv[..., -1] - K_fv[..., 0]
    left, right = _periodic_extension(K_fv, FLUX_GHOST, shift, interfaces=True)
    return np.concatenate([left, K_fv, right], axis=-1)


def global_line_flux(lines: np.ndarray, model, axis_grid: Grid1D, sides, config: SchemeConfig,
                     counters: Counter | None = None) -> LineFlux:
    """A-WENO fluxes built from the global flux along padded lines ``(d, ..., n+6)``."""
    g = GHOST
    n = lines.shape[-1] - 2 * g
    dx = axis_grid.dx
    x_cells = axis_grid.padded_centers
    x_faces = axis_grid.interfaces
    states, W = reconstruct_equilibrium_states(lines, model, config, x_cells, x_faces)
    Um, Up, Wm, Wp = states.U_minus, states.U_plus, states.W_minus, states.W_plus
    Fm, Fp = model.flux(Um), model.flux(Up)

    Uc, Wc = lines[..., g:-g], W[..., g:-g]
    left_U, left_W, left_F = Up[..., :-1], Wp[..., :-1], Fp[..., :-1]
    B_psi = path_jump_term(Um, Up, Wm, Wp, model, Fm, Fp)
    B_cell = cell_integral_term((left_U, Uc, Um[..., 1:]), (left_W, Wc, Wm[..., 1:]), model,
                                FULL_CELL, (left_F, Fm[..., 1:]))
    R = accumulate_global_flux(B_psi, B_cell)
    flux_line_1d(states, model, "K", Fm - R.R_minus, Fp - R.R_plus, validate=config.validate)
    K_fv = states.fv_flux
    if counters is not None:
        counters["fv_flux_faces"] += K_fv.shape[-1] * int(np.prod(K_fv.shape[1:-1]))

    if config.variant == NEW:
        corr = correction_new(extend_global_fluxes(K_fv, sides), dx)
    else:
        F_all = model.flux(lines)
        if counters is not None:
            rows = int(np.prod(lines.shape[1:-1]))
            counters["point_flux_for_corrections"] += rows * (n + 2 * g)
            counters["global_point_integrals"] += rows * n
        K = np.empty_like(F_all)
        K[..., g:-g] = pointvalue_global_flux(F_all[..., g:-g], R.R_plus[..., :-1],
                                              (left_U, Uc, Um[..., 1:]),
                                              (left_W, Wc, Wm[..., 1:]), model, left_F)
        if sides[0] == PERIODIC:
            shift = R.R_minus[..., -1]
            R_left, R_right = _periodic_extension(F_all[..., g:-g] - K[..., g:-g], g, shift,
                                                  interfaces=False)
        else:
            R_left = np.zeros(K.shape[:-1] + (1,))
            R_right = R.R_plus[..., -1:]
        K[..., :g] = F_all[..., :g] - R_left
        K[..., -g:] = F_all[..., -g:] - R_right
        corr = correction_old(K, dx)
    H = assemble_awenoflux(K_fv, corr, dx)
    return LineFlux(H, float(np.max(states.local_speed)), K_fv)


def rhs_nonconservative(field: np.ndarray, grid, bc, model, config: SchemeConfig,
                        counters: Counter | None = None) -> np.ndarray:
    """Semi-discrete tendency of a nonconservative model (ghosts filled)."""
    from .awenocorr import semidiscrete_rhs

    return semidiscrete_rhs(field, grid, bc, model, config, counters)
