"""Fifth-order A-WENO numerical fluxes and the semi-discrete right-hand side.

Two ways of computing the high-order correction terms are provided:

* ``old``: second/fourth derivative approximations from the six point values
  of the flux ``F(U_{j-2}) .. F(U_{j+3})``;
* ``new``: the same derivatives from the five FV interface fluxes
  ``F^FV_{j-3/2} .. F^FV_{j+5/2}``, which are already available from the
  flux pass, so no point values of the flux are evaluated.

All stencils act along the last array axis.  2-D problems are swept line by
line; the y-sweep maps the state into the model's normal frame and runs the
x-sweep code unchanged.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels, positivity
from .errors import ConfigurationError, EigenError
from .fvflux import flux_line_1d
from .grid import GHOST, PERIODIC, BoundarySpec, Grid1D, fill_ghost_fluxes, grid_axes
from .models import Euler
from .weno import EPS, POWER, interpolate_interface_states

OLD = "old"
NEW = "new"
VARIANTS = (OLD, NEW)


@dataclass(frozen=True)
class SchemeConfig:
    """Spatial discretisation options (immutable per run)."""

    variant: str = NEW
    characteristic: bool = False
    validate: bool = False
    eps: float = EPS
    power: int = POWER
    #: opt-in positivity safeguard: inadmissible one-sided face values fall back
    #: to cell values; 1-D ideal-gas lines also get the flux limiter
    positivity: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"scheme variant must be 'old' or 'new', got {self.variant!r}")


class CorrectionTerms(NamedTuple):
    d2: np.ndarray
    d4: np.ndarray


def correction_old(point_fluxes, dx: float) -> CorrectionTerms:
    """Derivatives at ``x_{j+1/2}`` from point fluxes at ``j-2 .. j+3``.

    Works on any number ``m >= 6`` of consecutive values along the last axis
    and returns ``m - 5`` interface values.
    """
    f = np.asarray(point_fluxes, dtype=float)
    m = f.shape[-1] - 5
    if m < 1:
        raise ConfigurationError("correction_old needs at least six point values")
    a, b, c, d, e, g = (f[..., k:k + m] for k in range(6))
    outer, inner, mid = a + g, b + e, c + d
    d2 = (-5.0 * outer + 39.0 * inner - 34.0 * mid) / (48.0 * dx * dx)
    d4 = (outer - 3.0 * inner + 2.0 * mid) / (2.0 * dx ** 4)
    return CorrectionTerms(d2, d4)


def correction_new(interface_fluxes, dx: float) -> CorrectionTerms:
    """Derivatives at ``x_{j+1/2}`` from FV fluxes at ``j-3/2 .. j+5/2``.

    Works on ``m >= 5`` consecutive interface values; returns ``m - 4``.
    """
    f = np.asarray(interface_fluxes, dtype=float)
    m = f.shape[-1] - 4
    if m < 1:
        raise ConfigurationError("correction_new needs at least five interface values")
    a, b, c, d, e = (f[..., k:k + m] for k in range(5))
    outer, inner = a + e, b + d
    d2 = (-outer + 16.0 * inner - 30.0 * c) / (12.0 * dx * dx)
    d4 = (outer - 4.0 * inner + 6.0 * c) / dx ** 4
    return CorrectionTerms(d2, d4)


def assemble_awenoflux(fv_flux, corr: CorrectionTerms, dx: float) -> np.ndarray:
    """``H = F^FV - dx^2/24 d2 + 7 dx^4/5760 d4``."""
    return fv_flux - (dx * dx / 24.0) * corr.d2 + (7.0 * dx ** 4 / 5760.0) * corr.d4


def _count(counters: Counter | None, key: str, amount: int) -> None:
    if counters is not None:
        counters[key] += int(amount)


class LineFlux(NamedTuple):
    H: np.ndarray  # (d, ..., n+1) A-WENO fluxes at faces 1/2 .. n+1/2
    max_speed: float
    fv: np.ndarray | None = None  # the FV (or global FV) fluxes at the same faces


def conservative_line_flux(lines: np.ndarray, model, dx: float, sides, config: SchemeConfig,
                           counters: Counter | None = None, dt: float | None = None,
                           limit: bool = False) -> LineFlux:
    """A-WENO fluxes along padded lines ``(d, ..., n+6)`` of a conservative model.

    ``limit`` applies the positivity flux limiter with stage step ``dt``;
    without ``dt`` the largest step for which the first-order half-updates
    are admissible is assumed.
    """
    if _compiled_path(lines, model, config):
        lf = _compiled_line_flux(lines, model, dx, sides, config, counters)
        if lf is not None:
            if limit:
                lam = dt / dx if dt is not None else positivity.lambda_bound(lines, model)
                lf = lf._replace(H=positivity.limit_fluxes(lines, lf.H, model, lam))
            return lf
    states = interpolate_interface_states(lines, model, config.characteristic,
                                          eps=config.eps, power=config.power)
    if config.positivity:
        positivity.fallback_states(lines, states, model)
    flux_line_1d(states, model, "F", validate=config.validate)
    fv = states.fv_flux
    faces = fv.shape[-1]
    _count(counters, "fv_flux_faces", faces * int(np.prod(fv.shape[1:-1])))
    if config.variant == NEW:
        corr = correction_new(fill_ghost_fluxes(fv, sides), dx)
    else:
        point = model.flux(lines)
        _count(counters, "point_flux_for_corrections", int(np.prod(lines.shape[1:])))
        corr = correction_old(point, dx)
    H = assemble_awenoflux(fv, corr, dx)
    if limit:
        lam = dt / dx if dt is not None else positivity.lambda_bound(lines, model)
        H = positivity.limit_fluxes(lines, H, model, lam)
    return LineFlux(H, float(np.max(states.local_speed)), fv)


def _compiled_path(lines, model, config: SchemeConfig) -> bool:
    return (kernels.AVAILABLE and lines.ndim == 2 and isinstance(model, Euler)
            and model.ndim == 1 and model.interp == "conservative"
            and not config.validate)


def _compiled_line_flux(lines, model, dx, sides, config, counters) -> LineFlux | None:
    # None: some face state needs the positivity fallback of the array path
    H, fv, speed, bad, clean = kernels.euler1d_line(
        np.ascontiguousarray(lines, dtype=float), float(model.gamma), float(dx), float(dx) ** 4,
        config.variant == NEW, bool(config.characteristic), sides[0] == PERIODIC,
        float(config.eps), int(config.power))
    if bad >= 0:
        raise EigenError("characteristic decomposition failed (non-positive pressure or "
                         "density in averaged state)", (bad,))
    if config.positivity and not clean:
        return None
    _count(counters, "fv_flux_faces", fv.shape[-1])
    if config.variant == OLD:
        _count(counters, "point_flux_for_corrections", lines.shape[-1])
    return LineFlux(H, float(np.max(speed)), fv)


def line_flux(lines, model, axis_grid: Grid1D, sides, config: SchemeConfig,
              counters: Counter | None = None, dt: float | None = None,
              limit: bool = False) -> LineFlux:
    """Dispatch to the conservative or the flux-globalization line solver."""
    if getattr(model, "nonconservative", False):
        from .fluxglob import global_line_flux

        return global_line_flux(lines, model, axis_grid, sides, config, counters)
    return conservative_line_flux(lines, model, axis_grid.dx, sides, config, counters, dt,
                                  limit)


def flux_difference(H: np.ndarray, dx: float) -> np.ndarray:
    return -(H[..., 1:] - H[..., :-1]) / dx


class RHSResult(NamedTuple):
    tendency: np.ndarray  # interior-shaped
    max_speeds: tuple[float, ...]  # per axis, max_j a_{j+1/2}


def evaluate_rhs(field: np.ndarray, grid, bc: BoundarySpec, model, config: SchemeConfig,
                 counters: Counter | None = None, dt: float | None = None) -> RHSResult:
    """Semi-discrete tendency of a ghost-filled field plus the max local speeds.

    ``dt`` (the stage step, if known) only matters with the positivity limiter.
    """
    g = GHOST
    axes = grid_axes(grid)
    if field.ndim - 1 != len(axes):
        raise ConfigurationError("field dimension does not match the grid")
    if len(axes) == 1:
        euler_limit = (config.positivity and hasattr(model, "gamma")
                       and hasattr(model, "pressure")
                       and not getattr(model, "nonconservative", False))
        lf = line_flux(field, model, axes[0], bc.sides[0], config, counters, dt, euler_limit)
        H = lf.H
        if config.positivity and not euler_limit:
            (H,) = _limit_corrections(field[:, g:-g], [lf], model, axes, dt)
        return RHSResult(flux_difference(H, axes[0].dx), (lf.max_speed,))

    # x-sweep: rows as contiguous lines (d, ny, nx+6)
    xlines = np.ascontiguousarray(np.moveaxis(field[:, :, g:-g], 1, -1))
    fx = line_flux(xlines, model, axes[0], bc.sides[0], config, counters)
    # y-sweep in the normal frame: columns (d, nx, ny+6)
    ylines = np.ascontiguousarray(model.to_normal(field[:, g:-g, :], 1))
    fy = line_flux(ylines, model, axes[1], bc.sides[1], config, counters)
    Hx = np.moveaxis(fx.H, -1, 1)
    Hy = model.to_normal(fy.H, 1)
    if config.positivity:
        fx = fx._replace(H=Hx, fv=np.moveaxis(fx.fv, -1, 1))
        fy = fy._replace(H=Hy, fv=model.to_normal(fy.fv, 1))
        Hx, Hy = _limit_corrections(field[:, g:-g, g:-g], [fx, fy], model, axes, dt)
    tx = flux_difference(np.moveaxis(Hx, 1, -1), axes[0].dx)
    tx = np.moveaxis(tx, -1, 1)
    ty = flux_difference(Hy, axes[1].dx)
    return RHSResult(tx + ty, (fx.max_speed, fy.max_speed))


def _limit_corrections(cells, fluxes, model, axes, dt):
    """Positivity blend of the A-WENO fluxes towards the FV fluxes (field layout)."""
    if dt is None:
        # step not chosen yet: the largest one any CFL number below 1/2 allows
        speeds = [max(f.max_speed, 1e-300) for f in fluxes]
        dt = 0.5 * min(a.dx / s for a, s in zip(axes, speeds))
    lams = [dt / a.dx for a in axes]
    return positivity.limit_corrections(cells, [f.fv for f in fluxes], [f.H for f in fluxes],
                                        model, lams)


def semidiscrete_rhs(field: np.ndarray, grid, bc: BoundarySpec, model, config: SchemeConfig,
                     counters: Counter | None = None, dt: float | None = None) -> np.ndarray:
    """``dU/dt`` on the interior cells; ``field`` must have its ghosts filled."""
    return evaluate_rhs(field, grid, bc, model, config, counters, dt).tendency


__all__ = [
    "OLD", "NEW", "SchemeConfig", "CorrectionTerms", "correction_old", "correction_new",
    "assemble_awenoflux", "conservative_line_flux", "line_flux", "evaluate_rhs",
    "semidiscrete_rhs", "RHSResult", "LineFlux",
]
