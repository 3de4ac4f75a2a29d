"""Uniform structured grids with ghost layers and ghost-point boundary conditions.

Arrays are stored component-first: a 1-D field has shape ``(d, nx + 6)`` and a
2-D field ``(d, nx + 6, ny + 6)``; the three outermost entries along each space
axis are ghost points.  Interface quantities for the interior faces
``x_{1/2} ... x_{N+1/2}`` have ``N + 1`` entries along the sweep axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ConfigurationError

#: ghost cells per side; covers WENO-Z (j-2..j+3) and the six-point corrections
GHOST = 3
#: extra interface fluxes per side needed by the five-point flux corrections
FLUX_GHOST = 2

PERIODIC = "periodic"
FREE = "free"
WALL = "wall"


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1:
            raise ConfigurationError(f"n_cells must be positive, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise ConfigurationError("x_max must exceed x_min")

    @property
    def ghost_width(self) -> int:
        return GHOST

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(1, self.n_cells + 1) - 0.5) * self.dx

    @property
    def padded_centers(self) -> np.ndarray:
        j = np.arange(1 - GHOST, self.n_cells + GHOST + 1)
        return self.x_min + (j - 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        """Interior faces x_{1/2}, ..., x_{N+1/2}."""
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


@dataclass(frozen=True)
class Grid2D:
    x: Grid1D
    y: Grid1D

    @property
    def axes(self) -> tuple[Grid1D, Grid1D]:
        return (self.x, self.y)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x.n_cells, self.y.n_cells)


Grid = Union[Grid1D, Grid2D]


def grid_axes(grid: Grid) -> tuple[Grid1D, ...]:
    return grid.axes if isinstance(grid, Grid2D) else (grid,)


@dataclass(frozen=True)
class Dirichlet:
    """Fixed ghost state.

    ``state`` is either a constant state vector or a callable returning the
    ghost states, shape ``(d, GHOST)``, from the ghost-point coordinates.
    """

    state: Union[np.ndarray, tuple, Callable[[np.ndarray], np.ndarray]]

    def values(self, coords: np.ndarray, nvars: int) -> np.ndarray:
        if callable(self.state):
            out = np.asarray(self.state(coords), dtype=float)
        else:
            out = np.asarray(self.state, dtype=float).reshape(nvars, 1) * np.ones(len(coords))
        return out.reshape(nvars, len(coords))


Condition = Union[str, Dirichlet]


@dataclass(frozen=True)
class BoundarySpec:
    """Per-side boundary conditions, one ``(low, high)`` pair per space axis."""

    sides: tuple[tuple[Condition, Condition], ...]

    def __post_init__(self):
        for axis, pair in enumerate(self.sides):
            if len(pair) != 2:
                raise ConfigurationError(f"axis {axis}: expected a (low, high) pair")
            for cond in pair:
                if not isinstance(cond, Dirichlet) and cond not in (PERIODIC, FREE, WALL):
                    raise ConfigurationError(f"unknown boundary condition {cond!r}")
            if (pair[0] == PERIODIC) != (pair[1] == PERIODIC):
                raise ConfigurationError(
                    f"axis {axis}: periodic must be set on both sides or neither"
                )

    @classmethod
    def uniform(cls, kind: Condition, ndim: int = 1) -> "BoundarySpec":
        return cls(tuple((kind, kind) for _ in range(ndim)))

    @property
    def ndim(self) -> int:
        return len(self.sides)

    def is_periodic(self, axis: int) -> bool:
        return self.sides[axis][0] == PERIODIC


def with_ghosts(interior: np.ndarray) -> np.ndarray:
    """Copy an interior field into a fresh array with (unfilled) ghost layers."""
    ndim = interior.ndim - 1
    shape = (interior.shape[0],) + tuple(n + 2 * GHOST for n in interior.shape[1:])
    out = np.empty(shape)
    out[(slice(None),) + (slice(GHOST, -GHOST),) * ndim] = interior
    return out


def interior(field: np.ndarray) -> np.ndarray:
    ndim = field.ndim - 1
    return field[(slice(None),) + (slice(GHOST, -GHOST),) * ndim]


def _fill_side(line: np.ndarray, cond: Condition, high: bool, momentum: int | None,
               coords: np.ndarray | None) -> None:
    n = line.shape[-1] - 2 * GHOST
    g = GHOST
    ghost = slice(n + g, None) if high else slice(0, g)
    if cond == FREE:
        edge = n + g - 1 if high else g
        line[..., ghost] = line[..., edge:edge + 1]
    elif cond == WALL:
        mirror = line[..., n:n + g][..., ::-1] if high else line[..., g:2 * g][..., ::-1]
        line[..., ghost] = mirror
        if momentum is not None:
            line[momentum, ..., ghost] *= -1.0
    elif isinstance(cond, Dirichlet):
        gc = coords[ghost] if coords is not None else np.zeros(g)
        vals = cond.values(gc, line.shape[0])
        line[..., ghost] = vals.reshape((line.shape[0],) + (1,) * (line.ndim - 2) + (g,))


def fill_ghost_points(field: np.ndarray, spec: BoundarySpec, model=None,
                      grid: Grid | None = None) -> np.ndarray:
    """Populate all ghost entries of ``field`` in place and return it.

    ``model.momentum_index(axis)`` names the component negated at solid walls;
    ``grid`` supplies ghost coordinates for callable Dirichlet states.
    """
    ndim = field.ndim - 1
    if spec.ndim != ndim:
        raise ConfigurationError(f"boundary spec is {spec.ndim}-D, field is {ndim}-D")
    axes = grid_axes(grid) if grid is not None else (None,) * ndim
    for axis in range(ndim):
        line = np.moveaxis(field, axis + 1, -1)
        low, high = spec.sides[axis]
        if low == PERIODIC:
            n = line.shape[-1] - 2 * GHOST
            line[..., :GHOST] = line[..., n:n + GHOST]
            line[..., n + GHOST:] = line[..., GHOST:2 * GHOST]
            continue
        momentum = model.momentum_index(axis) if model is not None else None
        coords = axes[axis].padded_centers if axes[axis] is not None else None
        _fill_side(line, low, False, momentum, coords)
        _fill_side(line, high, True, momentum, coords)
    return field


def fill_ghost_fluxes(fluxes: np.ndarray, sides: tuple[Condition, Condition]) -> np.ndarray:
    """Extend interior interface fluxes by two values beyond each boundary.

    Input has ``N + 1`` entries (faces 1/2..N+1/2) along the last axis, output
    ``N + 5`` (faces -3/2..N+5/2).  Periodic sides wrap, using
    ``f_{N+1/2} = f_{1/2}``; every other condition copies the boundary flux.
    """
    n = fluxes.shape[-1] - 1
    if n < FLUX_GHOST + 1:
        raise ConfigurationError("too few interfaces for flux ghost extension")
    shape = fluxes.shape[:-1] + (n + 1 + 2 * FLUX_GHOST,)
    out = np.empty(shape)
    out[..., FLUX_GHOST:FLUX_GHOST + n + 1] = fluxes
    if sides[0] == PERIODIC:
        out[..., :FLUX_GHOST] = fluxes[..., n - FLUX_GHOST:n]
        out[..., FLUX_GHOST + n + 1:] = fluxes[..., 1:1 + FLUX_GHOST]
    else:
        out[..., :FLUX_GHOST] = fluxes[..., :1]
        out[..., FLUX_GHOST + n + 1:] = fluxes[..., n:]
    return out
