"""Three-stage third-order SSP Runge-Kutta time stepping with an adaptive CFL step."""

from __future__ import annotations

import time as _time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .awenocorr import SchemeConfig, evaluate_rhs
from .errors import ConfigurationError, IntegrationError, StateError, first_bad_index
from .grid import BoundarySpec, fill_ghost_points, grid_axes, with_ghosts

STANDARD = "standard"
ACCURACY = "accuracy"


@dataclass(frozen=True)
class TimeController:
    """``dt = cfl dx / max a`` (standard) or ``cfl dx^{5/3} / max a`` (accuracy)."""

    t_final: float
    cfl: float = 0.45
    dt_mode: str = STANDARD

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ConfigurationError(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.dt_mode not in (STANDARD, ACCURACY):
            raise ConfigurationError(f"unknown dt mode {self.dt_mode!r}")
        if not self.t_final >= 0.0:
            raise ConfigurationError("t_final must be non-negative")


def compute_dt(max_speeds: Sequence[float], grid, controller: TimeController,
               t: float = 0.0) -> float:
    """Adaptive step from per-axis maximal local speeds, clipped to ``t_final``.

    In 2-D the step is ``cfl * min(dx / max a^x, dy / max a^y)``.  Axes with
    zero speed impose no bound; a stationary field steps straight to the end.
    """
    remaining = controller.t_final - t
    bounds = []
    for axis, speed in zip(grid_axes(grid), max_speeds):
        if speed > 0.0:
            h = axis.dx ** (5.0 / 3.0) if controller.dt_mode == ACCURACY else axis.dx
            bounds.append(h / speed)
    if not bounds:
        return remaining
    return min(controller.cfl * min(bounds), remaining)


def _check_finite(U: np.ndarray, t: float, stage: int) -> None:
    bad = ~np.isfinite(U)
    if np.any(bad):
        raise IntegrationError(f"non-finite value after RK stage {stage}", t, first_bad_index(bad))


def ssp_rk3_step(U: np.ndarray, dt: float, rhs: Callable[[np.ndarray], np.ndarray],
                 first_tendency: np.ndarray | None = None, t: float = 0.0) -> np.ndarray:
    """One SSP-RK3 step; ``first_tendency`` reuses ``rhs(U)`` if already known."""
    k = rhs(U) if first_tendency is None else first_tendency
    U1 = U + dt * k
    _check_finite(U1, t + dt, 1)
    U2 = (3.0 * U + U1 + dt * rhs(U1)) / 4.0
    _check_finite(U2, t + 0.5 * dt, 2)
    U3 = (U + 2.0 * U2 + 2.0 * dt * rhs(U2)) / 3.0
    _check_finite(U3, t + dt, 3)
    return U3


@dataclass
class RunResult:
    U: np.ndarray  # interior conservative field
    t: float
    steps: int
    snapshots: dict = field(default_factory=dict)
    counters: Counter = field(default_factory=Counter)
    seconds: float = 0.0
    min_dt: float = np.inf
    grid: object = None
    model: object = None


class Solver:
    """Bundles grid, boundaries, model and scheme into ``rhs`` callables."""

    def __init__(self, grid, bc: BoundarySpec, model, config: SchemeConfig,
                 counters: Counter | None = None):
        self.grid = grid
        self.bc = bc
        self.model = model
        self.config = config
        self.counters = counters if counters is not None else Counter()
        #: step of the stages in progress (used by the positivity limiter)
        self.stage_dt: float | None = None

    def padded(self, U: np.ndarray) -> np.ndarray:
        return fill_ghost_points(with_ghosts(U), self.bc, self.model, self.grid)

    def evaluate(self, U: np.ndarray):
        self.counters["rhs_calls"] += 1
        return evaluate_rhs(self.padded(U), self.grid, self.bc, self.model, self.config,
                            self.counters, self.stage_dt)

    def rhs(self, U: np.ndarray) -> np.ndarray:
        return self.evaluate(U).tendency


def simulate(U0: np.ndarray, grid, bc: BoundarySpec, model, config: SchemeConfig,
             controller: TimeController, snapshot_times: Sequence[float] = (),
             counters: Counter | None = None, max_steps: int | None = None,
             monitor: Callable[[float, np.ndarray], None] | None = None) -> RunResult:
    """Integrate from ``t = 0`` to ``controller.t_final`` (or ``max_steps`` steps).

    Steps are clipped so that every requested snapshot time is hit exactly.
    Without validation mode, admissibility of the solution is checked once per
    step; NaN/Inf are caught after every stage.  ``monitor(t, U)`` is called
    after each step.
    """
    solver = Solver(grid, bc, model, config, counters)
    U = np.array(U0, dtype=float)
    targets = sorted({float(s) for s in snapshot_times if 0.0 < s <= controller.t_final})
    snapshots = {float(s): U.copy() for s in snapshot_times if s == 0.0}
    t, steps, min_dt = 0.0, 0, np.inf
    start = _time.perf_counter()
    while t < controller.t_final and (max_steps is None or steps < max_steps):
        solver.stage_dt = None
        res = solver.evaluate(U)
        dt = compute_dt(res.max_speeds, grid, controller, t)
        target = next((s for s in targets if s > t), controller.t_final)
        landed = dt >= target - t
        if landed:
            dt = target - t
        solver.stage_dt = dt
        U = ssp_rk3_step(U, dt, solver.rhs, res.tendency, t)
        t = target if landed else t + dt
        steps += 1
        min_dt = min(min_dt, dt)
        if not config.validate:
            ok = model.admissible(U)
            if not np.all(ok):
                raise StateError(f"inadmissible {model.name} state at t={t:.17g}",
                                 first_bad_index(~ok))
        if landed and t in targets:
            snapshots[t] = U.copy()
        if monitor is not None:
            monitor(t, U)
    elapsed = _time.perf_counter() - start
    return RunResult(U, t, steps, snapshots, solver.counters, elapsed, min_dt, grid, model)


def run_problem(problem, cells=None, variant: str = "new", characteristic: bool | None = None,
                cfl: float = 0.45, t_final: float | None = None, snapshot_times=None,
                validate: bool = False, counters: Counter | None = None,
                max_steps: int | None = None, monitor=None, model=None,
                positivity: bool | None = None) -> RunResult:
    """Simulate a catalog problem; ``None`` arguments take the problem defaults."""
    grid = problem.grid(cells)
    model = model if model is not None else problem.model()
    char = problem.characteristic if characteristic is None else characteristic
    pos = problem.positivity if positivity is None else positivity
    config = SchemeConfig(variant=variant, characteristic=char, validate=validate,
                          positivity=pos)
    t_end = problem.t_final if t_final is None else t_final
    controller = TimeController(t_end, cfl, problem.dt_mode)
    snaps = problem.snapshot_times if snapshot_times is None else snapshot_times
    U0 = problem.initial_field(grid)
    return simulate(U0, grid, problem.boundary, model, config, controller, snaps,
                    counters, max_steps, monitor)
