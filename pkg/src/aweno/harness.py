"""Convergence studies (Runge error/rate estimates), L1 distances and CPU benchmarks.

Solutions live at cell centres, so a mesh refined by an odd factor ``r``
contains the coarse centres (every ``r``-th value starting at ``(r-1)/2``),
while for even ``r`` the coarse centre is the midpoint of two fine centres
and is recovered by six-point Lagrange interpolation.
"""

from __future__ import annotations

import csv
import io
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .awenocorr import VARIANTS
from .errors import ConfigurationError
from .grid import PERIODIC, grid_axes
from .timeint import run_problem

MIDPOINT_WEIGHTS = np.array([3.0, -25.0, 150.0, 150.0, -25.0, 3.0]) / 256.0


def _lagrange_weights(nodes: np.ndarray, target: float) -> np.ndarray:
    w = np.ones(len(nodes))
    for i, xi in enumerate(nodes):
        for k, xk in enumerate(nodes):
            if k != i:
                w[i] *= (target - xk) / (xi - xk)
    return w


def restrict_axis(fine: np.ndarray, ratio: int, axis: int = -1,
                  periodic: bool = False) -> np.ndarray:
    """Values of a cell-centred field at the centres of a ``ratio`` times coarser mesh."""
    fine = np.moveaxis(np.asarray(fine, dtype=float), axis, -1)
    n = fine.shape[-1]
    if ratio < 1 or n % ratio:
        raise ConfigurationError(f"{n} cells cannot be coarsened by a factor {ratio}")
    if ratio % 2 == 1:
        out = fine[..., (ratio - 1) // 2::ratio]
        return np.moveaxis(out, -1, axis)
    if n < 6:
        raise ConfigurationError("midpoint restriction needs at least six cells")
    left = ratio * np.arange(n // ratio) + ratio // 2 - 1  # fine cell left of the midpoint
    out = np.zeros(fine.shape[:-1] + (len(left),))
    if periodic:
        for k, w in enumerate(MIDPOINT_WEIGHTS):
            out += w * fine[..., (left - 2 + k) % n]
    else:
        start = np.clip(left - 2, 0, n - 6)
        for s in np.unique(start - (left - 2)):
            rows = (start - (left - 2)) == s
            # stencil shifted by s cells towards the interior
            w = _lagrange_weights(np.arange(6.0), 2.5 - s)
            for k in range(6):
                out[..., rows] += w[k] * fine[..., start[rows] + k]
    return np.moveaxis(out, -1, axis)


def restrict(fine: np.ndarray, ratios: Sequence[int], periodic: Sequence[bool] | bool = False):
    """Restrict the trailing ``len(ratios)`` axes of ``fine``."""
    k = len(ratios)
    if isinstance(periodic, bool):
        periodic = (periodic,) * k
    out = np.asarray(fine, dtype=float)
    for i, (r, p) in enumerate(zip(ratios, periodic)):
        out = restrict_axis(out, int(r), axis=out.ndim - k + i, periodic=p)
    return out


def _ratios(coarse_shape, fine_shape) -> tuple[int, ...]:
    if len(coarse_shape) != len(fine_shape):
        raise ConfigurationError("fields of different dimension")
    ratios = []
    for c, f in zip(coarse_shape, fine_shape):
        if c <= 0 or f % c:
            raise ConfigurationError(f"mesh of {f} cells does not refine {c} cells")
        ratios.append(f // c)
    return tuple(ratios)


def l1_norm(values: np.ndarray, cell_volume: float) -> float:
    return float(np.sum(np.abs(values)) * cell_volume)


def l1_distance(coarse: np.ndarray, fine: np.ndarray, cell_volume: float,
                periodic: Sequence[bool] | bool = False) -> float:
    """``sum |coarse - R fine| * cell_volume`` with ``R`` the restriction to the coarse mesh.

    Both arguments are scalar fields shaped like their grids; ``cell_volume``
    belongs to the coarse mesh.
    """
    coarse = np.asarray(coarse, dtype=float)
    fine = np.asarray(fine, dtype=float)
    ratios = _ratios(coarse.shape, fine.shape)
    return l1_norm(coarse - restrict(fine, ratios, periodic), cell_volume)


@dataclass(frozen=True)
class RungeEstimate:
    error: float
    rate: float
    delta12: float
    delta24: float
    degenerate: bool = False


def runge_from_deltas(delta12: float, delta24: float) -> RungeEstimate:
    """``Error = d12^2 / |d12 - d24|`` and ``Rate = log2(d24 / d12)``.

    Equal deltas (or a zero ``delta12``) give a degenerate estimate with NaN
    entries instead of a division by zero.
    """
    if delta12 == delta24 or delta12 <= 0.0 or delta24 <= 0.0:
        return RungeEstimate(math.nan, math.nan, delta12, delta24, True)
    return RungeEstimate(delta12 ** 2 / abs(delta12 - delta24), math.log2(delta24 / delta12),
                         delta12, delta24)


def runge_error_rate(sol_fine, sol_mid, sol_coarse, cell_volume_fine: float,
                     periodic: Sequence[bool] | bool = False) -> RungeEstimate:
    """Runge estimate from solutions on meshes ``dx``, ``2 dx`` and ``4 dx``.

    Each difference is measured on the coarser mesh of its pair.
    """
    sol_fine, sol_mid, sol_coarse = (np.asarray(s, dtype=float)
                                     for s in (sol_fine, sol_mid, sol_coarse))
    k = sol_fine.ndim
    if _ratios(sol_mid.shape, sol_fine.shape) != (2,) * k or \
            _ratios(sol_coarse.shape, sol_mid.shape) != (2,) * k:
        raise ConfigurationError("Runge estimates need three meshes refined by factors of two")
    d12 = l1_distance(sol_mid, sol_fine, cell_volume_fine * 2 ** k, periodic)
    d24 = l1_distance(sol_coarse, sol_mid, cell_volume_fine * 4 ** k, periodic)
    return runge_from_deltas(d12, d24)


# --------------------------------------------------------------------------
# convergence tables


@dataclass
class ConvergenceRow:
    variant: str
    dx: float
    cells: tuple[int, ...]
    estimates: dict  # variable -> RungeEstimate


@dataclass
class ConvergenceReport:
    problem: str
    variables: tuple[str, ...]
    rows: list = field(default_factory=list)
    seconds: dict = field(default_factory=dict)  # variant -> total run time

    def lookup(self, variant: str, dx: float, variable: str) -> RungeEstimate:
        for row in self.rows:
            if row.variant == variant and math.isclose(row.dx, dx, rel_tol=1e-9):
                return row.estimates[variable]
        raise KeyError((variant, dx))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["variant", "dx"]
        for v in self.variables:
            header += [f"{v}_error", f"{v}_rate"]
        writer.writerow(header)
        for row in self.rows:
            line = [row.variant, f"{row.dx:.10g}"]
            for v in self.variables:
                est = row.estimates[v]
                line += [f"{est.error:.3e}", f"{est.rate:.2f}"]
            writer.writerow(line)
        return buf.getvalue()


def convergence_study(problem, cells_list: Sequence, variants: Sequence[str] = VARIANTS,
                      variables: Sequence[str] = ("rho", "E"), cfl: float = 0.45,
                      characteristic: bool | None = None, t_final: float | None = None,
                      log=None) -> ConvergenceReport:
    """Run every mesh with every variant and tabulate Runge estimates.

    ``cells_list`` must be a halving sequence (each mesh doubles the previous
    one in every direction); rows start at the third mesh.
    """
    meshes = [tuple(np.atleast_1d(c).astype(int).tolist()) for c in cells_list]
    if len(meshes) < 3:
        raise ConfigurationError("a convergence study needs at least three meshes")
    for a, b in zip(meshes, meshes[1:]):
        if _ratios(a, b) != (2,) * len(a):
            raise ConfigurationError("meshes must form a halving sequence")
    model = problem.model()
    try:
        index = [model.conservative_names.index(v) for v in variables]
    except ValueError as exc:
        raise ConfigurationError(f"unknown variable in {variables}") from exc
    periodic = [side[0] == PERIODIC for side in problem.boundary.sides]
    report = ConvergenceReport(problem.name, tuple(variables))
    for variant in variants:
        solutions, grids = [], []
        start = time.perf_counter()
        for cells in meshes:
            res = run_problem(problem, cells, variant, characteristic=characteristic, cfl=cfl,
                              t_final=t_final, snapshot_times=())
            solutions.append(res.U)
            grids.append(res.grid)
            if log is not None:
                log(f"{variant} {cells}: {res.steps} steps, {res.seconds:.2f} s")
        report.seconds[variant] = time.perf_counter() - start
        for k in range(2, len(meshes)):
            axes = grid_axes(grids[k])
            volume = float(np.prod([a.dx for a in axes]))
            est = {name: runge_error_rate(solutions[k][i], solutions[k - 1][i],
                                          solutions[k - 2][i], volume, periodic)
                   for name, i in zip(variables, index)}
            report.rows.append(ConvergenceRow(variant, axes[0].dx, meshes[k], est))
    return report


# --------------------------------------------------------------------------
# CPU benchmark


@dataclass
class VariantTiming:
    seconds: list = field(default_factory=list)
    counters: Counter = field(default_factory=Counter)
    steps: int = 0

    @property
    def mean(self) -> float:
        return float(np.mean(self.seconds))

    @property
    def std(self) -> float:
        return float(np.std(self.seconds, ddof=1)) if len(self.seconds) > 1 else 0.0


@dataclass
class BenchReport:
    problem: str
    cells: tuple[int, ...]
    repetitions: int
    max_steps: int | None
    timings: dict = field(default_factory=dict)  # variant -> VariantTiming
    deterministic: bool = True

    @property
    def ratio(self) -> float:
        """``mean_old / mean_new``."""
        return self.timings["old"].mean / self.timings["new"].mean

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["variant", "mean_seconds", "std_seconds", "repetitions", "steps",
                         "point_flux_for_corrections", "global_point_integrals", "ratio"])
        ratio = self.ratio if {"old", "new"} <= set(self.timings) else math.nan
        for variant, t in self.timings.items():
            writer.writerow([variant, f"{t.mean:.6f}", f"{t.std:.6f}", len(t.seconds), t.steps,
                             t.counters.get("point_flux_for_corrections", 0),
                             t.counters.get("global_point_integrals", 0),
                             f"{ratio:.3f}" if variant == "old" else ""])
        return buf.getvalue()


def cpu_benchmark(problem, cells=None, variants: Sequence[str] = VARIANTS, repetitions: int = 5,
                  max_steps: int | None = None, t_final: float | None = None,
                  warmup: bool = True) -> BenchReport:
    """Wall-clock time of complete runs, variants interleaved per repetition.

    A warm-up run of every variant is excluded from the statistics.
    ``max_steps`` truncates each run to a fixed number of time steps (same
    work for both variants).  The solution of every repetition must be
    bitwise identical; ``deterministic`` records that.
    """
    if repetitions < 1:
        raise ConfigurationError("repetitions must be at least 1")
    cells = tuple(cells) if cells is not None else (problem.bench_cells or problem.default_cells)
    report = BenchReport(problem.name, cells, repetitions, max_steps)
    first: dict[str, np.ndarray] = {}

    def once(variant, counters=None):
        res = run_problem(problem, cells, variant, t_final=t_final, snapshot_times=(),
                          max_steps=max_steps, counters=counters)
        return res

    if warmup:
        for variant in variants:
            once(variant)
    for variant in variants:
        report.timings[variant] = VariantTiming()
    for _ in range(repetitions):
        for variant in variants:
            counters = Counter()
            start = time.perf_counter()
            res = once(variant, counters)
            elapsed = time.perf_counter() - start
            timing = report.timings[variant]
            timing.seconds.append(elapsed)
            timing.counters = counters
            timing.steps = res.steps
            if variant in first:
                report.deterministic &= bool(np.array_equal(first[variant], res.U))
            else:
                first[variant] = res.U
    return report


__all__ = [
    "restrict_axis", "restrict", "l1_norm", "l1_distance", "RungeEstimate", "runge_from_deltas",
    "runge_error_rate", "ConvergenceRow", "ConvergenceReport", "convergence_study",
    "VariantTiming", "BenchReport", "cpu_benchmark",
]
