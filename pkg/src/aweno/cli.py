"""Command-line interface: ``aweno run | converge | bench | list``.

Mesh sizes are given as inverse spacings (``--nx 40`` means ``dx = 1/40``;
fractions such as ``400/3`` are accepted) or as explicit cell counts with
``--cells``.  Options may also come from a ``key=value`` file passed with
``--config``; command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .awenocorr import VARIANTS
from .errors import ConfigurationError, IntegrationError, StateError
from .grid import grid_axes
from .harness import convergence_study, cpu_benchmark
from .models import example_catalog, get_problem
from .timeint import run_problem

MIN_CELLS = 12

DEFAULTS = {
    "scheme": "new",
    "cfl": 0.45,
    "out": ".",
    "reps": 5,
    "schemes": "old,new",
    "variables": "rho,E",
}


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run (there is no randomness anywhere)."""

    problem: str
    scheme: str = "new"
    cells: tuple[int, ...] = ()
    cfl: float = 0.45
    t_final: float | None = None
    snapshots: tuple[float, ...] | None = None
    characteristic: bool | None = None
    positivity: bool | None = None

    def metadata(self) -> dict:
        meta = asdict(self)
        meta["cells"] = "x".join(str(c) for c in self.cells)
        if self.snapshots is not None:
            meta["snapshots"] = ",".join(repr(float(s)) for s in self.snapshots)
        return meta


# --------------------------------------------------------------------------
# snapshots


@dataclass
class Snapshot:
    metadata: dict
    columns: tuple[str, ...]
    data: np.ndarray  # (rows, columns)

    def field(self, nvars: int, shape: tuple[int, ...]) -> np.ndarray:
        """Conservative variables in grid layout ``(nvars, *shape)``."""
        k = len(shape)
        return self.data[:, k:k + nvars].T.reshape((nvars,) + tuple(shape))


def snapshot_columns(model, ndim: int) -> tuple[str, ...]:
    coords = ("x", "y")[:ndim]
    return coords + tuple(model.snapshot_columns())


def write_snapshot(U: np.ndarray, grid, model, path, metadata: dict | None = None) -> Path:
    """Write one row per cell: coordinates, conservative then primitive variables.

    ``metadata`` is embedded as ``# key=value`` lines.  2-D fields are written
    in row-major order of the ``(nx, ny)`` array.
    """
    path = Path(path)
    axes = grid_axes(grid)
    if len(axes) == 1:
        coords = [axes[0].centers]
    else:
        X, Y = np.meshgrid(axes[0].centers, axes[1].centers, indexing="ij")
        coords = [X.ravel(), Y.ravel()]
    values = model.snapshot_values(U).reshape(-1, len(coords[0]))
    table = np.column_stack(coords + list(values))
    lines = [f"# {k}={'' if v is None else v}" for k, v in (metadata or {}).items()]
    lines.append(",".join(snapshot_columns(model, len(axes))))
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
            np.savetxt(fh, table, fmt="%.17g", delimiter=",")
    except OSError as exc:
        raise OSError(f"cannot write snapshot {path}: {exc}") from exc
    return path


def read_snapshot(path) -> Snapshot:
    path = Path(path)
    meta = {}
    header = None
    try:
        with open(path) as fh:
            for line in fh:
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    meta[key] = value
                else:
                    header = tuple(line.strip().split(","))
                    break
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise OSError(f"cannot read snapshot {path}: {exc}") from exc
    if header is None:
        raise ConfigurationError(f"{path} has no header row")
    return Snapshot(meta, header, data)


# --------------------------------------------------------------------------
# option handling


def parse_mesh(value: str) -> Fraction:
    try:
        res = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"bad mesh value {value!r}") from exc
    if res <= 0:
        raise ConfigurationError(f"mesh value must be positive, got {value!r}")
    return res


def cells_from_resolution(problem, nx: str | None, ny: str | None = None) -> tuple[int, ...]:
    """Cell counts for inverse spacings ``nx`` (and ``ny``, default ``nx``)."""
    res = [parse_mesh(nx)]
    if problem.ndim == 2:
        res.append(parse_mesh(ny) if ny is not None else res[0])
    cells = []
    for (lo, hi), r in zip(problem.domain, res):
        n = Fraction(str(hi)) * r - Fraction(str(lo)) * r
        if n.denominator != 1:
            raise ConfigurationError(f"1/dx = {r} does not divide the domain [{lo}, {hi}]")
        cells.append(int(n))
    return tuple(cells)


def parse_cells(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.lower().split("x"))
    except ValueError as exc:
        raise ConfigurationError(f"bad cell count {text!r}") from exc


def parse_times(text: str | None) -> tuple[float, ...] | None:
    if text is None or text == "":
        return None
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise ConfigurationError(f"bad time list {text!r}") from exc


def parse_bool(value) -> bool | None:
    if value is None or isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {value!r}")


def read_config_file(path) -> dict:
    """``key=value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"{path}:{number}: expected key=value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve(args: argparse.Namespace) -> dict:
    """Merge built-in defaults, the config file and explicit flags (flags win)."""
    options = dict(DEFAULTS)
    if getattr(args, "config", None):
        file_values = read_config_file(args.config)
        unknown = set(file_values) - set(vars(args))
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        options.update(file_values)
    options.update({k: v for k, v in vars(args).items() if v is not None})
    return options


def _mesh_of(problem, opts, fallback) -> tuple[int, ...]:
    if opts.get("cells"):
        cells = parse_cells(str(opts["cells"]))
    elif opts.get("nx"):
        cells = cells_from_resolution(problem, str(opts["nx"]), opts.get("ny"))
    else:
        cells = tuple(fallback)
    if len(cells) != problem.ndim:
        raise ConfigurationError(f"{problem.name} needs {problem.ndim} cell counts, got {cells}")
    if min(cells) < MIN_CELLS:
        raise ConfigurationError(f"at least {MIN_CELLS} cells per direction are required")
    return cells


def _schemes(text) -> tuple[str, ...]:
    schemes = tuple(s.strip() for s in str(text).split(",") if s.strip())
    for s in schemes:
        if s not in VARIANTS:
            raise ConfigurationError(f"unknown scheme {s!r}")
    return schemes


# --------------------------------------------------------------------------
# subcommands


def _cmd_run(opts: dict, out) -> int:
    problem = get_problem(opts["problem"])
    scheme = _schemes(opts["scheme"])
    if len(scheme) != 1:
        raise ConfigurationError("run takes a single scheme")
    cells = _mesh_of(problem, opts, problem.default_cells)
    t_final = float(opts["t_final"]) if opts.get("t_final") is not None else problem.t_final
    snaps = parse_times(opts.get("snapshots"))
    if snaps is None:
        snaps = tuple(s for s in problem.snapshot_times if s <= t_final)
    char = parse_bool(opts.get("characteristic"))
    pos = parse_bool(opts.get("positivity"))
    config = RunConfig(problem.name, scheme[0], cells, float(opts["cfl"]), t_final, snaps,
                       problem.characteristic if char is None else char,
                       problem.positivity if pos is None else pos)
    result = run_problem(problem, cells, config.scheme, characteristic=config.characteristic,
                         cfl=config.cfl, t_final=t_final, snapshot_times=snaps,
                         positivity=config.positivity)
    outdir = Path(opts["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    frames = dict(result.snapshots)
    frames[result.t] = result.U
    for t in sorted(frames):
        meta = config.metadata()
        meta["time"] = repr(float(t))
        path = outdir / f"{problem.name}-{config.scheme}-t{t:g}.csv"
        write_snapshot(frames[t], result.grid, result.model, path, meta)
        print(f"wrote {path}", file=out)
    print(f"{problem.name} {config.scheme} cells={cells} steps={result.steps} "
          f"t={result.t:g} seconds={result.seconds:.3f}", file=out)
    return 0


def _cmd_converge(opts: dict, out) -> int:
    problem = get_problem(opts.get("problem", "euler-smooth"))
    if opts.get("meshes"):
        meshes = [cells_from_resolution(problem, m.strip()) for m in str(opts["meshes"]).split(",")]
    elif problem.convergence_cells:
        meshes = [(c,) * problem.ndim for c in problem.convergence_cells]
    else:
        raise ConfigurationError(f"{problem.name} has no default mesh sequence; pass --meshes")
    variables = tuple(v.strip() for v in str(opts["variables"]).split(","))
    t_final = float(opts["t_final"]) if opts.get("t_final") is not None else None
    report = convergence_study(problem, meshes, _schemes(opts["schemes"]), variables,
                               float(opts["cfl"]), parse_bool(opts.get("characteristic")),
                               t_final, log=lambda s: print(s, file=sys.stderr))
    text = report.to_csv()
    if opts.get("output"):
        Path(opts["output"]).write_text(text)
        print(f"wrote {opts['output']}", file=out)
    else:
        out.write(text)
    return 0


def _cmd_bench(opts: dict, out) -> int:
    problem = get_problem(opts["problem"])
    cells = _mesh_of(problem, opts, problem.bench_cells or problem.default_cells)
    steps = int(opts["steps"]) if opts.get("steps") is not None else None
    report = cpu_benchmark(problem, cells, _schemes(opts["schemes"]), int(opts["reps"]), steps)
    text = report.to_csv()
    if opts.get("output"):
        Path(opts["output"]).write_text(text)
        print(f"wrote {opts['output']}", file=out)
    else:
        out.write(text)
    if not report.deterministic:
        print("warning: repetitions produced different solutions", file=sys.stderr)
    return 0


def _inverse_spacing(problem, cells) -> str:
    parts = []
    for (lo, hi), n in zip(problem.domain, cells):
        parts.append(str(Fraction(n) / (Fraction(str(hi)) - Fraction(str(lo)))))
    return "x".join(parts)


def _cmd_list(opts: dict, out) -> int:
    print("name,dims,t_final,default_cells,default_1/dx,full_cells,full_1/dx,title", file=out)
    for p in example_catalog():
        full = p.bench_cells or p.default_cells
        print(",".join([p.name, str(p.ndim), f"{p.t_final:g}",
                        "x".join(map(str, p.default_cells)), _inverse_spacing(p, p.default_cells),
                        "x".join(map(str, full)), _inverse_spacing(p, full),
                        f'"{p.title}"']), file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aweno", description="Fifth-order A-WENO solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mesh=True):
        p.add_argument("--config", help="key=value file with defaults for these options")
        p.add_argument("--problem", help="catalog problem name (see 'aweno list')")
        p.add_argument("--cfl", type=float)
        p.add_argument("--t-final", dest="t_final", type=float)
        if mesh:
            p.add_argument("--nx", help="1/dx in x (fractions allowed, e.g. 400/3)")
            p.add_argument("--ny", help="1/dy in y (default: same as --nx)")
            p.add_argument("--cells", help="explicit cell counts, e.g. 400 or 40x40")

    run = sub.add_parser("run", help="simulate one problem and write snapshots")
    common(run)
    run.add_argument("--scheme", choices=VARIANTS)
    run.add_argument("--snapshots", help="comma-separated output times")
    run.add_argument("--characteristic", choices=("true", "false"))
    run.add_argument("--positivity", choices=("true", "false"))
    run.add_argument("--out", help="output directory")

    conv = sub.add_parser("converge", help="Runge error/rate table on a mesh sequence")
    common(conv, mesh=False)
    conv.add_argument("--meshes", help="comma-separated 1/dx values, e.g. 20,40,80")
    conv.add_argument("--schemes")
    conv.add_argument("--variables", help="conservative variables, e.g. rho,E")
    conv.add_argument("--characteristic", choices=("true", "false"))
    conv.add_argument("--output", help="CSV file (default: stdout)")

    bench = sub.add_parser("bench", help="CPU time of the old and new schemes")
    common(bench)
    bench.add_argument("--reps", type=int)
    bench.add_argument("--steps", type=int, help="time steps per run (default: to t_final)")
    bench.add_argument("--schemes")
    bench.add_argument("--output", help="CSV file (default: stdout)")

    sub.add_parser("list", help="print the problem catalog")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _resolve(args)
        if args.command != "list" and args.command != "converge" and not opts.get("problem"):
            raise ConfigurationError("--problem is required")
        handler = {"run": _cmd_run, "converge": _cmd_converge, "bench": _cmd_bench,
                   "list": _cmd_list}[args.command]
        return handler(opts, out)
    except ConfigurationError as exc:
        parser.print_usage(sys.stderr)
        print(f"aweno: error: {exc}", file=sys.stderr)
        return 2
    except (StateError, IntegrationError) as exc:
        print(f"aweno: integration failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
