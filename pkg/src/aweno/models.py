"""Hyperbolic systems of conservation laws and the numerical example catalog.

A model works on component-first arrays ``U[c, ...]`` and always in its
*normal* frame: ``flux`` is the x-flux, and a y-sweep first maps the state with
``to_normal(U, 1)`` (swap of the two momenta) so both directions run the very
same arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, EigenError, first_bad_index
from .grid import FREE, PERIODIC, WALL, BoundarySpec, Grid1D, Grid2D


class SystemModel:
    """Scalar identity-frame defaults; subclasses override what they need."""

    name = "model"
    nvars = 1
    ndim = 1
    conservative_names: tuple[str, ...] = ("u",)
    primitive_names: tuple[str, ...] = ("u",)
    has_nonconservative = False

    def flux(self, U: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eigenvalues(self, U: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def max_speed(self, U: np.ndarray) -> np.ndarray:
        lam = self.eigenvalues(U)
        return np.maximum(np.abs(lam[0]), np.abs(lam[-1]))

    def eigenframe(self, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        eye = np.ones((1, 1) + W.shape[1:])
        return eye, eye

    # variables handed to WENO-Z; conservative by default
    def to_interp(self, U, x=None):
        return U

    def from_interp(self, W, x=None):
        return W

    def to_normal(self, U: np.ndarray, axis: int) -> np.ndarray:
        return U

    def flux_along(self, U: np.ndarray, axis: int) -> np.ndarray:
        return self.to_normal(self.flux(self.to_normal(U, axis)), axis)

    def momentum_index(self, axis: int) -> int | None:
        return None

    def primitive(self, U):
        return U

    def conservative(self, V):
        return np.asarray(V, dtype=float)

    def admissible(self, U) -> np.ndarray:
        return np.all(np.isfinite(U), axis=0)

    def snapshot_columns(self) -> tuple[str, ...]:
        extra = tuple(n for n in self.primitive_names if n not in self.conservative_names)
        return self.conservative_names + extra

    def snapshot_values(self, U: np.ndarray) -> np.ndarray:
        V = self.primitive(U)
        keep = [i for i, n in enumerate(self.primitive_names) if n not in self.conservative_names]
        return np.concatenate([U, V[keep]], axis=0)


class Burgers(SystemModel):
    name = "burgers"

    def flux(self, U):
        return 0.5 * U * U

    def eigenvalues(self, U):
        return U

    def max_speed(self, U):
        return np.abs(U[0])


class BuckleyLeverett(SystemModel):
    name = "buckley-leverett"

    def __init__(self, k: float = 1.0):
        self.k = k

    def flux(self, U):
        u = U
        w = 1.0 - u
        return u * u / (u * u + w * w) * (1.0 - self.k * w * w)

    def derivative(self, u):
        w = 1.0 - u
        den = u * u + w * w
        g = u * u / den
        dg = 2.0 * u * w / (den * den)
        h = 1.0 - self.k * w * w
        return dg * h + g * 2.0 * self.k * w

    def eigenvalues(self, U):
        return self.derivative(U)

    def max_speed(self, U):
        return np.abs(self.derivative(U[0]))


def _bad_frame(mask: np.ndarray, what: str):
    raise EigenError(f"characteristic decomposition failed ({what})", first_bad_index(mask))


def primitive_frame(rho, u, v, c2, nvars: int):
    """Eigenvectors of the primitive x-Jacobian for (rho, u[, v], p, passive...).

    ``c2`` is the squared sound speed; components past the Euler block are
    advected scalars with identity rows.  Returns ``(L, R)`` of shape
    ``(nvars, nvars, ...)``.
    """
    bad = ~(c2 > 0.0) | ~(rho > 0.0)
    if np.any(bad):
        _bad_frame(bad, "non-positive sound speed or density")
    c = np.sqrt(c2)
    shape = (nvars, nvars) + np.shape(rho)
    L = np.zeros(shape)
    R = np.zeros(shape)
    ip = 3 if v is not None else 2  # pressure slot
    half_rc = 0.5 * rho / c
    half_ic2 = 0.5 / c2
    L[0, 1], L[0, ip] = -half_rc, half_ic2
    L[1, 0], L[1, ip] = 1.0, -1.0 / c2
    last = ip
    L[last, 1], L[last, ip] = half_rc, half_ic2
    R[0, 0], R[1, 0], R[ip, 0] = 1.0, -c / rho, c2
    R[0, 1] = 1.0
    R[0, last], R[1, last], R[ip, last] = 1.0, c / rho, c2
    if v is not None:
        L[2, 2] = 1.0
        R[2, 2] = 1.0
    for i in range(ip + 1, nvars):
        L[i, i] = 1.0
        R[i, i] = 1.0
    return L, R


class Euler(SystemModel):
    """Ideal-gas Euler equations in 1-D (rho, m, E) or 2-D (rho, m, n, E).

    ``interp="primitive"`` interpolates (rho, u[, v], p) instead of the
    conservative variables; its frame is the primitive-variable one.
    """

    def __init__(self, gamma: float = 1.4, ndim: int = 1, interp: str = "conservative"):
        if interp not in ("conservative", "primitive"):
            raise ConfigurationError(f"unknown interpolation variables {interp!r}")
        self.gamma = gamma
        self.ndim = ndim
        self.interp = interp
        self.nvars = ndim + 2
        self.name = f"euler{ndim}d"
        if ndim == 1:
            self.conservative_names = ("rho", "mom", "E")
            self.primitive_names = ("rho", "u", "p")
        else:
            self.conservative_names = ("rho", "momx", "momy", "E")
            self.primitive_names = ("rho", "u", "v", "p")

    def pressure(self, U):
        rho, E = U[0], U[-1]
        kin = 0.5 * U[1] * U[1] / rho
        if self.ndim == 2:
            kin = kin + 0.5 * U[2] * U[2] / rho
        return (self.gamma - 1.0) * (E - kin)

    def sound_speed(self, U):
        return np.sqrt(self.gamma * self.pressure(U) / U[0])

    def flux(self, U):
        rho, m, E = U[0], U[1], U[-1]
        u = m / rho
        p = self.pressure(U)
        F = np.empty_like(U)
        F[0] = m
        F[1] = m * u + p
        if self.ndim == 2:
            F[2] = U[2] * u
        F[-1] = u * (E + p)
        return F

    def eigenvalues(self, U):
        u = U[1] / U[0]
        c = self.sound_speed(U)
        mid = [u] * (self.nvars - 2)
        return np.stack([u - c] + mid + [u + c])

    def max_speed(self, U):
        return np.abs(U[1] / U[0]) + self.sound_speed(U)

    def to_normal(self, U, axis):
        if axis == 0:
            return U
        return U[[0, 2, 1, 3]]

    def momentum_index(self, axis):
        return 1 + axis

    def primitive(self, U):
        V = np.empty_like(U)
        V[0] = U[0]
        V[1] = U[1] / U[0]
        if self.ndim == 2:
            V[2] = U[2] / U[0]
        V[-1] = self.pressure(U)
        return V

    def conservative(self, V):
        V = np.asarray(V, dtype=float)
        U = np.empty_like(V)
        rho = V[0]
        U[0] = rho
        U[1] = rho * V[1]
        kin = 0.5 * rho * V[1] * V[1]
        if self.ndim == 2:
            U[2] = rho * V[2]
            kin = kin + 0.5 * rho * V[2] * V[2]
        U[-1] = V[-1] / (self.gamma - 1.0) + kin
        return U

    def admissible(self, U):
        with np.errstate(all="ignore"):
            p = self.pressure(U)
            return np.isfinite(p) & (U[0] > 0.0) & (p > 0.0)

    def to_interp(self, U, x=None):
        return self.primitive(U) if self.interp == "primitive" else U

    def from_interp(self, W, x=None):
        return self.conservative(W) if self.interp == "primitive" else W

    def eigenframe(self, W):
        if self.interp == "primitive":
            rho, u, p = W[0], W[1], W[-1]
            v = W[2] if self.ndim == 2 else None
            return primitive_frame(rho, u, v, self.gamma * p / rho, self.nvars)
        return self._conservative_frame(W)

    def _conservative_frame(self, U):
        g1 = self.gamma - 1.0
        rho = U[0]
        u = U[1] / rho
        v = U[2] / rho if self.ndim == 2 else 0.0
        q2 = u * u + v * v
        p = g1 * (U[-1] - 0.5 * rho * q2)
        c2 = self.gamma * p / rho
        bad = ~(c2 > 0.0) | ~(rho > 0.0)
        if np.any(bad):
            _bad_frame(bad, "non-positive pressure or density in averaged state")
        c = np.sqrt(c2)
        H = (U[-1] + p) / rho
        b1 = g1 / c2
        b2 = 0.5 * b1 * q2
        d = self.nvars
        L = np.zeros((d, d) + rho.shape)
        R = np.zeros((d, d) + rho.shape)
        e = d - 1
        # columns of R: u - c, u (entropy), [shear], u + c
        R[0, 0], R[1, 0], R[e, 0] = 1.0, u - c, H - u * c
        R[0, 1], R[1, 1], R[e, 1] = 1.0, u, 0.5 * q2
        R[0, e], R[1, e], R[e, e] = 1.0, u + c, H + u * c
        L[0, 0], L[0, 1], L[0, e] = 0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), 0.5 * b1
        L[1, 0], L[1, 1], L[1, e] = 1.0 - b2, b1 * u, -b1
        L[e, 0], L[e, 1], L[e, e] = 0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), 0.5 * b1
        if self.ndim == 2:
            R[2, 0], R[2, 1], R[2, e] = v, v, v
            R[2, 2], R[e, 2] = 1.0, v
            L[0, 2] = -0.5 * b1 * v
            L[1, 2] = b1 * v
            L[e, 2] = -0.5 * b1 * v
            L[2, 0], L[2, 2] = -v, 1.0
        return L, R


def burgers_model() -> Burgers:
    return Burgers()


def buckley_leverett_model(k: float = 1.0) -> BuckleyLeverett:
    return BuckleyLeverett(k)


def euler1d_model(gamma: float = 1.4) -> Euler:
    return Euler(gamma, ndim=1)


def euler2d_model(gamma: float = 1.4, interp: str = "conservative") -> Euler:
    return Euler(gamma, ndim=2, interp=interp)


# --------------------------------------------------------------------------
# example catalog


@dataclass(frozen=True)
class Problem:
    """A numerical example: model, domain, initial/boundary data and meshes.

    ``initial(*coords)`` returns the conservative state on coordinate arrays.
    Mesh sizes are cell counts per axis.
    """

    name: str
    title: str
    model_factory: Callable[[], SystemModel]
    domain: tuple[tuple[float, float], ...]
    initial: Callable[..., np.ndarray]
    boundary: BoundarySpec
    t_final: float
    default_cells: tuple[int, ...]
    reference_cells: tuple[int, ...] | None = None
    bench_cells: tuple[int, ...] | None = None
    snapshot_times: tuple[float, ...] = ()
    dt_mode: str = "standard"
    characteristic: bool = False
    positivity: bool = False
    convergence_cells: tuple[int, ...] = ()
    notes: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def ndim(self) -> int:
        return len(self.domain)

    def model(self) -> SystemModel:
        return self.model_factory()

    def grid(self, cells=None):
        cells = tuple(cells) if cells is not None else self.default_cells
        if len(cells) != self.ndim:
            raise ConfigurationError(f"{self.name} is {self.ndim}-D; got cells {cells}")
        axes = [Grid1D(lo, hi, n) for (lo, hi), n in zip(self.domain, cells)]
        return axes[0] if self.ndim == 1 else Grid2D(*axes)

    def initial_field(self, grid) -> np.ndarray:
        if self.ndim == 1:
            return np.asarray(self.initial(grid.centers), dtype=float).reshape(-1, grid.n_cells)
        X, Y = np.meshgrid(grid.x.centers, grid.y.centers, indexing="ij")
        return np.asarray(self.initial(X, Y), dtype=float)


def _sine_ic(x):
    return (0.25 + 0.5 * np.sin(2.0 * np.pi * x))[None]


def _euler_smooth_ic(x, gamma=1.4):
    u = np.sin(np.pi * x / 5.0 + np.pi / 4.0)
    rho = ((gamma - 1.0) / (2.0 * np.sqrt(gamma)) * (u + 10.0)) ** (2.0 / (gamma - 1.0))
    p = rho ** gamma
    return euler1d_model(gamma).conservative(np.stack([rho, u, p]))


def _shock_entropy_ic(x, gamma=1.4):
    left = x < -4.5
    rho = np.where(left, 1.51695, 1.0 + 0.1 * np.sin(20.0 * x))
    u = np.where(left, 0.523346, 0.0)
    p = np.where(left, 1.805, 1.0)
    return euler1d_model(gamma).conservative(np.stack([rho, u, p]))


def _blast_ic(x, gamma=1.4):
    p = np.where(x < 0.1, 1000.0, np.where(x <= 0.9, 0.01, 100.0))
    one = np.ones_like(x)
    return euler1d_model(gamma).conservative(np.stack([one, 0.0 * one, p]))


def _implosion_ic(x, y, gamma=1.4):
    inner = np.abs(x) + np.abs(y) < 0.15
    rho = np.where(inner, 0.125, 1.0)
    p = np.where(inner, 0.14, 1.0)
    zero = np.zeros_like(x)
    return euler2d_model(gamma).conservative(np.stack([rho, zero, zero, p]))


def _conservative_problems() -> list[Problem]:
    periodic = BoundarySpec.uniform(PERIODIC)
    return [
        Problem(
            name="burgers", title="inviscid Burgers equation",
            model_factory=burgers_model, domain=((0.0, 1.0),), initial=_sine_ic,
            boundary=periodic, t_final=0.4, default_cells=(40,),
            reference_cells=(2000,), bench_cells=(40000,),
        ),
        Problem(
            name="buckley-leverett", title="Buckley-Leverett with gravity (k=1)",
            model_factory=buckley_leverett_model, domain=((0.0, 1.0),), initial=_sine_ic,
            boundary=periodic, t_final=0.4, default_cells=(40,),
            reference_cells=(2000,), bench_cells=(20000,),
        ),
        Problem(
            name="euler-smooth", title="1-D Euler accuracy test",
            model_factory=euler1d_model, domain=((0.0, 10.0),), initial=_euler_smooth_ic,
            boundary=periodic, t_final=0.1, default_cells=(200,),
            reference_cells=(3200,), dt_mode="accuracy", characteristic=True,
            convergence_cells=(200, 400, 800, 1600, 3200, 6400),
        ),
        Problem(
            name="shock-entropy", title="shock-entropy interaction",
            model_factory=euler1d_model, domain=((-5.0, 5.0),), initial=_shock_entropy_ic,
            boundary=BoundarySpec.uniform(FREE), t_final=5.0, default_cells=(400,),
            reference_cells=(8000,), bench_cells=(6000,), characteristic=True,
        ),
        Problem(
            name="blast", title="Woodward-Colella blast waves",
            model_factory=euler1d_model, domain=((0.0, 1.0),), initial=_blast_ic,
            boundary=BoundarySpec.uniform(WALL), t_final=0.038, default_cells=(400,),
            reference_cells=(8000,), bench_cells=(4000,), characteristic=True,
            positivity=True,
            notes="desk-scale reference: 4000 cells; positivity limiter on",
        ),
        Problem(
            name="implosion", title="2-D implosion",
            model_factory=euler2d_model, domain=((0.0, 0.3), (0.0, 0.3)),
            initial=_implosion_ic,
            boundary=BoundarySpec(((WALL, FREE), (WALL, FREE))), t_final=2.5,
            default_cells=(40, 40), bench_cells=(400, 400), characteristic=True,
            positivity=True,
            notes="full mesh 400x400; desk default 40x40; face-state fallback on",
        ),
    ]


def example_catalog() -> list[Problem]:
    from .ncmodels import multifluid_explosion_problem, scalar_source_problem

    problems = _conservative_problems()
    problems.insert(2, scalar_source_problem())
    problems.append(multifluid_explosion_problem())
    return problems


def get_problem(name: str) -> Problem:
    for problem in example_catalog():
        if problem.name == name:
            return problem
    known = ", ".join(p.name for p in example_catalog())
    raise ConfigurationError(f"unknown problem {name!r} (known: {known})")
