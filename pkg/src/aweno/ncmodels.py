"""Nonconservative model plugins for the flux-globalization solver.

* ``ScalarSourceModel``: ``u_t + (u^2/2)_x + z_x u = 0`` with equilibrium
  variable ``E = u + z`` and ``f(u)_x + z_x u = u E_x``.
* ``Multifluid``: 2-D Euler equations with the stiffened-gas parameters
  ``Gamma = 1/(gamma - 1)`` and ``Pi = gamma pi_inf/(gamma - 1)`` transported by
  ``Gamma_t + (u Gamma)_x + (v Gamma)_y = Gamma (u_x + v_y)`` (same for ``Pi``).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConfigurationError
from .grid import FREE, WALL, BoundarySpec, Dirichlet
from .models import Problem, SystemModel, primitive_frame


def cosine_bump(x):
    """``z(x) = -cos(pi x)`` on ``(3/2, 5/2)``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    return np.where((x > 1.5) & (x < 2.5), -np.cos(np.pi * x), 0.0)


def cosine_bump_slope(x):
    x = np.asarray(x, dtype=float)
    return np.where((x > 1.5) & (x < 2.5), np.pi * np.sin(np.pi * x), 0.0)


class ScalarSourceModel(SystemModel):
    """Burgers flux with the source ``-z_x u``; ``topography=None`` means ``z = 0``."""

    name = "scalar-source"
    nonconservative = True
    nc_flux_form = True

    def __init__(self, topography: Callable[[np.ndarray], np.ndarray] | None = cosine_bump):
        self.topography = topography
        self.has_nonconservative = topography is not None
        self._z_cache: dict[tuple, np.ndarray] = {}

    def z(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.topography is None:
            return np.zeros_like(x)
        key = (x.shape, x.tobytes())
        z = self._z_cache.get(key)
        if z is None:
            if len(self._z_cache) > 64:
                self._z_cache.clear()
            z = self._z_cache[key] = np.asarray(self.topography(x), dtype=float)
        return z

    def flux(self, U):
        return 0.5 * U * U

    def eigenvalues(self, U):
        return U

    def max_speed(self, U):
        return np.abs(U[0])

    def to_interp(self, U, x=None):
        if not self.has_nonconservative:
            return U
        if x is None:
            raise ConfigurationError("equilibrium variables need the cell coordinates")
        return U + self.z(x)

    def from_interp(self, W, x=None):
        if not self.has_nonconservative:
            return W
        if x is None:
            raise ConfigurationError("equilibrium variables need the face coordinates")
        return W - self.z(x)

    def nc_factors(self, U, W):
        return U, W

    def steady_state(self, x, level: float) -> np.ndarray:
        """``u = level - z(x)``: constant equilibrium variable."""
        return (level - self.z(x))[None]


class Multifluid(SystemModel):
    """Stiffened-gas two-dimensional multifluid system (rho, m, n, E, Gamma, Pi)."""

    name = "multifluid"
    nvars = 6
    ndim = 2
    nonconservative = True
    has_nonconservative = True
    nc_flux_form = False
    conservative_names = ("rho", "momx", "momy", "E", "Gamma", "Pi")
    primitive_names = ("rho", "u", "v", "p", "Gamma", "Pi")

    @staticmethod
    def parameters(gamma, pi_inf):
        """(Gamma, Pi) from the EOS parameters."""
        gamma = np.asarray(gamma, dtype=float)
        return 1.0 / (gamma - 1.0), gamma * np.asarray(pi_inf, dtype=float) / (gamma - 1.0)

    @staticmethod
    def eos(Gamma, Pi):
        """(gamma, pi_inf) from the transported parameters."""
        gamma = 1.0 + 1.0 / Gamma
        return gamma, Pi / (Gamma + 1.0)

    def pressure(self, U):
        rho = U[0]
        kin = 0.5 * (U[1] * U[1] + U[2] * U[2]) / rho
        return (U[3] - kin - U[5]) / U[4]

    def sound_speed_sq(self, rho, p, Gamma, Pi):
        gamma, pi_inf = self.eos(Gamma, Pi)
        return gamma * (p + pi_inf) / rho

    def flux(self, U):
        rho, m = U[0], U[1]
        u = m / rho
        p = self.pressure(U)
        F = np.empty_like(U)
        F[0] = m
        F[1] = m * u + p
        F[2] = U[2] * u
        F[3] = u * (U[3] + p)
        F[4] = u * U[4]
        F[5] = u * U[5]
        return F

    def eigenvalues(self, U):
        u = U[1] / U[0]
        c = np.sqrt(self.sound_speed_sq(U[0], self.pressure(U), U[4], U[5]))
        return np.stack([u - c] + [u] * 4 + [u + c])

    def max_speed(self, U):
        c2 = self.sound_speed_sq(U[0], self.pressure(U), U[4], U[5])
        return np.abs(U[1] / U[0]) + np.sqrt(c2)

    def to_normal(self, U, axis):
        if axis == 0:
            return U
        return U[[0, 2, 1, 3, 4, 5]]

    def momentum_index(self, axis):
        return 1 + axis

    def primitive(self, U):
        V = np.empty_like(U)
        V[0] = U[0]
        V[1] = U[1] / U[0]
        V[2] = U[2] / U[0]
        V[3] = self.pressure(U)
        V[4] = U[4]
        V[5] = U[5]
        return V

    def conservative(self, V):
        V = np.asarray(V, dtype=float)
        U = np.empty_like(V)
        rho = V[0]
        U[0] = rho
        U[1] = rho * V[1]
        U[2] = rho * V[2]
        U[3] = V[4] * V[3] + V[5] + 0.5 * rho * (V[1] * V[1] + V[2] * V[2])
        U[4] = V[4]
        U[5] = V[5]
        return U

    def admissible(self, U):
        with np.errstate(all="ignore"):
            p = self.pressure(U)
            _, pi_inf = self.eos(U[4], U[5])
            # hyperbolicity needs p + pi_inf > 0, not the sign of Pi, which is
            # not preserved near gas regions where it vanishes
            return np.isfinite(p) & (U[0] > 0.0) & (U[4] > 0.0) & (p + pi_inf > 0.0)

    # interpolation in (rho, u, v, p, Gamma, Pi) keeps constant-(u, p) interfaces
    def to_interp(self, U, x=None):
        return self.primitive(U)

    def from_interp(self, W, x=None):
        return self.conservative(W)

    def eigenframe(self, W):
        rho, p = W[0], W[3]
        c2 = self.sound_speed_sq(rho, p, W[4], W[5])
        return primitive_frame(rho, W[1], W[2], c2, self.nvars)

    def nc_factors(self, U, W):
        M = np.zeros_like(U)
        V = np.zeros_like(U)
        M[4], M[5] = U[4], U[5]
        V[4] = V[5] = W[1]
        return M, V

    def from_primitive_eos(self, rho, u, v, p, gamma, pi_inf) -> np.ndarray:
        Gamma, Pi = self.parameters(gamma, pi_inf)
        return self.conservative(np.stack(np.broadcast_arrays(rho, u, v, p, Gamma, Pi)))


def scalar_source_model() -> ScalarSourceModel:
    return ScalarSourceModel(cosine_bump)


def multifluid2d_model() -> Multifluid:
    return Multifluid()


def equilibrium_dirichlet(model: ScalarSourceModel, x_boundary: float, value: float) -> Dirichlet:
    """Ghost states on the equilibrium manifold through the boundary value."""
    level = value + float(model.z(np.array([x_boundary]))[0])
    return Dirichlet(lambda xg: (level - model.z(xg))[None])


def scalar_source_problem() -> Problem:
    model = scalar_source_model()
    bc = BoundarySpec(((equilibrium_dirichlet(model, 0.0, 2.0),
                        equilibrium_dirichlet(model, 4.0, 1.0)),))
    return Problem(
        name="scalar-source", title="scalar equation with a source term",
        model_factory=scalar_source_model, domain=((0.0, 4.0),),
        initial=lambda x: np.ones((1,) + np.shape(x)),
        boundary=bc, t_final=2.75, default_cells=(40,),
        reference_cells=(40000,), bench_cells=(6000,),
        snapshot_times=(0.25, 0.75, 1.75, 2.75),
        notes="benchmark-scale reference 1/10000; desk-scale references are coarser",
    )


def _explosion_ic(x, y):
    model = Multifluid()
    bubble = (x - 5.0) ** 2 + (y - 2.0) ** 2 < 1.0
    air = (y > 4.0) & ~bubble
    rho = np.where(bubble, 1.27, np.where(air, 0.02, 1.0))
    p = np.where(bubble, 8290.0, 1.0)
    gamma = np.where(bubble, 2.0, np.where(air, 1.4, 7.15))
    pi_inf = np.where(bubble | air, 0.0, 3309.0)
    zero = np.zeros_like(x)
    return model.from_primitive_eos(rho, zero, zero, p, gamma, pi_inf)


def multifluid_explosion_problem() -> Problem:
    return Problem(
        name="multifluid-explosion", title="cylindrical underwater explosion",
        model_factory=multifluid2d_model, domain=((0.0, 10.0), (0.0, 6.0)),
        initial=_explosion_ic,
        boundary=BoundarySpec(((FREE, FREE), (WALL, FREE))), t_final=0.02,
        default_cells=(200, 120), bench_cells=(800, 480), characteristic=True,
        positivity=True,
        notes="full mesh 800x480; desk default 200x120",
    )
