"""Fifth-order WENO-Z interpolation of one-sided point values at cell interfaces.

This is point-value *interpolation* (the A-WENO setting), not reconstruction
from cell averages: the three candidate quadratics interpolate ``w`` at
``x_{j+1/2}`` and their optimal combination is the five-point interpolant
``(3, -20, 90, 60, -5) / 128``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import GHOST

#: WENO-Z regularisation and power (not fixed by the scheme).  A tiny ``EPS``
#: lets the nearly constant characteristic fields of smooth flows pick
#: strongly nonlinear weights, which spoils the clean fifth-order behaviour on
#: coarse meshes; 1e-6 keeps those fields on the linear weights.
EPS = 1e-6
POWER = 2

LINEAR_WEIGHTS = (1.0 / 16.0, 10.0 / 16.0, 5.0 / 16.0)


def _betas(da, db, dd, de):
    # Jiang-Shu indicators written in differences relative to the centre value
    b0 = 13.0 / 12.0 * (da - 2.0 * db) ** 2 + 0.25 * (da - 4.0 * db) ** 2
    b1 = 13.0 / 12.0 * (db + dd) ** 2 + 0.25 * (db - dd) ** 2
    b2 = 13.0 / 12.0 * (de - 2.0 * dd) ** 2 + 0.25 * (de - 4.0 * dd) ** 2
    return b0, b1, b2


def _alphas(b0, b1, b2, eps, power):
    tau = np.abs(b0 - b2)
    d0, d1, d2 = LINEAR_WEIGHTS
    if power == 2:
        r0, r1, r2 = tau / (b0 + eps), tau / (b1 + eps), tau / (b2 + eps)
        return d0 * (1.0 + r0 * r0), d1 * (1.0 + r1 * r1), d2 * (1.0 + r2 * r2)
    return (d0 * (1.0 + (tau / (b0 + eps)) ** power),
            d1 * (1.0 + (tau / (b1 + eps)) ** power),
            d2 * (1.0 + (tau / (b2 + eps)) ** power))


def _wenoz(a, b, c, d, e, eps=EPS, power=POWER):
    """Left-biased value at the face between ``c`` and ``d`` from ``a..e``."""
    da, db, dd, de = a - c, b - c, d - c, e - c
    q0 = (3.0 * da - 10.0 * db) * 0.125
    q1 = (3.0 * dd - db) * 0.125
    q2 = (6.0 * dd - de) * 0.125
    a0, a1, a2 = _alphas(*_betas(da, db, dd, de), eps, power)
    return c + (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)


def nonlinear_weights(values, eps: float = EPS, power: int = POWER) -> np.ndarray:
    """Normalised WENO-Z weights for a left-biased stencil (last axis of length 5)."""
    v = np.asarray(values, dtype=float)
    a, b, c, d, e = (v[..., i] for i in range(5))
    alphas = _alphas(*_betas(a - c, b - c, d - c, e - c), eps, power)
    total = alphas[0] + alphas[1] + alphas[2]
    return np.stack([al / total for al in alphas], axis=-1)


def wenoz_minus(values, eps: float = EPS, power: int = POWER):
    """Left-sided value ``w^-_{j+1/2}`` from ``(w_{j-2}, ..., w_{j+2})``."""
    v = np.asarray(values, dtype=float)
    return _wenoz(v[..., 0], v[..., 1], v[..., 2], v[..., 3], v[..., 4], eps, power)


def wenoz_plus(values, eps: float = EPS, power: int = POWER):
    """Right-sided value ``w^+_{j+1/2}`` from ``(w_{j-1}, ..., w_{j+3})``."""
    return wenoz_minus(np.asarray(values, dtype=float)[..., ::-1], eps, power)


def _apply(matrix: np.ndarray, vec: np.ndarray) -> np.ndarray:
    # fixed summation order, independent of memory layout
    d = matrix.shape[0]
    out = np.empty(np.broadcast_shapes(matrix.shape[1:], vec.shape))
    for a in range(d):
        acc = matrix[a, 0] * vec[0]
        for b in range(1, d):
            acc = acc + matrix[a, b] * vec[b]
        out[a] = acc
    return out


def interpolate_lines(w: np.ndarray, frame=None, eps: float = EPS,
                      power: int = POWER) -> tuple[np.ndarray, np.ndarray]:
    """One-sided values at every interior face of padded lines.

    ``w`` has shape ``(d, ..., n + 6)``; the result is a pair of arrays of
    shape ``(d, ..., n + 1)`` for faces ``1/2 .. n+1/2``.  When ``frame`` is
    given it maps the face-averaged variables to ``(L, R)`` eigenvector
    matrices and interpolation is done in characteristic variables.
    """
    n = w.shape[-1] - 2 * GHOST
    m = n + 1
    cells = [w[..., k:k + m] for k in range(6)]  # cells j-2 .. j+3 of face j+1/2
    if frame is not None:
        left, right = frame(0.5 * (cells[2] + cells[3]))
        cells = [_apply(left, c) for c in cells]
    if kernels.AVAILABLE and power == 2:
        stencils = np.stack(cells).reshape(6, -1)
        minus, plus = kernels.wenoz_faces(stencils, float(eps), 2)
        minus, plus = minus.reshape(cells[0].shape), plus.reshape(cells[0].shape)
    else:
        minus = _wenoz(cells[0], cells[1], cells[2], cells[3], cells[4], eps, power)
        plus = _wenoz(cells[5], cells[4], cells[3], cells[2], cells[1], eps, power)
    if frame is not None:
        minus, plus = _apply(right, minus), _apply(right, plus)
    return minus, plus


@dataclass
class InterfaceData:
    """Per-face one-sided states, FV flux values and local speeds.

    ``W_minus``/``W_plus`` hold the interpolated variables (conservative,
    primitive or equilibrium, depending on the model) from which the states
    were recovered.
    """

    U_minus: np.ndarray
    U_plus: np.ndarray
    W_minus: np.ndarray | None = None
    W_plus: np.ndarray | None = None
    fv_flux: np.ndarray | None = None
    local_speed: np.ndarray | None = None


def interpolate_interface_states(field_line: np.ndarray, model, use_characteristic: bool,
                                 x_cells=None, x_faces=None, eps: float = EPS,
                                 power: int = POWER) -> InterfaceData:
    """WENO-Z one-sided states at every interior face of padded lines.

    The model decides which variables are interpolated (``to_interp`` /
    ``from_interp``); with ``use_characteristic`` the stencil values are
    projected on the model's eigenvectors at the arithmetic-average state.
    """
    w = model.to_interp(field_line, x_cells)
    frame = model.eigenframe if use_characteristic else None
    w_minus, w_plus = interpolate_lines(w, frame, eps, power)
    return InterfaceData(
        U_minus=model.from_interp(w_minus, x_faces),
        U_plus=model.from_interp(w_plus, x_faces),
        W_minus=w_minus,
        W_plus=w_plus,
    )
