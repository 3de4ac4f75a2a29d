"""Central (local Lax-Friedrichs / Rusanov) finite-volume fluxes and local speeds."""

from __future__ import annotations

import numpy as np

from .errors import StateError, first_bad_index
from .weno import InterfaceData


def central_flux(F_minus, F_plus, U_minus, U_plus, speed):
    """``(F^- + F^+)/2 - (a/2)(U^+ - U^-)`` with precomputed one-sided fluxes."""
    return 0.5 * (F_minus + F_plus) - 0.5 * speed * (U_plus - U_minus)


def rusanov_flux(U_minus, U_plus, flux_fn, speed):
    U_minus = np.asarray(U_minus, dtype=float)
    U_plus = np.asarray(U_plus, dtype=float)
    return central_flux(flux_fn(U_minus), flux_fn(U_plus), U_minus, U_plus, speed)


def local_speed(U_minus, U_plus, model) -> np.ndarray:
    """max(|lambda_1|, |lambda_d|) over both one-sided states, per face."""
    return np.maximum(model.max_speed(U_minus), model.max_speed(U_plus))


def check_admissible(model, U, what: str = "state") -> None:
    ok = model.admissible(U)
    if not np.all(ok):
        raise StateError(f"inadmissible {what} for {model.name}", first_bad_index(~ok))


def flux_line_1d(states: InterfaceData, model, which: str = "F", K_minus=None,
                 K_plus=None, validate: bool = False) -> InterfaceData:
    """Fill ``fv_flux`` and ``local_speed`` of ``states`` in place.

    ``which="F"`` uses the physical flux of the one-sided states; ``which="K"``
    uses the supplied global-flux values ``K_minus``/``K_plus``.
    """
    Um, Up = states.U_minus, states.U_plus
    if validate:
        check_admissible(model, Um, "left interface state")
        check_admissible(model, Up, "right interface state")
    if which == "F":
        K_minus, K_plus = model.flux(Um), model.flux(Up)
    elif which != "K":
        raise ValueError(f"which must be 'F' or 'K', got {which!r}")
    a = local_speed(Um, Up, model)
    states.local_speed = a
    states.fv_flux = central_flux(K_minus, K_plus, Um, Up, a)
    return states
