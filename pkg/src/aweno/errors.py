"""Exception types raised by the solver."""

from __future__ import annotations

import numpy as np


class ConfigurationError(ValueError):
    """Inconsistent grid, boundary or run configuration."""


class StateError(ArithmeticError):
    """An inadmissible state (e.g. negative density or pressure) was met."""

    def __init__(self, message: str, index: tuple[int, ...] | None = None):
        if index is not None:
            message = f"{message} at index {index}"
        super().__init__(message)
        self.index = index


class EigenError(StateError):
    """The characteristic decomposition failed (non-hyperbolic average state)."""


class ReconstructionError(StateError):
    """Equilibrium variables could not be mapped back to an admissible state."""


class IntegrationError(ArithmeticError):
    """Non-finite values appeared during time integration."""

    def __init__(self, message: str, time: float, index: tuple[int, ...] | None = None):
        super().__init__(f"{message} at t={time:.17g}, index {index}")
        self.time = time
        self.index = index


def first_bad_index(mask) -> tuple[int, ...]:
    """Multi-index of the first True entry of a boolean array."""
    flat = int(np.argmax(mask))
    return tuple(int(i) for i in np.unravel_index(flat, mask.shape))
