"""Diffusivity and velocity models."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ModelError


def _checked(nu, what="diffusivity"):
    nu = np.asarray(nu, dtype=float)
    if not np.all(np.isfinite(nu)):
        raise ModelError(f"{what} returned non-finite values")
    if np.any(nu < 0):
        raise ModelError(f"negative {what} {nu.min():.6g}")
    return nu


@dataclass(frozen=True)
class ConstantDiffusivity:
    nu: float

    linear = True

    def __post_init__(self):
        _checked(self.nu)

    def at(self, x, t=0.0):
        return np.full(np.shape(x), float(self.nu))


@dataclass(frozen=True)
class SpaceTimeDiffusivity:
    """Diffusivity given by a vectorized callable ``func(x, t)``."""

    func: Callable

    linear = True

    def at(self, x, t=0.0):
        x = np.asarray(x, dtype=float)
        return _checked(np.broadcast_to(self.func(x, t), x.shape))


@dataclass(frozen=True)
class PowerLawDiffusivity:
    """Porous-medium diffusivity ``nu(u) = m * u**(m - 1)``; negative states count as 0."""

    m: float

    linear = False

    def __post_init__(self):
        if not self.m > 1:
            raise ModelError(f"power-law exponent must exceed 1, got m={self.m}")

    def of_state(self, u):
        return self.m * np.maximum(np.asarray(u, dtype=float), 0.0) ** (self.m - 1.0)


@dataclass(frozen=True)
class ConstantVelocity:
    a: float

    def at(self, x, t=0.0):
        return np.full(np.shape(x), float(self.a))


@dataclass(frozen=True)
class SpaceTimeVelocity:
    func: Callable

    def at(self, x, t=0.0):
        x = np.asarray(x, dtype=float)
        f = np.broadcast_to(np.asarray(self.func(x, t), dtype=float), x.shape)
        if not np.all(np.isfinite(f)):
            raise ModelError("velocity returned non-finite values")
        return f


def as_diffusivity(model):
    """Accept a model instance, a number, or a callable ``nu(x, t)``."""
    if isinstance(model, (ConstantDiffusivity, SpaceTimeDiffusivity, PowerLawDiffusivity)):
        return model
    if callable(model):
        return SpaceTimeDiffusivity(model)
    return ConstantDiffusivity(float(model))


def as_velocity(vel):
    if isinstance(vel, (ConstantVelocity, SpaceTimeVelocity)):
        return vel
    if callable(vel):
        return SpaceTimeVelocity(vel)
    return ConstantVelocity(float(vel))
