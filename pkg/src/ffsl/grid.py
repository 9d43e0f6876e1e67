"""Uniform periodic grids.

Cell ``i`` of a 1D grid covers ``[x0 + i*dx, x0 + (i+1)*dx)`` and its center
sits at ``x0 + (i + 1/2)*dx``.  Interface ``i`` is the left edge of cell ``i``,
so interface ``N`` coincides with interface ``0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridError


@dataclass(frozen=True)
class Grid1D:
    """Periodic partition of ``[x0, x0 + L)`` into ``N`` equal cells."""

    L: float
    N: int
    x0: float = 0.0
    dx: float = field(init=False)

    def __post_init__(self):
        if not np.isfinite(self.L) or self.L <= 0:
            raise GridError(f"domain length must be positive, got L={self.L}")
        if int(self.N) != self.N or self.N < 1:
            raise GridError(f"cell count must be a positive integer, got N={self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "dx", self.L / self.N)

    @property
    def centers(self) -> np.ndarray:
        return self.x0 + (np.arange(self.N) + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        """Left edges of the cells, ``x0 + i*dx`` for ``i = 0..N-1``."""
        return self.x0 + np.arange(self.N) * self.dx

    @property
    def edges(self) -> np.ndarray:
        """All ``N + 1`` cell edges including the right end of the domain."""
        return self.x0 + np.arange(self.N + 1) * self.dx

    def to_units(self, x):
        """Position measured in cells from ``x0`` (interface ``i`` maps to ``i``)."""
        return (np.asarray(x, dtype=float) - self.x0) / self.dx

    def wrap(self, x):
        return wrap_point(self, x)


def make_grid_1d(L: float, N: int, x0: float = 0.0) -> Grid1D:
    return Grid1D(float(L), N, float(x0))


def wrap_point(grid: Grid1D, x):
    """Map ``x`` into ``[x0, x0 + L)``.

    >>> wrap_point(make_grid_1d(10, 4), -0.2)
    9.8
    """
    y = np.mod(np.asarray(x, dtype=float) - grid.x0, grid.L)
    # np.mod can return L itself for tiny negative inputs
    y = np.where(y >= grid.L, 0.0, y) + grid.x0
    return float(y) if y.ndim == 0 else y


@dataclass(frozen=True)
class Grid2D:
    """Periodic tensor grid with square cells.

    Arrays on this grid have shape ``(Nx, Ny)``; the first index runs along x.
    """

    Lx: float
    Ly: float
    Nx: int
    Ny: int
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        # validates each direction
        gx, gy = self.xgrid, self.ygrid
        if abs(gx.dx - gy.dx) > np.finfo(float).eps * max(gx.dx, gy.dx):
            raise GridError(
                f"cells must be square, got dx={gx.dx} and dy={gy.dx}"
            )

    @property
    def xgrid(self) -> Grid1D:
        return Grid1D(float(self.Lx), self.Nx, float(self.x0))

    @property
    def ygrid(self) -> Grid1D:
        return Grid1D(float(self.Ly), self.Ny, float(self.y0))

    @property
    def dx(self) -> float:
        return self.Lx / self.Nx

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.Nx), int(self.Ny))

    def mesh(self):
        """Cell-center coordinates as two ``(Nx, Ny)`` arrays."""
        return np.meshgrid(self.xgrid.centers, self.ygrid.centers, indexing="ij")

    def transpose(self) -> "Grid2D":
        return Grid2D(self.Ly, self.Lx, self.Ny, self.Nx, self.y0, self.x0)


def make_grid_2d(Lx, Ly, Nx, Ny, x0=0.0, y0=0.0) -> Grid2D:
    return Grid2D(float(Lx), float(Ly), Nx, Ny, float(x0), float(y0))
