"""Uniform Cartesian grid on the unit square with ghost layers.

Field data is stored as (ny + 2g, nx + 2g, 4) in row-major order with the
y index outermost, so ``data[k, j]`` is the state in cell (j, k).
"""

import numpy as np
from dataclasses import dataclass

# Ghost width per scheme order: correction stencils reach +-(r/2) interfaces
# and each interface interpolation reaches +-((r+1)/2) cells. Safe upper
# bounds, not proven minima.
_HALO = {1: 1, 2: 2, 3: 5, 5: 7, 7: 9, 9: 10}

ORDERS = (1, 2, 3, 5, 7, 9)
BOUNDARY_KINDS = ("periodic", "free")


def halo_width(r):
    """Ghost-layer width required by an order-r scheme."""
    try:
        return _HALO[r]
    except KeyError:
        raise ValueError(f"unsupported order {r}; expected one of {ORDERS}") from None


@dataclass(frozen=True)
class Grid:
    """nx-by-ny cells on [0,1] x [0,1] plus a ghost halo."""

    nx: int
    ny: int
    ghost: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1 or self.ghost < 1:
            raise ValueError("nx, ny and ghost must be positive")
        if self.ghost > min(self.nx, self.ny):
            raise ValueError("ghost layer wider than the interior")

    @property
    def dx(self):
        return 1.0 / self.nx

    @property
    def dy(self):
        return 1.0 / self.ny

    def xs(self):
        """Interior cell-center x coordinates."""
        return (np.arange(self.nx) + 0.5) * self.dx

    def ys(self):
        """Interior cell-center y coordinates."""
        return (np.arange(self.ny) + 0.5) * self.dy


class Field:
    """Conserved states on a grid, ghost layers included."""

    def __init__(self, grid, data, bc):
        if bc not in BOUNDARY_KINDS:
            raise ValueError(f"unknown boundary kind {bc!r}")
        expect = (grid.ny + 2 * grid.ghost, grid.nx + 2 * grid.ghost, 4)
        if data.shape != expect:
            raise ValueError(f"data shape {data.shape} != {expect}")
        self.grid = grid
        self.data = data
        self.bc = bc

    @classmethod
    def zeros(cls, grid, bc):
        g = grid.ghost
        return cls(grid, np.zeros((grid.ny + 2 * g, grid.nx + 2 * g, 4)), bc)

    @classmethod
    def from_interior(cls, grid, interior, bc):
        f = cls.zeros(grid, bc)
        f.interior[...] = interior
        return f

    @property
    def interior(self):
        g = self.grid.ghost
        return self.data[g:-g, g:-g, :]

    def copy(self):
        return Field(self.grid, self.data.copy(), self.bc)

    def apply_bc(self):
        """Fill ghost layers in place; x sweep first, then y over full rows."""
        g, nx, ny = self.grid.ghost, self.grid.nx, self.grid.ny
        d = self.data
        if self.bc == "periodic":
            d[:, :g] = d[:, nx:nx + g]
            d[:, nx + g:] = d[:, g:2 * g]
            d[:g, :] = d[ny:ny + g, :]
            d[ny + g:, :] = d[g:2 * g, :]
        else:  # free: zero-order extrapolation of the nearest interior value
            d[:, :g] = d[:, g:g + 1]
            d[:, nx + g:] = d[:, nx + g - 1:nx + g]
            d[:g, :] = d[g:g + 1, :]
            d[ny + g:, :] = d[ny + g - 1:ny + g, :]
        return self


def apply_bc(field):
    """Functional form of :meth:`Field.apply_bc`."""
    return field.apply_bc()
