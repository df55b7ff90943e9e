import numpy as np
import pytest

from dweuler import Grid, Field, halo_width
from dweuler.grid import ORDERS


def test_halo_table():
    assert [halo_width(r) for r in ORDERS] == [1, 2, 5, 7, 9, 10]
    with pytest.raises(ValueError):
        halo_width(4)


def test_grid_geometry():
    g = Grid(64, 32, 2)
    assert g.dx * g.nx == pytest.approx(1.0, abs=1e-15)
    assert g.dy * g.ny == pytest.approx(1.0, abs=1e-15)
    assert g.xs()[0] == pytest.approx(g.dx / 2)
    assert g.ys()[-1] == pytest.approx(1 - g.dy / 2)
    with pytest.raises(ValueError):
        Grid(4, 4, 5)


def _indexed_field(nx, ny, ghost, bc):
    f = Field.zeros(Grid(nx, ny, ghost), bc)
    vals = np.arange(nx * ny * 4, dtype=float).reshape(ny, nx, 4)
    f.interior[...] = vals
    return f


def test_periodic_wrap():
    f = _indexed_field(4, 4, 2, "periodic")
    f.apply_bc()
    g = f.grid.ghost
    d = f.data
    # ghost cell at j = -1 is a copy of interior j = 3
    assert np.array_equal(d[g:-g, g - 1], f.interior[:, 3])
    assert np.array_equal(d[g:-g, g + 4], f.interior[:, 0])
    assert np.array_equal(d[g - 1, g:-g], f.interior[3, :])
    # corner wraps both directions
    assert np.array_equal(d[g - 1, g - 1], f.interior[3, 3])


def test_free_extrapolation():
    f = _indexed_field(4, 3, 2, "free")
    f.apply_bc()
    g = f.grid.ghost
    d = f.data
    # row values replicate outward: left ghosts copy column 0 twice
    assert np.array_equal(d[g:-g, 0], f.interior[:, 0])
    assert np.array_equal(d[g:-g, 1], f.interior[:, 0])
    assert np.array_equal(d[g:-g, -1], f.interior[:, -1])
    assert np.array_equal(d[0, g:-g], f.interior[0, :])
    # corners take the nearest interior corner
    assert np.array_equal(d[0, 0], f.interior[0, 0])
    assert np.array_equal(d[-1, -1], f.interior[-1, -1])


@pytest.mark.parametrize("bc", ["periodic", "free"])
def test_apply_bc_idempotent(bc):
    f = _indexed_field(5, 4, 2, bc)
    f.apply_bc()
    once = f.data.copy()
    f.apply_bc()
    assert np.array_equal(f.data, once)


@pytest.mark.parametrize("bc", ["periodic", "free"])
def test_constant_field_stays_constant(bc):
    f = Field.zeros(Grid(6, 6, 3), bc)
    f.interior[...] = 2.5
    f.apply_bc()
    assert np.all(f.data == 2.5)


def test_periodic_preserves_interior_sum():
    f = _indexed_field(6, 5, 2, "periodic")
    before = f.interior.sum(axis=(0, 1))
    f.apply_bc()
    assert np.array_equal(f.interior.sum(axis=(0, 1)), before)


def test_field_validation():
    g = Grid(4, 4, 1)
    with pytest.raises(ValueError):
        Field(g, np.zeros((4, 4, 4)), "periodic")
    with pytest.raises(ValueError):
        Field.zeros(g, "reflecting")
