"""Semi-discrete right-hand sides.

``fv_rhs`` is the plain finite-volume flux divergence for orders 1 and 2
(with the first-order VFV energy equation handled by its dedicated
non-conservative form). ``fd_rhs`` assembles the finite-difference flux of
orders 3/5/7/9: WENO interface values feed the family's FV flux at every
interface within the correction reach, high-order central corrections are
applied interface-wise, and the corrected fluxes are differenced.

y-direction sweeps reuse the x-direction kernels through the exact
rotational symmetry of the system (transpose the grid, exchange momenta).
"""

import numpy as np

from . import fluxes, recon
from .state import ENE, swap_xy
from .grid import Field

# correction magnitudes: expansion of the inverse midpoint-difference operator
MU2 = 1 / 24
MU4 = 7 / 5760
MU6 = 31 / 967680
MU8 = 127 / 154828800

# central stencils for the flux derivatives entering the corrections,
# per order; offsets run over interfaces j+1/2-s .. j+1/2+s
_D2 = {
    3: np.array([1.0, -2.0, 1.0]),
    5: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
    7: np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0,
    9: np.array([-9.0, 128.0, -1008.0, 8064.0, -14350.0,
                 8064.0, -1008.0, 128.0, -9.0]) / 5040.0,
}
_D4 = {
    5: np.array([1.0, -4.0, 6.0, -4.0, 1.0]),
    7: np.array([-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0]) / 6.0,
    9: np.array([7.0, -96.0, 676.0, -1952.0, 2730.0,
                 -1952.0, 676.0, -96.0, 7.0]) / 240.0,
}
_D6 = {
    7: np.array([1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0]),
    9: np.array([-1.0, 12.0, -52.0, 116.0, -150.0, 116.0, -52.0, 12.0, -1.0]) / 4.0,
}
_D8 = {
    9: np.array([1.0, -8.0, 28.0, -56.0, 70.0, -56.0, 28.0, -8.0, 1.0]),
}


def _stencil_apply(line, coeffs, axis):
    """Correlate ``coeffs`` with ``line`` along ``axis`` (valid region)."""
    L = np.moveaxis(np.asarray(line, float), axis, 0)
    n = L.shape[0]
    width = len(coeffs)
    out = coeffs[0] * L[:n - width + 1]
    for i in range(1, width):
        out = out + coeffs[i] * L[i:n - width + 1 + i]
    return np.moveaxis(out, 0, axis)


def correction_high_order(line, r, h, axis=0):
    """High-order corrected interface fluxes from a line of FV fluxes.

    ``line`` must extend ``reach`` interfaces beyond the target range on
    both sides; the result is shorter by 2*reach along ``axis``.
    """
    reach = recon.CORRECTION_REACH.get(r)
    if reach is None:
        raise ValueError(f"unsupported order {r}")
    L = np.asarray(line, float)
    if L.shape[axis] < 2 * reach + 1:
        raise ValueError("flux line shorter than the correction stencil")
    core = np.moveaxis(np.moveaxis(L, axis, 0)[reach:L.shape[axis] - reach], 0, axis)
    out = core - MU2 * h**2 * _stencil_apply(line, _D2[r] / h**2, axis)
    if r >= 5:
        out = out + MU4 * h**4 * _stencil_apply(line, _D4[r] / h**4, axis)
    if r >= 7:
        out = out - MU6 * h**6 * _stencil_apply(line, _D6[r] / h**6, axis)
    if r >= 9:
        out = out + MU8 * h**8 * _stencil_apply(line, _D8[r] / h**8, axis)
    return out


def _transposed_field(field):
    """Grid-transposed, momentum-swapped view of a field (x <-> y)."""
    from .grid import Grid
    g = field.grid
    tg = Grid(nx=g.ny, ny=g.nx, ghost=g.ghost)
    data = np.ascontiguousarray(swap_xy(np.swapaxes(field.data, 0, 1)))
    return Field(tg, data, field.bc)


def fv_rhs(field, family, r, gas, theta=recon.MINMOD_THETA):
    """Finite-volume tendencies of order r in {1, 2} on the interior."""
    if r not in (1, 2):
        raise ValueError(f"fv_rhs handles orders 1 and 2, got {r}")
    grid = field.grid
    g, nx, ny = grid.ghost, grid.nx, grid.ny
    if r == 1:
        d = field.data[g:g + ny]
        Um, Up = d[:, g - 1:g + nx], d[:, g:g + nx + 1]
        Fx = fluxes.numerical_flux(Um, Up, family, "x", gas)
        d = field.data[:, g:g + nx]
        Um, Up = d[g - 1:g + ny, :], d[g:g + ny + 1, :]
        Gy = fluxes.numerical_flux(Um, Up, family, "y", gas)
    else:
        if family == fluxes.LCDCU:
            Ux, Uy = _characteristic_slopes(field, gas, theta)
        else:
            Ux, Uy = recon.minmod_slopes(field, theta)
        Um, Up = recon.linear_interface_values_x(field, Ux)
        Fx = fluxes.numerical_flux(Um, Up, family, "x", gas)
        Um, Up = recon.linear_interface_values_y(field, Uy)
        Gy = fluxes.numerical_flux(Um, Up, family, "y", gas)
    rhs = -(Fx[:, 1:] - Fx[:, :-1]) / grid.dx - (Gy[1:, :] - Gy[:-1, :]) / grid.dy
    if family == fluxes.VFV and r == 1:
        rhs[..., ENE] = fluxes.vfv_first_order_energy_rhs(field, gas)
    return rhs


def _characteristic_slopes(field, gas, theta):
    """Minmod slopes limited in each cell's own characteristic variables."""
    d = field.data
    dx, dy = field.grid.dx, field.grid.dy
    Ux = np.zeros_like(d)
    Uy = np.zeros_like(d)
    core = d[1:-1, 1:-1]
    R, L = recon.cell_basis_fields(core, gas)

    def limited(minus, plus, h):
        wm = np.einsum("...ij,...j->...i", L, minus)
        wp = np.einsum("...ij,...j->...i", L, plus)
        s = recon.minmod3(theta * wp / h, (wp + wm) / (2 * h), theta * wm / h)
        return np.einsum("...ij,...j->...i", R, s)

    Ux[1:-1, 1:-1] = limited(core - d[1:-1, :-2], d[1:-1, 2:] - core, dx)
    # y-direction: swap momenta so the x-basis diagonalizes the y-Jacobian
    Rs, Ls = recon.cell_basis_fields(swap_xy(core), gas)
    wm = np.einsum("...ij,...j->...i", Ls, swap_xy(core - d[:-2, 1:-1]))
    wp = np.einsum("...ij,...j->...i", Ls, swap_xy(d[2:, 1:-1] - core))
    s = recon.minmod3(theta * wp / dy, (wp + wm) / (2 * dy), theta * wm / dy)
    Uy[1:-1, 1:-1] = swap_xy(np.einsum("...ij,...j->...i", Rs, s))
    return Ux, Uy


def fd_rhs(field, family, r, gas):
    """Finite-difference tendencies of order r in {3, 5, 7, 9}."""
    if r not in recon.CORRECTION_REACH:
        raise ValueError(f"fd_rhs handles orders 3/5/7/9, got {r}")
    grid = field.grid
    char = fluxes.CHARACTERISTIC[family]

    Um, Up = recon.weno_interface_values_x(field, r, gas, characteristic=char)
    Fraw = fluxes.numerical_flux(Um, Up, family, "x", gas)
    Fx = correction_high_order(Fraw, r, grid.dx, axis=1)

    ft = _transposed_field(field)
    Um, Up = recon.weno_interface_values_x(ft, r, gas, characteristic=char)
    Graw = fluxes.numerical_flux(Um, Up, family, "x", gas)
    Gy = swap_xy(np.swapaxes(correction_high_order(Graw, r, grid.dy, axis=1), 0, 1))

    return -(Fx[:, 1:] - Fx[:, :-1]) / grid.dx - (Gy[1:, :] - Gy[:-1, :]) / grid.dy


def make_rhs(family, r, gas, theta=recon.MINMOD_THETA):
    """Tendency operator for one scheme; expects ghost-filled fields."""
    if family not in fluxes.FAMILIES:
        raise ValueError(f"unknown flux family {family!r}")
    if r in (1, 2):
        return lambda f: fv_rhs(f, family, r, gas, theta)
    return lambda f: fd_rhs(f, family, r, gas)
