"""Numerical flux families at cell interfaces.

Three families are provided:

* ``VFV`` -- an upwind base flux plus unit-coefficient artificial
  viscosities on the velocity jumps and the kinetic-energy jump, with
  pressure and pressure-work averages carrying the pressure terms.
* ``LCDCU`` / ``LDCU`` -- a central-upwind flux built from one-sided local
  wave speeds. The two tags select characteristic-space versus
  componentwise reconstruction upstream; the interface formula is shared.

Every family is consistent: flux(U, U) is the physical flux at U.

The VFV upwind part is implemented in jump form,
    1/4 (a- + a+)(U- + U+) - 1/4 (|a- + a+| + 4)(U+ - U-),
which is the consistent reading of the sum-form viscosity (the literal
sum form would not reduce to the physical flux at equal states).
"""

import numpy as np

from .state import RHO, MX, MY, ENE, cons_to_prim, phys_flux_x, phys_flux_y, swap_xy
from .recon import eigenvalues

LCDCU = "LCDCU"
LDCU = "LDCU"
VFV = "VFV"
FAMILIES = (LCDCU, LDCU, VFV)

# families whose reconstruction/interpolation runs in characteristic space
CHARACTERISTIC = {LCDCU: True, LDCU: False, VFV: True}

# degenerate-fan threshold for the central-upwind speeds
CU_SPEED_FLOOR = 1e-10


def _normal_velocity(U, direction, gas):
    W = cons_to_prim(U, gas)
    return W[..., 1] if direction == "x" else W[..., 2]


def vfv_upwind(Um, Up, direction, gas):
    """Upwind part of the VFV flux with its built-in unit viscosity."""
    am = _normal_velocity(Um, direction, gas)
    ap = _normal_velocity(Up, direction, gas)
    asum = am + ap
    return (0.25 * asum[..., None] * (Um + Up)
            - 0.25 * (np.abs(asum) + 4.0)[..., None] * (Up - Um))


def vfv_flux_x(Um, Up, gas):
    """VFV x-flux: upwind part plus pressure averages and jump viscosities."""
    Wm = cons_to_prim(Um, gas)
    Wp = cons_to_prim(Up, gas)
    um, vm, pm = Wm[..., 1], Wm[..., 2], Wm[..., 3]
    up, vp, pp = Wp[..., 1], Wp[..., 2], Wp[..., 3]
    asum = um + up
    F = (0.25 * asum[..., None] * (Um + Up)
         - 0.25 * (np.abs(asum) + 4.0)[..., None] * (Up - Um))
    F[..., MX] += 0.5 * (pm + pp) - (up - um)
    F[..., MY] += -(vp - vm)
    F[..., ENE] += 0.5 * (um * pm + up * pp) \
        - 0.5 * (up * up + vp * vp - um * um - vm * vm)
    return F


def vfv_flux_y(Um, Up, gas):
    """VFV y-flux; the x-formula under the (u <-> v, mx <-> my) exchange."""
    return swap_xy(vfv_flux_x(swap_xy(Um), swap_xy(Up), gas))


def cu_flux(Um, Up, direction, gas):
    """Central-upwind flux from one-sided local speeds.

    a+ = max(lambda_max(Um), lambda_max(Up), 0) and a- the mirrored min;
    collapses to the average flux when the fan degenerates.
    """
    lm = eigenvalues(Um, direction, gas)
    lp = eigenvalues(Up, direction, gas)
    aplus = np.maximum(np.maximum(lm[..., 3], lp[..., 3]), 0.0)
    aminus = np.minimum(np.minimum(lm[..., 0], lp[..., 0]), 0.0)
    Fm = phys_flux_x(Um, gas) if direction == "x" else phys_flux_y(Um, gas)
    Fp = phys_flux_x(Up, gas) if direction == "x" else phys_flux_y(Up, gas)
    spread = aplus - aminus
    ok = spread >= CU_SPEED_FLOOR
    safe = np.where(ok, spread, 1.0)[..., None]
    ap = aplus[..., None]
    am = aminus[..., None]
    flux = (ap * Fm - am * Fp) / safe + (ap * am / safe) * (Up - Um)
    return np.where(ok[..., None], flux, 0.5 * (Fm + Fp))


def numerical_flux(Um, Up, family, direction, gas):
    """Interface flux of the selected family."""
    if family == VFV:
        return vfv_flux_x(Um, Up, gas) if direction == "x" else vfv_flux_y(Um, Up, gas)
    if family in (LCDCU, LDCU):
        return cu_flux(Um, Up, direction, gas)
    raise ValueError(f"unknown flux family {family!r}")


def vfv_first_order_energy_rhs(field, gas):
    """Energy tendency of the first-order VFV scheme.

    Upwind energy-flux divergence plus non-conservative central-difference
    pressure-work terms and second-difference kinetic viscosities, all built
    from cell-centred velocities and pressures.
    """
    g, nx, ny = field.grid.ghost, field.grid.nx, field.grid.ny
    dx, dy = field.grid.dx, field.grid.dy
    d = field.data[g - 1:g + ny + 1, g - 1:g + nx + 1]  # interior plus 1 ring
    W = cons_to_prim(d, gas)
    u, v, p = W[..., 1], W[..., 2], W[..., 3]
    E = d[..., ENE]
    C = slice(1, -1)

    # upwind energy flux at the x-interfaces of the interior (jump form)
    def upw(anorm, ene):
        asum = anorm[:, :-1] + anorm[:, 1:]
        return (0.25 * asum * (ene[:, :-1] + ene[:, 1:])
                - 0.25 * (np.abs(asum) + 4.0) * (ene[:, 1:] - ene[:, :-1]))

    Fx = upw(u[C, :], E[C, :])
    Gy = upw(v[:, C].T, E[:, C].T).T
    rhs = -(Fx[:, 1:] - Fx[:, :-1]) / dx - (Gy[1:, :] - Gy[:-1, :]) / dy

    rhs -= u[C, C] * (p[C, 2:] - p[C, :-2]) / (2 * dx)
    rhs -= p[C, C] * (u[C, 2:] - u[C, :-2]) / (2 * dx)
    rhs -= v[C, C] * (p[2:, C] - p[:-2, C]) / (2 * dy)
    rhs -= p[C, C] * (v[2:, C] - v[:-2, C]) / (2 * dy)

    k2 = u * u + v * v
    rhs += (k2[C, 2:] - 2 * k2[C, C] + k2[C, :-2]) / (2 * dx)
    rhs += (k2[2:, C] - 2 * k2[C, C] + k2[:-2, C]) / (2 * dy)
    return rhs
