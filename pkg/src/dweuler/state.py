"""Gas model and pointwise state algebra for the 2-D Euler equations.

States are numpy arrays with a trailing axis of length 4. Conserved order is
(rho, mx, my, E); primitive order is (rho, u, v, p). All functions broadcast
over leading axes, so they work on single states and on whole fields alike.
"""

import numpy as np
from dataclasses import dataclass

# Admissibility floor: anything at or below this density/pressure is treated
# as a blown-up state, while near-vacuum round-off still passes.
RHO_FLOOR = 1e-12
P_FLOOR = 1e-12

RHO, MX, MY, ENE = 0, 1, 2, 3


class InvalidStateError(ValueError):
    """Non-positive density or pressure (scheme blow-up or bad input).

    ``where`` holds the offending index into the leading axes, when known.
    """

    def __init__(self, msg, where=None):
        super().__init__(msg + (f" at cell {where}" if where is not None else ""))
        self.where = where


@dataclass(frozen=True)
class GasModel:
    """Polytropic ideal gas, p = (gamma-1)*rho*e."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")

    @property
    def cv(self):
        return 1.0 / (self.gamma - 1.0)


def cons(rho, mx, my, E):
    """Stack conserved components into a (..., 4) array."""
    return np.stack(np.broadcast_arrays(
        np.asarray(rho, float), np.asarray(mx, float),
        np.asarray(my, float), np.asarray(E, float)), axis=-1)


def prim(rho, u, v, p):
    """Stack primitive components into a (..., 4) array."""
    return np.stack(np.broadcast_arrays(
        np.asarray(rho, float), np.asarray(u, float),
        np.asarray(v, float), np.asarray(p, float)), axis=-1)


def _check_positive(arr, floor, what):
    bad = arr <= floor
    if bad.any():
        where = np.unravel_index(int(np.argmin(arr)), arr.shape)
        if arr.ndim == 0:
            where = None
        raise InvalidStateError(f"non-positive {what} ({float(arr.min()):.6g})", where)


def cons_to_prim(U, gas, check=True):
    """(rho, mx, my, E) -> (rho, u, v, p)."""
    U = np.asarray(U, float)
    rho = U[..., RHO]
    if check:
        _check_positive(rho, RHO_FLOOR, "density")
    u = U[..., MX] / rho
    v = U[..., MY] / rho
    p = (gas.gamma - 1.0) * (U[..., ENE] - 0.5 * (U[..., MX] * u + U[..., MY] * v))
    if check:
        _check_positive(p, P_FLOOR, "pressure")
    return np.stack([rho, u, v, p], axis=-1)


def prim_to_cons(W, gas, check=True):
    """(rho, u, v, p) -> (rho, mx, my, E); exact inverse of cons_to_prim."""
    W = np.asarray(W, float)
    rho, u, v, p = W[..., 0], W[..., 1], W[..., 2], W[..., 3]
    if check:
        _check_positive(rho, RHO_FLOOR, "density")
        _check_positive(p, P_FLOOR, "pressure")
    mx = rho * u
    my = rho * v
    E = p / (gas.gamma - 1.0) + 0.5 * (mx * u + my * v)
    return np.stack([rho, mx, my, E], axis=-1)


def pressure(U, gas, check=True):
    """Pressure of a conserved state."""
    return cons_to_prim(U, gas, check=check)[..., 3]


def phys_flux_x(U, gas):
    """x-flux (rho*u, rho*u^2+p, rho*u*v, u*(E+p)) of a conserved state."""
    W = cons_to_prim(U, gas)
    u, p = W[..., 1], W[..., 3]
    F = np.empty_like(np.asarray(U, float))
    F[..., RHO] = U[..., MX]
    F[..., MX] = U[..., MX] * u + p
    F[..., MY] = U[..., MY] * u
    # written as u*E + u*p so jump-form numerical fluxes reduce to it bitwise
    F[..., ENE] = u * U[..., ENE] + u * p
    return F


def phys_flux_y(U, gas):
    """y-flux (rho*v, rho*u*v, rho*v^2+p, v*(E+p)) of a conserved state."""
    W = cons_to_prim(U, gas)
    v, p = W[..., 2], W[..., 3]
    G = np.empty_like(np.asarray(U, float))
    G[..., RHO] = U[..., MY]
    G[..., MX] = U[..., MX] * v
    G[..., MY] = U[..., MY] * v + p
    G[..., ENE] = v * U[..., ENE] + v * p
    return G


def swap_xy(U):
    """Exchange the roles of x and y momenta (rotational symmetry helper)."""
    return np.asarray(U)[..., [RHO, MY, MX, ENE]]


def entropy_density(U, gas):
    """Total entropy density S = cv * rho * ln(p / rho^gamma)."""
    W = cons_to_prim(U, gas)
    rho, p = W[..., 0], W[..., 3]
    return gas.cv * rho * np.log(p / rho**gas.gamma)


def specific_entropy(U, gas):
    """S / rho = cv * ln(p / rho^gamma)."""
    W = cons_to_prim(U, gas)
    rho, p = W[..., 0], W[..., 3]
    return gas.cv * np.log(p / rho**gas.gamma)


def sound_speed(U, gas):
    W = cons_to_prim(U, gas)
    return np.sqrt(gas.gamma * W[..., 3] / W[..., 0])


def max_wave_speeds(U, gas):
    """Directional bounds (|u|+c, |v|+c) on the local wave speeds."""
    W = cons_to_prim(U, gas)
    c = np.sqrt(gas.gamma * W[..., 3] / W[..., 0])
    return np.abs(W[..., 1]) + c, np.abs(W[..., 2]) + c


def energy_from_entropy(rho, mx, my, S, gas):
    """Total energy of a (rho, m, S) state, inverting the entropy relation.

    p = rho^gamma * exp(S / (cv*rho)), e = p / ((gamma-1)*rho).
    """
    rho = np.asarray(rho, float)
    p = rho**gas.gamma * np.exp(S / (gas.cv * rho))
    return p / (gas.gamma - 1.0) + 0.5 * (mx * mx + my * my) / rho


def is_admissible(U, gas):
    """True when density and pressure clear the admissibility floors."""
    U = np.asarray(U, float)
    rho = U[..., RHO]
    if not np.all(np.isfinite(U)):
        return False
    if (rho <= RHO_FLOOR).any():
        return False
    p = (gas.gamma - 1.0) * (U[..., ENE]
                             - 0.5 * (U[..., MX]**2 + U[..., MY]**2) / rho)
    return bool((p > P_FLOOR).all())


def worst_cell(U, gas):
    """Index of the cell with the smallest pressure (or density if negative)."""
    U = np.asarray(U, float)
    rho = np.where(np.isfinite(U[..., RHO]), U[..., RHO], -np.inf)
    if (rho <= RHO_FLOOR).any():
        return np.unravel_index(int(np.argmin(rho)), rho.shape)
    with np.errstate(invalid="ignore"):
        p = (gas.gamma - 1.0) * (U[..., ENE]
                                 - 0.5 * (U[..., MX]**2 + U[..., MY]**2) / rho)
    p = np.where(np.isfinite(p), p, -np.inf)
    return np.unravel_index(int(np.argmin(p)), p.shape)
