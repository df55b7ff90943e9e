"""SSP-RK3 time integration with CFL-based adaptive steps."""

import numpy as np

from . import fluxes
from .state import cons_to_prim, is_admissible, worst_cell

# CFL numbers per flux family; the viscous family needs the small one
DEFAULT_CFL = {fluxes.LCDCU: 0.45, fluxes.LDCU: 0.45, fluxes.VFV: 0.1}


class BlowUpError(RuntimeError):
    """A Runge-Kutta stage produced an inadmissible state."""

    def __init__(self, stage, cell, t):
        super().__init__(f"inadmissible state in stage {stage} at cell {cell}"
                         + (f", t={t:.6g}" if t is not None else ""))
        self.stage = stage
        self.cell = cell
        self.t = t


def compute_dt(field, gas, cfl, t_remaining=None):
    """cfl * min over cells of min(dx/(|u|+c), dy/(|v|+c)), clipped."""
    W = cons_to_prim(field.interior, gas)
    c = np.sqrt(gas.gamma * W[..., 3] / W[..., 0])
    ax = np.abs(W[..., 1]) + c
    ay = np.abs(W[..., 2]) + c
    dt = cfl * min(field.grid.dx / ax.max(), field.grid.dy / ay.max())
    if t_remaining is not None:
        dt = min(dt, t_remaining)
    return dt


def ssprk3_step(field, rhs, dt, gas, t=None):
    """One three-stage third-order SSP Runge-Kutta step (in place).

    Ghosts are refilled before every stage evaluation; each stage is
    validated and a blow-up reports the stage index and the worst cell.
    """
    u0 = field.interior.copy()

    field.apply_bc()
    field.interior[...] = u0 + dt * rhs(field)
    _check_stage(field, gas, 1, t)

    field.apply_bc()
    field.interior[...] = 0.75 * u0 + 0.25 * (field.interior + dt * rhs(field))
    _check_stage(field, gas, 2, t)

    field.apply_bc()
    field.interior[...] = (u0 + 2.0 * (field.interior + dt * rhs(field))) / 3.0
    _check_stage(field, gas, 3, t)
    return field


def _check_stage(field, gas, stage, t):
    if not is_admissible(field.interior, gas):
        raise BlowUpError(stage, worst_cell(field.interior, gas), t)


def advance(field, rhs, gas, cfl, t0, t1, on_step=None):
    """Integrate from t0 to t1; never oversteps t1 (final step clipped).

    ``on_step(field, t, dt)`` runs after every accepted step with the field
    already at time t.
    """
    t = t0
    while t < t1 - 1e-14 * max(1.0, abs(t1)):
        dt = compute_dt(field, gas, cfl, t_remaining=t1 - t)
        ssprk3_step(field, rhs, dt, gas, t=t)
        t += dt
        if on_step is not None:
            on_step(field, t, dt)
    return t
