"""2-D compressible Euler solver with FV/A-WENO schemes and
scheme-averaging diagnostics."""

from .state import GasModel, cons, prim, cons_to_prim, prim_to_cons, \
    phys_flux_x, phys_flux_y, entropy_density, max_wave_speeds, InvalidStateError
from .grid import Grid, Field, halo_width, apply_bc, ORDERS
from .recon import minmod, minmod_slopes, weno_interpolate, char_basis
from .fluxes import LCDCU, LDCU, VFV, FAMILIES, cu_flux, vfv_flux_x, vfv_flux_y, \
    vfv_upwind, numerical_flux
from .rhs import fv_rhs, fd_rhs, correction_high_order, make_rhs
from .timestep import compute_dt, ssprk3_step, advance, BlowUpError, DEFAULT_CFL
from .problems import BENCHMARKS, init_riemann, init_kh, kh_interface, \
    load_kh_coeffs, make_grid, KH_COEFFS

__version__ = "0.1.0"
