import numpy as np
import pytest

from dweuler import Grid, Field, correction_high_order, fv_rhs, fd_rhs
from dweuler.fluxes import FAMILIES, LCDCU, LDCU, VFV
from dweuler.rhs import MU2, MU4, MU6, MU8, _transposed_field
from dweuler.recon import CORRECTION_REACH
from dweuler.state import prim, prim_to_cons, cons_to_prim, swap_xy
from dweuler.grid import halo_width

from conftest import random_admissible


def test_mu_values_exact():
    assert MU2 == 1 / 24 and MU4 == 7 / 5760
    assert MU6 == 31 / 967680 and MU8 == 127 / 154828800


@pytest.mark.parametrize("r", [3, 5, 7, 9])
def test_corrections_annihilate_constants_and_linears(r):
    reach = CORRECTION_REACH[r]
    n = 11 + 2 * reach
    const = np.full(n, 2.7)
    out = correction_high_order(const, r, h=0.01)
    assert np.abs(out - 2.7).max() == 0.0
    line = 0.3 + 1.7 * np.arange(n)
    out = correction_high_order(line, r, h=0.01)
    assert np.abs(out - line[reach:-reach]).max() < 1e-12


def test_correction_r3_quadratic_hand_value():
    # interface values of q(s) = s^2 at (-1/2, 1/2, 3/2) with h = 1
    line = np.array([0.25, 0.25, 2.25])
    out = correction_high_order(line, 3, h=1.0)
    # F_xx = 2 exactly, corrected flux = 1/4 - 2/24
    assert out[0] == pytest.approx(0.25 - 2.0 / 24.0, abs=1e-15)


def test_correction_r3_is_mu2_term_only():
    rng = np.random.default_rng(7)
    line = rng.normal(size=9)
    out = correction_high_order(line, 3, h=0.1)
    hand = line[1:-1] - MU2 * (line[:-2] - 2 * line[1:-1] + line[2:])
    assert np.allclose(out, hand, rtol=1e-14, atol=1e-16)


def test_correction_needs_enough_stencil():
    with pytest.raises(ValueError):
        correction_high_order(np.ones(4), 5, h=1.0)
    with pytest.raises(ValueError):
        correction_high_order(np.ones(8), 4, h=1.0)


def _uniform_state_field(n, r, gas, bc="periodic"):
    f = Field.zeros(Grid(n, n, halo_width(r)), bc)
    f.interior[...] = prim_to_cons(prim(1.4, 0.3, -0.7, 2.0), gas)
    f.apply_bc()
    return f


def _random_smooth_field(n, r, gas, rng):
    g = Grid(n, n, halo_width(r))
    f = Field.zeros(g, "periodic")
    x, y = np.meshgrid(g.xs(), g.ys())
    W = np.stack([
        1.0 + 0.3 * np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y),
        0.4 + 0.2 * np.cos(2 * np.pi * (x + y)),
        -0.3 + 0.1 * np.sin(2 * np.pi * y),
        1.5 + 0.4 * np.cos(2 * np.pi * x),
    ], axis=-1)
    f.interior[...] = prim_to_cons(W, gas)
    f.apply_bc()
    return f


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("r", [1, 2])
def test_fv_rhs_uniform_and_conservative(family, r, gas, rng):
    f = _uniform_state_field(24, r, gas)
    assert np.abs(fv_rhs(f, family, r, gas)).max() == 0.0
    f = _random_smooth_field(24, r, gas, rng)
    rhs = fv_rhs(f, family, r, gas)
    total = np.abs(rhs.sum(axis=(0, 1))) * f.grid.dx * f.grid.dy
    assert total.max() < 1e-13


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("r", [3, 5, 7, 9])
def test_fd_rhs_uniform_and_conservative(family, r, gas, rng):
    f = _uniform_state_field(24, r, gas)
    assert np.abs(fd_rhs(f, family, r, gas)).max() < 1e-13
    f = _random_smooth_field(24, r, gas, rng)
    rhs = fd_rhs(f, family, r, gas)
    total = np.abs(rhs.sum(axis=(0, 1))) * f.grid.dx * f.grid.dy
    assert total.max() < 1e-12


# ----------------------------------------------------------------------------
# 1-D reference comparison: y-uniform data must reproduce the 1-D scheme
# ----------------------------------------------------------------------------

def _cu_flux_1d(um, up, gas):
    """Scalar central-upwind x-flux, written independently."""
    def split(U):
        rho, mx, my, E = U
        u = mx / rho
        p = (gas.gamma - 1) * (E - 0.5 * (mx * mx + my * my) / rho)
        c = np.sqrt(gas.gamma * p / rho)
        F = np.array([mx, mx * u + p, my * u, u * E + u * p])
        return u, c, F
    ul, cl, Fl = split(um)
    ur, cr, Fr = split(up)
    ap = max(ul + cl, ur + cr, 0.0)
    am = min(ul - cl, ur - cr, 0.0)
    if ap - am < 1e-10:
        return 0.5 * (Fl + Fr)
    return (ap * Fl - am * Fr) / (ap - am) + ap * am / (ap - am) * (up - um)


def _vfv_flux_1d(um, up, gas):
    """Scalar viscous-flux transcription of the x-direction formulas."""
    def split(U):
        rho, mx, my, E = U
        u, v = mx / rho, my / rho
        p = (gas.gamma - 1) * (E - 0.5 * (mx * mx + my * my) / rho)
        return u, v, p
    ul, vl, pl = split(um)
    ur, vr, pr = split(up)
    s = ul + ur
    F = 0.25 * s * (um + up) - 0.25 * (abs(s) + 4.0) * (up - um)
    F[1] += 0.5 * (pl + pr) - (ur - ul)
    F[2] += -(vr - vl)
    F[3] += 0.5 * (ul * pl + ur * pr) \
        - 0.5 * (ur * ur + vr * vr - ul * ul - vl * vl)
    return F


@pytest.mark.parametrize("family", ["LDCU", "VFV"])
def test_fv_rhs_reduces_to_1d(family, gas, rng):
    n = 16
    g = Grid(n, n, halo_width(1))
    f = Field.zeros(g, "periodic")
    states = random_admissible(rng, n)  # one state per column
    f.interior[...] = states[None, :, :]
    f.apply_bc()
    rhs2d = fv_rhs(f, family, 1, gas)
    # every row matches and y-fluxes cancel
    assert np.abs(rhs2d - rhs2d[0]).max() < 1e-12

    flux1d = _cu_flux_1d if family == "LDCU" else _vfv_flux_1d
    ext = np.vstack([states[-1:], states, states[:1]])  # periodic pad
    ref = np.empty_like(states)
    for j in range(n):
        Fp = flux1d(ext[j + 1], ext[j + 2], gas)
        Fm = flux1d(ext[j], ext[j + 1], gas)
        ref[j] = -(Fp - Fm) / g.dx
    if family == "VFV":
        # energy row of the first-order scheme: upwind divergence plus
        # central pressure work (the kinetic second difference is the
        # flux-form jump term, identical on 1-D data)
        W = cons_to_prim(ext, gas)
        u, v, p, E = W[:, 1], W[:, 2], W[:, 3], ext[:, 3]
        k2 = u * u + v * v
        for j in range(n):
            s1 = u[j] + u[j + 1]
            s2 = u[j + 1] + u[j + 2]
            fp = 0.25 * s2 * (E[j + 1] + E[j + 2]) \
                - 0.25 * (abs(s2) + 4) * (E[j + 2] - E[j + 1])
            fm = 0.25 * s1 * (E[j] + E[j + 1]) \
                - 0.25 * (abs(s1) + 4) * (E[j + 1] - E[j])
            ref[j, 3] = (-(fp - fm) / g.dx
                         - u[j + 1] * (p[j + 2] - p[j]) / (2 * g.dx)
                         - p[j + 1] * (u[j + 2] - u[j]) / (2 * g.dx)
                         + (k2[j + 2] - 2 * k2[j + 1] + k2[j]) / (2 * g.dx))
    assert np.allclose(rhs2d[0], ref, rtol=1e-11, atol=1e-11)


def test_fv_rhs_second_order_reduces_to_1d(gas, rng):
    # LDCU r=2 on y-uniform data against an independent 1-D loop reference
    n = 16
    g = Grid(n, n, halo_width(2))
    f = Field.zeros(g, "periodic")
    W = prim(1.0 + 0.4 * rng.random(n), 0.3 * rng.standard_normal(n),
             0.1 * rng.standard_normal(n), 1.0 + 0.5 * rng.random(n))
    states = prim_to_cons(W, gas)
    f.interior[...] = states[None, :, :]
    f.apply_bc()
    rhs2d = fv_rhs(f, "LDCU", 2, gas, theta=1.3)
    assert np.abs(rhs2d - rhs2d[0]).max() < 1e-12

    def mm(a, b, c):
        if a > 0 and b > 0 and c > 0:
            return min(a, b, c)
        if a < 0 and b < 0 and c < 0:
            return max(a, b, c)
        return 0.0

    ext = np.vstack([states[-2:], states, states[:2]])  # 2-cell periodic pad
    h = g.dx
    slopes = np.zeros_like(ext)
    for j in range(1, n + 3):
        for c in range(4):
            slopes[j, c] = mm(1.3 * (ext[j + 1, c] - ext[j, c]) / h,
                              (ext[j + 1, c] - ext[j - 1, c]) / (2 * h),
                              1.3 * (ext[j, c] - ext[j - 1, c]) / h)
    ref = np.empty_like(states)
    for j in range(n):
        J = j + 2
        Fp = _cu_flux_1d(ext[J] + 0.5 * h * slopes[J],
                         ext[J + 1] - 0.5 * h * slopes[J + 1], gas)
        Fm = _cu_flux_1d(ext[J - 1] + 0.5 * h * slopes[J - 1],
                         ext[J] - 0.5 * h * slopes[J], gas)
        ref[j] = -(Fp - Fm) / h
    assert np.allclose(rhs2d[0], ref, rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("r", [3, 7])
def test_fd_rhs_xy_symmetry(family, r, gas, rng):
    f = _random_smooth_field(20, r, gas, rng)
    rhs = fd_rhs(f, family, r, gas)
    ft = _transposed_field(f)
    rhs_t = fd_rhs(ft, family, r, gas)
    assert np.allclose(rhs, swap_xy(np.swapaxes(rhs_t, 0, 1)),
                       rtol=1e-12, atol=1e-13)
