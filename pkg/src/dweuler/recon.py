"""Interface-value reconstruction.

Two families live here:

* piecewise constant / piecewise linear with a generalized minmod limiter
  (the low-order finite-volume path), and
* WENO-Z interpolation of point values of orders 3/5/7/9, optionally in
  local characteristic variables (the finite-difference path).

The WENO variant interpolates *point values* to interface midpoints (it is
not a reconstruction of cell averages). Substencil coefficients, optimal
weights and smoothness indicators were derived symbolically for the
interpolation problem; the smoothness of substencil k is the Sobolev-type
integral of its squared derivatives over the central cell, which for
3-point substencils reduces to the familiar 13/12-form.
"""

import numpy as np
from numba import njit

from .state import RHO, MX, MY, ENE, cons_to_prim

# WENO-Z regularization; the indicator ratio enters squared
WENO_EPS = 1e-12

# Third-order sweeps regularize with an extra mesh- and data-scaled term,
# eta * (scale * h^2)^2. Two-point indicators otherwise lose the design
# order near smooth extrema (one one-sided difference can vanish while the
# global indicator does not, capsizing the weights); the added term is far
# below any O(1) jump indicator, so shock selection is untouched.
ETA3 = 1000.0

# interfaces reached by the high-order flux corrections, per order
CORRECTION_REACH = {3: 1, 5: 2, 7: 3, 9: 4}

MINMOD_THETA = 1.3


# ----------------------------------------------------------------------------
# minmod limiter
# ----------------------------------------------------------------------------

def minmod(*zs):
    """min of all arguments if all positive, max if all negative, else 0."""
    if len(zs) < 2:
        raise ValueError("minmod needs at least two arguments")
    zs = [float(z) for z in zs]
    if all(z > 0 for z in zs):
        return min(zs)
    if all(z < 0 for z in zs):
        return max(zs)
    return 0.0


def minmod3(a, b, c):
    """Elementwise three-argument minmod."""
    pos = np.minimum(np.minimum(a, b), c)
    neg = np.maximum(np.maximum(a, b), c)
    out = np.where((a > 0) & (b > 0) & (c > 0), pos, 0.0)
    return np.where((a < 0) & (b < 0) & (c < 0), neg, out)


def minmod_slopes(field, theta=MINMOD_THETA):
    """Limited slopes (Ux, Uy) on the padded array, zero where no stencil.

    Slopes are valid wherever both neighbours exist, which covers the
    interior plus ghost - 1 rings; first-order callers skip this entirely.
    """
    d = field.data
    dx, dy = field.grid.dx, field.grid.dy
    Ux = np.zeros_like(d)
    Uy = np.zeros_like(d)
    fwd = (d[:, 2:] - d[:, 1:-1]) / dx
    ctr = (d[:, 2:] - d[:, :-2]) / (2 * dx)
    bwd = (d[:, 1:-1] - d[:, :-2]) / dx
    Ux[:, 1:-1] = minmod3(theta * fwd, ctr, theta * bwd)
    fwd = (d[2:, :] - d[1:-1, :]) / dy
    ctr = (d[2:, :] - d[:-2, :]) / (2 * dy)
    bwd = (d[1:-1, :] - d[:-2, :]) / dy
    Uy[1:-1, :] = minmod3(theta * fwd, ctr, theta * bwd)
    return Ux, Uy


def linear_interface_values_x(field, Ux):
    """One-sided states (Um, Up) at the nx+1 x-interfaces of the interior.

    Um[k, t] is the value just left of interface t (from cell t-1), Up[k, t]
    just right of it (from cell t), interfaces t = 0..nx inclusive.
    """
    g, nx, ny = field.grid.ghost, field.grid.nx, field.grid.ny
    dx = field.grid.dx
    d = field.data[g:g + ny]
    s = Ux[g:g + ny]
    left = slice(g - 1, g + nx)
    right = slice(g, g + nx + 1)
    Um = d[:, left] + 0.5 * dx * s[:, left]
    Up = d[:, right] - 0.5 * dx * s[:, right]
    return Um, Up


def linear_interface_values_y(field, Uy):
    """One-sided states at the ny+1 y-interfaces; axis 0 is the interface."""
    g, nx, ny = field.grid.ghost, field.grid.nx, field.grid.ny
    dy = field.grid.dy
    d = field.data[:, g:g + nx]
    s = Uy[:, g:g + nx]
    low = slice(g - 1, g + ny)
    high = slice(g, g + ny + 1)
    Um = d[low, :] + 0.5 * dy * s[low, :]
    Up = d[high, :] - 0.5 * dy * s[high, :]
    return Um, Up


# ----------------------------------------------------------------------------
# local characteristic basis (eigenvectors of the Euler flux Jacobian)
# ----------------------------------------------------------------------------

def _basis_scalars(W, gas):
    """Scalars parameterizing the eigenvector matrices at a primitive state."""
    rho, u, v, p = W[..., 0], W[..., 1], W[..., 2], W[..., 3]
    c2 = gas.gamma * p / rho
    c = np.sqrt(c2)
    q2 = u * u + v * v
    H = c2 / (gas.gamma - 1.0) + 0.5 * q2
    b1 = (gas.gamma - 1.0) / c2
    return u, v, c, H, q2, b1


def char_basis(U_left, U_right, direction, gas):
    """Right/left eigenvector matrices (R, L) of the flux Jacobian.

    Evaluated at the arithmetic mean of the two conserved states; wave
    order is (a-c, a, a, a+c) with a the direction-normal velocity. For the
    y-direction the roles of u and v are exchanged. L @ R is the identity.
    """
    Ubar = 0.5 * (np.asarray(U_left, float) + np.asarray(U_right, float))
    if direction == "y":
        Ubar = Ubar[..., [RHO, MY, MX, ENE]]
    elif direction != "x":
        raise ValueError("direction must be 'x' or 'y'")
    W = cons_to_prim(Ubar, gas)
    u, v, c, H, q2, b1 = _basis_scalars(W, gas)
    b2 = 0.5 * b1 * q2
    R = np.array([
        [1.0, 1.0, 0.0, 1.0],
        [u - c, u, 0.0, u + c],
        [v, v, 1.0, v],
        [H - u * c, 0.5 * q2, v, H + u * c],
    ])
    L = np.array([
        [0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
        [1.0 - b2, b1 * u, b1 * v, -b1],
        [-v, 0.0, 1.0, 0.0],
        [0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
    ])
    if direction == "y":
        swap = [RHO, MY, MX, ENE]
        R = R[swap, :]
        L = L[:, swap]
    return R, L


def eigenvalues(U, direction, gas):
    """Flux-Jacobian eigenvalues (a-c, a, a, a+c), a the normal velocity."""
    W = cons_to_prim(np.asarray(U, float), gas)
    a = W[..., 1] if direction == "x" else W[..., 2]
    c = np.sqrt(gas.gamma * W[..., 3] / W[..., 0])
    return np.stack([a - c, a, a, a + c], axis=-1)


def cell_basis_fields(U, gas):
    """Vectorized x-direction (R, L) at every state of a (..., 4) array."""
    W = cons_to_prim(U, gas)
    u, v, c, H, q2, b1 = _basis_scalars(W, gas)
    b2 = 0.5 * b1 * q2
    one = np.ones_like(u)
    zero = np.zeros_like(u)
    R = np.stack([
        np.stack([one, one, zero, one], -1),
        np.stack([u - c, u, zero, u + c], -1),
        np.stack([v, v, one, v], -1),
        np.stack([H - u * c, 0.5 * q2, v, H + u * c], -1),
    ], -2)
    L = np.stack([
        np.stack([0.5 * (b2 + u / c), -0.5 * (b1 * u + 1 / c), -0.5 * b1 * v, 0.5 * b1], -1),
        np.stack([one - b2, b1 * u, b1 * v, -b1], -1),
        np.stack([-v, zero, one, zero], -1),
        np.stack([0.5 * (b2 - u / c), -0.5 * (b1 * u - 1 / c), -0.5 * b1 * v, 0.5 * b1], -1),
    ], -2)
    return R, L


# ----------------------------------------------------------------------------
# WENO-Z interpolation kernels (minus side: stencil centred one cell left of
# the target interface, value at s = +1/2 in units of the mesh)
# ----------------------------------------------------------------------------

@njit(cache=True)
def _interp3_tau(f0, f1, f2, eps, tau):
    b0 = (f1 - f0) ** 2
    b1 = (f2 - f1) ** 2
    a0 = 0.25 * (1.0 + (tau / (b0 + eps)) ** 2)
    a1 = 0.75 * (1.0 + (tau / (b1 + eps)) ** 2)
    w0 = a0 / (a0 + a1)
    w1 = 1.0 - w0
    return w0 * (1.5 * f1 - 0.5 * f0) + w1 * 0.5 * (f1 + f2)


@njit(cache=True)
def _interp3(f0, f1, f2, eps=WENO_EPS):
    b0 = (f1 - f0) ** 2
    b1 = (f2 - f1) ** 2
    return _interp3_tau(f0, f1, f2, eps, abs(b1 - b0))


@njit(cache=True)
def _interp5(f0, f1, f2, f3, f4):
    b0 = 13.0 / 12.0 * (f0 - 2 * f1 + f2) ** 2 + 0.25 * (f0 - 4 * f1 + 3 * f2) ** 2
    b1 = 13.0 / 12.0 * (f1 - 2 * f2 + f3) ** 2 + 0.25 * (f1 - f3) ** 2
    b2 = 13.0 / 12.0 * (f2 - 2 * f3 + f4) ** 2 + 0.25 * (3 * f2 - 4 * f3 + f4) ** 2
    tau = abs(b0 - b2)
    a0 = (1.0 / 16.0) * (1.0 + (tau / (b0 + WENO_EPS)) ** 2)
    a1 = (10.0 / 16.0) * (1.0 + (tau / (b1 + WENO_EPS)) ** 2)
    a2 = (5.0 / 16.0) * (1.0 + (tau / (b2 + WENO_EPS)) ** 2)
    s = a0 + a1 + a2
    p0 = (3 * f0 - 10 * f1 + 15 * f2) / 8.0
    p1 = (-f1 + 6 * f2 + 3 * f3) / 8.0
    p2 = (3 * f2 + 6 * f3 - f4) / 8.0
    return (a0 * p0 + a1 * p1 + a2 * p2) / s


@njit(cache=True)
def _beta7(a1, a2, a3):
    return a1 * a1 + 0.5 * a1 * a3 + (13.0 / 3.0) * a2 * a2 \
        + (3129.0 / 80.0) * a3 * a3


@njit(cache=True)
def _interp7(f0, f1, f2, f3, f4, f5, f6):
    b0 = _beta7(-f0 / 3.0 + 1.5 * f1 - 3 * f2 + (11.0 / 6.0) * f3,
                -0.5 * f0 + 2 * f1 - 2.5 * f2 + f3,
                (-f0 + 3 * f1 - 3 * f2 + f3) / 6.0)
    b1 = _beta7(f1 / 6.0 - f2 + 0.5 * f3 + f4 / 3.0,
                0.5 * f2 - f3 + 0.5 * f4,
                (-f1 + 3 * f2 - 3 * f3 + f4) / 6.0)
    b2 = _beta7(-f2 / 3.0 - 0.5 * f3 + f4 - f5 / 6.0,
                0.5 * f2 - f3 + 0.5 * f4,
                (-f2 + 3 * f3 - 3 * f4 + f5) / 6.0)
    b3 = _beta7(-(11.0 / 6.0) * f3 + 3 * f4 - 1.5 * f5 + f6 / 3.0,
                f3 - 2.5 * f4 + 2 * f5 - 0.5 * f6,
                (-f3 + 3 * f4 - 3 * f5 + f6) / 6.0)
    tau = abs(b0 + 3.0 * b1 - 3.0 * b2 - b3)
    a0 = (1.0 / 64.0) * (1.0 + (tau / (b0 + WENO_EPS)) ** 2)
    a1 = (21.0 / 64.0) * (1.0 + (tau / (b1 + WENO_EPS)) ** 2)
    a2 = (35.0 / 64.0) * (1.0 + (tau / (b2 + WENO_EPS)) ** 2)
    a3 = (7.0 / 64.0) * (1.0 + (tau / (b3 + WENO_EPS)) ** 2)
    s = a0 + a1 + a2 + a3
    p0 = (-5 * f0 + 21 * f1 - 35 * f2 + 35 * f3) / 16.0
    p1 = (f1 - 5 * f2 + 15 * f3 + 5 * f4) / 16.0
    p2 = (-f2 + 9 * f3 + 9 * f4 - f5) / 16.0
    p3 = (5 * f3 + 15 * f4 - 5 * f5 + f6) / 16.0
    return (a0 * p0 + a1 * p1 + a2 * p2 + a3 * p3) / s


@njit(cache=True)
def _beta9(a1, a2, a3, a4):
    return a1 * a1 + 0.5 * a1 * a3 + (13.0 / 3.0) * a2 * a2 \
        + (21.0 / 5.0) * a2 * a4 + (3129.0 / 80.0) * a3 * a3 \
        + (87617.0 / 140.0) * a4 * a4


@njit(cache=True)
def _interp9(f0, f1, f2, f3, f4, f5, f6, f7, f8):
    b0 = _beta9(f0 / 4.0 - (4.0 / 3.0) * f1 + 3 * f2 - 4 * f3 + (25.0 / 12.0) * f4,
                (11.0 / 24.0) * f0 - (7.0 / 3.0) * f1 + (19.0 / 4.0) * f2
                - (13.0 / 3.0) * f3 + (35.0 / 24.0) * f4,
                f0 / 4.0 - (7.0 / 6.0) * f1 + 2 * f2 - 1.5 * f3 + (5.0 / 12.0) * f4,
                (f0 - 4 * f1 + 6 * f2 - 4 * f3 + f4) / 24.0)
    b1 = _beta9(-f1 / 12.0 + 0.5 * f2 - 1.5 * f3 + (5.0 / 6.0) * f4 + f5 / 4.0,
                -f1 / 24.0 + f2 / 6.0 + f3 / 4.0 - (5.0 / 6.0) * f4 + (11.0 / 24.0) * f5,
                f1 / 12.0 - 0.5 * f2 + f3 - (5.0 / 6.0) * f4 + f5 / 4.0,
                (f1 - 4 * f2 + 6 * f3 - 4 * f4 + f5) / 24.0)
    b2 = _beta9(f2 / 12.0 - (2.0 / 3.0) * f3 + (2.0 / 3.0) * f5 - f6 / 12.0,
                -f2 / 24.0 + (2.0 / 3.0) * f3 - 1.25 * f4 + (2.0 / 3.0) * f5 - f6 / 24.0,
                -f2 / 12.0 + f3 / 6.0 - f5 / 6.0 + f6 / 12.0,
                (f2 - 4 * f3 + 6 * f4 - 4 * f5 + f6) / 24.0)
    b3 = _beta9(-f3 / 4.0 - (5.0 / 6.0) * f4 + 1.5 * f5 - 0.5 * f6 + f7 / 12.0,
                (11.0 / 24.0) * f3 - (5.0 / 6.0) * f4 + f5 / 4.0 + f6 / 6.0 - f7 / 24.0,
                -f3 / 4.0 + (5.0 / 6.0) * f4 - f5 + 0.5 * f6 - f7 / 12.0,
                (f3 - 4 * f4 + 6 * f5 - 4 * f6 + f7) / 24.0)
    b4 = _beta9(-(25.0 / 12.0) * f4 + 4 * f5 - 3 * f6 + (4.0 / 3.0) * f7 - f8 / 4.0,
                (35.0 / 24.0) * f4 - (13.0 / 3.0) * f5 + (19.0 / 4.0) * f6
                - (7.0 / 3.0) * f7 + (11.0 / 24.0) * f8,
                -(5.0 / 12.0) * f4 + 1.5 * f5 - 2 * f6 + (7.0 / 6.0) * f7 - f8 / 4.0,
                (f4 - 4 * f5 + 6 * f6 - 4 * f7 + f8) / 24.0)
    tau = abs(b0 + 2.0 * b1 - 6.0 * b2 + 2.0 * b3 + b4)
    a0 = (1.0 / 256.0) * (1.0 + (tau / (b0 + WENO_EPS)) ** 2)
    a1 = (36.0 / 256.0) * (1.0 + (tau / (b1 + WENO_EPS)) ** 2)
    a2 = (126.0 / 256.0) * (1.0 + (tau / (b2 + WENO_EPS)) ** 2)
    a3 = (84.0 / 256.0) * (1.0 + (tau / (b3 + WENO_EPS)) ** 2)
    a4 = (9.0 / 256.0) * (1.0 + (tau / (b4 + WENO_EPS)) ** 2)
    s = a0 + a1 + a2 + a3 + a4
    p0 = (35 * f0 - 180 * f1 + 378 * f2 - 420 * f3 + 315 * f4) / 128.0
    p1 = (-5 * f1 + 28 * f2 - 70 * f3 + 140 * f4 + 35 * f5) / 128.0
    p2 = (3 * f2 - 20 * f3 + 90 * f4 + 60 * f5 - 5 * f6) / 128.0
    p3 = (-5 * f3 + 60 * f4 + 90 * f5 - 20 * f6 + 3 * f7) / 128.0
    p4 = (35 * f4 + 140 * f5 - 70 * f6 + 28 * f7 - 5 * f8) / 128.0
    return (a0 * p0 + a1 * p1 + a2 * p2 + a3 * p3 + a4 * p4) / s


def weno_interpolate(stencil, r, side="minus"):
    """WENO-Z point-value interpolation to an interface midpoint.

    ``stencil`` holds r values at consecutive nodes centred on one cell;
    ``side='minus'`` targets the interface right of the centre node,
    ``side='plus'`` the one left of it (the mirrored formulas).
    """
    f = np.asarray(stencil, float)
    if f.shape != (r,):
        raise ValueError(f"stencil shape {f.shape} does not match order {r}")
    if side == "plus":
        f = f[::-1]
    elif side != "minus":
        raise ValueError("side must be 'minus' or 'plus'")
    if r == 3:
        return _interp3(f[0], f[1], f[2])
    if r == 5:
        return _interp5(f[0], f[1], f[2], f[3], f[4])
    if r == 7:
        return _interp7(f[0], f[1], f[2], f[3], f[4], f[5], f[6])
    if r == 9:
        return _interp9(f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8])
    raise ValueError(f"unsupported WENO order {r}")


# ----------------------------------------------------------------------------
# full-row sweep: one-sided interface states for the finite-difference path
# ----------------------------------------------------------------------------

@njit(cache=True)
def _interp_pair(buf, r, h4):
    """Minus value from buf[0:r] and plus value from reversed buf[1:r+1].

    The third-order pair shares a global indicator built from the third
    undivided difference of the four-point union stencil; the two-point
    substencil indicators alone would capsize the weights on smooth data
    and cost an order of accuracy.
    """
    if r == 3:
        scale = max(max(abs(buf[0]), abs(buf[1])),
                    max(abs(buf[2]), abs(buf[3])))
        eps = WENO_EPS + ETA3 * (scale * scale) * h4
        d3 = buf[3] - 3.0 * buf[2] + 3.0 * buf[1] - buf[0]
        tau = d3 * d3
        return (_interp3_tau(buf[0], buf[1], buf[2], eps, tau),
                _interp3_tau(buf[3], buf[2], buf[1], eps, tau))
    elif r == 5:
        return (_interp5(buf[0], buf[1], buf[2], buf[3], buf[4]),
                _interp5(buf[5], buf[4], buf[3], buf[2], buf[1]))
    elif r == 7:
        return (_interp7(buf[0], buf[1], buf[2], buf[3], buf[4], buf[5], buf[6]),
                _interp7(buf[7], buf[6], buf[5], buf[4], buf[3], buf[2], buf[1]))
    else:
        return (_interp9(buf[0], buf[1], buf[2], buf[3], buf[4], buf[5], buf[6],
                         buf[7], buf[8]),
                _interp9(buf[9], buf[8], buf[7], buf[6], buf[5], buf[4], buf[3],
                         buf[2], buf[1]))


@njit(cache=True)
def _weno_sweep_x(U, g, nx, ny, r, reach, use_char, gamma, h):
    """One-sided states at x-interfaces -reach..nx+reach for interior rows.

    Returns (Um, Up) of shape (ny, nx + 1 + 2*reach, 4). Interface t sits
    between padded columns g - reach + t - 1 and g - reach + t.
    """
    m = (r - 1) // 2
    npts = r + 1  # union stencil of the two sides
    nif = nx + 1 + 2 * reach
    Um = np.empty((ny, nif, 4))
    Up = np.empty((ny, nif, 4))
    w = np.empty((npts, 4))
    gm1 = gamma - 1.0
    h4 = h ** 4
    for k in range(ny):
        kk = g + k
        for t in range(nif):
            jl = g - reach + t - 1  # cell left of the interface
            if use_char:
                # arithmetic-mean state and its eigen-basis scalars
                rho = 0.5 * (U[kk, jl, 0] + U[kk, jl + 1, 0])
                mx = 0.5 * (U[kk, jl, 1] + U[kk, jl + 1, 1])
                my = 0.5 * (U[kk, jl, 2] + U[kk, jl + 1, 2])
                E = 0.5 * (U[kk, jl, 3] + U[kk, jl + 1, 3])
                u = mx / rho
                v = my / rho
                p = gm1 * (E - 0.5 * (mx * u + my * v))
                c2 = gamma * p / rho
                c = np.sqrt(c2)
                q2 = u * u + v * v
                H = c2 / gm1 + 0.5 * q2
                b1 = gm1 / c2
                b2 = 0.5 * b1 * q2
                for s in range(npts):
                    j = jl - m + s
                    w0 = U[kk, j, 0]
                    w1 = U[kk, j, 1]
                    w2 = U[kk, j, 2]
                    w3 = U[kk, j, 3]
                    com = b1 * (u * w1 + v * w2 - w3)
                    acc = (u * w0 - w1) / c
                    w[s, 0] = 0.5 * (b2 * w0 - com + acc)
                    w[s, 1] = (1.0 - b2) * w0 + com
                    w[s, 2] = w2 - v * w0
                    w[s, 3] = 0.5 * (b2 * w0 - com - acc)
                for cc in range(4):
                    vm, vp = _interp_pair(w[:, cc], r, h4)
                    Um[k, t, cc] = vm
                    Up[k, t, cc] = vp
                for arr in (Um, Up):
                    cm = arr[k, t, 0]
                    ce = arr[k, t, 1]
                    cs = arr[k, t, 2]
                    cp = arr[k, t, 3]
                    arr[k, t, 0] = cm + ce + cp
                    arr[k, t, 1] = (u - c) * cm + u * ce + (u + c) * cp
                    arr[k, t, 2] = v * (cm + ce + cp) + cs
                    arr[k, t, 3] = (H - u * c) * cm + 0.5 * q2 * ce + v * cs \
                        + (H + u * c) * cp
            else:
                for s in range(npts):
                    j = jl - m + s
                    for cc in range(4):
                        w[s, cc] = U[kk, j, cc]
                for cc in range(4):
                    vm, vp = _interp_pair(w[:, cc], r, h4)
                    Um[k, t, cc] = vm
                    Up[k, t, cc] = vp
    return Um, Up


def weno_interface_values_x(field, r, gas, characteristic=True, reach=None):
    """One-sided x-interface states by order-r WENO-Z interpolation.

    With ``characteristic=True`` the stencil is projected onto the local
    characteristic variables of the interface-mean state before
    interpolating, then lifted back. ``reach`` extends the interface range
    beyond the interior for the high-order flux corrections.
    """
    if r not in CORRECTION_REACH:
        raise ValueError(f"unsupported WENO order {r}")
    if reach is None:
        reach = CORRECTION_REACH[r]
    g = field.grid.ghost
    need = reach + 1 + (r - 1) // 2
    if g < need:
        raise ValueError(f"ghost width {g} too small for order {r} sweep")
    return _weno_sweep_x(field.data, g, field.grid.nx, field.grid.ny,
                         r, reach, characteristic, gas.gamma, field.grid.dx)
