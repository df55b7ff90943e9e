"""Benchmark initial data: quadrant Riemann problems and a shear-layer strip.

All cases live on the unit square with gamma = 1.4. The quadrant problems
sample the piecewise-constant data at cell centres (ties go to the
upper/right quadrant). The shear-layer strip is initialized column by
column with the exact y-fraction of each cut cell, which makes the
discrete totals of mass, momentum and energy match the closed-form
integrals to round-off at every resolution.
"""

import numpy as np
from dataclasses import dataclass, field as dfield
from importlib import resources

from .grid import Grid, Field, halo_width
from .state import prim, prim_to_cons

GAMMA_DEFAULT = 1.4

# quadrant states (rho, u, v, p) keyed NE/NW/SW/SE, corner point, final time
RIEMANN_CONFIGS = {
    2: {
        "corner": 0.5, "t_final": 0.2,
        "NE": (1.0, 0.0, 0.0, 1.0),
        "NW": (0.5197, -0.7259, 0.0, 0.4),
        "SW": (1.0, -0.7259, -0.7259, 1.0),
        "SE": (0.5197, 0.0, -0.7259, 0.4),
    },
    3: {
        "corner": 0.8, "t_final": 0.8,
        "NE": (1.5, 0.0, 0.0, 1.5),
        "NW": (0.5323, 1.206, 0.0, 0.3),
        "SW": (0.138, 1.206, 1.206, 0.029),
        "SE": (0.5323, 0.0, 1.206, 0.3),
    },
    4: {
        "corner": 0.5, "t_final": 0.25,
        "NE": (1.1, 0.0, 0.0, 1.1),
        "NW": (0.5065, 0.8939, 0.0, 0.35),
        "SW": (1.1, 0.8939, 0.8939, 1.1),
        "SE": (0.5065, 0.0, 0.8939, 0.35),
    },
}

# shear-strip amplitudes/phases, ten modes, two interfaces; amplitudes are
# normalized so each column sums to one
KH_COEFFS = np.array([
    # a_1                  a_2                    b_1                 b_2
    [6.848086824246653e-08, 9.373025805955863e-03, -0.973625473853271, 3.10750325239443],
    [4.450348128947341e-03, 1.976861219341060e-02, 2.33221742979395, 1.74829850637860],
    [6.156955958786613e-02, 1.29928159795144e-01, -2.57661895600041, -3.01803367486339],
    [1.16481555805349e-01, 2.15403817045303e-01, 2.43965931651801, -2.07430785001108],
    [1.68204784555961e-01, 1.758678905771403e-02, 1.26278768686501, 3.10856394704146],
    [1.46413246162863e-01, 2.11994809652299e-01, 1.47373734867445, 1.59399689987015],
    [5.857224323849688e-02, 2.134903127162342e-02, -1.25553236484458, -1.77202310331374],
    [1.59868678328304e-01, 1.48283301108284e-01, -2.82920698380582, 1.00086476379714],
    [1.39003488203723e-01, 1.98161392506709e-01, 2.56472949845762, 0.245159802027399],
    [1.45436027507622e-01, 2.815106156355688e-02, -2.52798558841484, -0.125265541490568],
])

KH_T_FINAL = 2.0
KH_INNER = (2.0, -0.5, 0.0, 2.5)
KH_OUTER = (1.0, 0.5, 0.0, 2.5)

# density-histogram subdomains used by the diagnostics, per problem
PDF_SUBDOMAINS = {
    "config3": ((0.42, 0.43, 0.63, 0.64), (0.60, 0.61, 0.37, 0.38)),
    "kh": ((0.50, 0.51, 0.25, 0.26), (0.15, 0.16, 0.75, 0.76)),
}


def load_kh_coeffs(path=None):
    """Interface coefficients from a data file; embedded table by default."""
    if path is None:
        ref = resources.files("dweuler").joinpath("data/kh_coeffs.txt")
        with resources.as_file(ref) as p:
            return np.loadtxt(p)
    return np.loadtxt(path)


def kh_interface(x, coeffs=None, j=1):
    """Interface perturbation Y_j(x) = sum_n a_j^n cos(b_j^n + 2 n pi x)."""
    if j not in (1, 2):
        raise ValueError("interface index j must be 1 or 2")
    c = KH_COEFFS if coeffs is None else np.asarray(coeffs, float)
    a, b = c[:, j - 1], c[:, j + 1]
    x = np.asarray(x, float)
    n = np.arange(1, len(a) + 1)
    return np.cos(b + 2.0 * np.pi * np.multiply.outer(x, n)) @ a


def make_grid(n, r):
    """Square n-by-n grid with the halo required by order r."""
    return Grid(nx=n, ny=n, ghost=halo_width(r))


def init_riemann(cfg_id, grid, gas):
    """Quadrant Riemann data on [0,1]^2 with free boundaries."""
    if cfg_id not in RIEMANN_CONFIGS:
        raise ValueError(f"unknown Riemann configuration {cfg_id}")
    cfg = RIEMANN_CONFIGS[cfg_id]
    xc = cfg["corner"]
    X, Y = np.meshgrid(grid.xs(), grid.ys())
    east = X >= xc
    north = Y >= xc
    W = np.where((east & north)[..., None], prim(*cfg["NE"]),
                 np.where((~east & north)[..., None], prim(*cfg["NW"]),
                          np.where((~east & ~north)[..., None], prim(*cfg["SW"]),
                                   prim(*cfg["SE"]))))
    f = Field.from_interior(grid, prim_to_cons(W, gas), bc="free")
    f.apply_bc()
    return f


def init_kh(grid, gas, coeffs=None):
    """Shear strip (2,-0.5,0,2.5) inside perturbed bounds, (1,0.5,0,2.5) out.

    Cut cells take the y-fraction-weighted average of the two conserved
    states, so column sums are exact and the discrete total energy equals
    the closed-form value 6.4375 (for gamma = 1.4) to round-off.
    """
    c = KH_COEFFS if coeffs is None else np.asarray(coeffs, float)
    xs, ys = grid.xs(), grid.ys()
    lo = 0.25 + 0.01 * kh_interface(xs, c, j=1)
    hi = 0.75 + 0.01 * kh_interface(xs, c, j=2)
    U_in = prim_to_cons(prim(*KH_INNER), gas)
    U_out = prim_to_cons(prim(*KH_OUTER), gas)
    # per-column overlap of [lo, hi] with each cell [y_k - dy/2, y_k + dy/2]
    ylow = ys - 0.5 * grid.dy
    yhigh = ys + 0.5 * grid.dy
    overlap = (np.minimum(yhigh[:, None], hi[None, :])
               - np.maximum(ylow[:, None], lo[None, :]))
    frac = np.clip(overlap / grid.dy, 0.0, 1.0)
    # snap round-off so uncut cells carry exactly one of the two states
    frac[frac > 1.0 - 1e-14] = 1.0
    frac[frac < 1e-14] = 0.0
    interior = U_out[None, None, :] + frac[..., None] * (U_in - U_out)[None, None, :]
    f = Field.from_interior(grid, interior, bc="periodic")
    f.apply_bc()
    return f


@dataclass(frozen=True)
class Benchmark:
    """A named initial-value problem with its final time and subdomains."""

    name: str
    t_final: float
    bc: str
    subdomains: tuple = dfield(default_factory=tuple)

    def init(self, grid, gas):
        if self.name.startswith("config"):
            return init_riemann(int(self.name[-1]), grid, gas)
        return init_kh(grid, gas)


BENCHMARKS = {
    "config2": Benchmark("config2", RIEMANN_CONFIGS[2]["t_final"], "free"),
    "config3": Benchmark("config3", RIEMANN_CONFIGS[3]["t_final"], "free",
                         PDF_SUBDOMAINS["config3"]),
    "config4": Benchmark("config4", RIEMANN_CONFIGS[4]["t_final"], "free"),
    "kh": Benchmark("kh", KH_T_FINAL, "periodic", PDF_SUBDOMAINS["kh"]),
}
