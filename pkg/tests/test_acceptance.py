"""Acceptance suite: one test per criterion, one printed line per criterion.

Heavy benchmark runs execute once per session and are shared. Scale is
selected with DW_ACCEPT_SCALE:

* ``ci`` (default): the conserved-quantity anchor, consistency/oracle
  suites, order-of-accuracy and cross-family agreement run at their stated
  scales; the order-average trend and defect-separation runs use reduced
  meshes (config2 at 128^2, the shear strip at 64^2) with trend-only
  assertions.
* ``full``: everything at the stated 256^2 with the fitted-exponent bands
  asserted as well. Expect hours of runtime.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines as they pass.
"""

import csv
import json
import os
import numpy as np
import pytest
import sympy as sp

import dweuler as dw
from dweuler import diagnostics as dg
from dweuler import runio
from dweuler.fluxes import FAMILIES
from dweuler.grid import Grid, Field, halo_width
from dweuler.rhs import make_rhs, fd_rhs, correction_high_order
from dweuler.runio import RunConfig, run, run_family, read_field, write_field
from dweuler.state import prim, prim_to_cons, phys_flux_x, phys_flux_y
from dweuler.timestep import advance, ssprk3_step, compute_dt

from conftest import random_admissible, ulps_apart

SCALE = os.environ.get("DW_ACCEPT_SCALE", "ci")
if SCALE not in ("ci", "full"):
    raise RuntimeError(f"DW_ACCEPT_SCALE must be ci or full, not {SCALE!r}")

CFG = {
    "ci": dict(n_anchor=128, n_c2=128, n_kh=64, n_sep=128, n_weak=(128, 256),
               kh_samples=20, assert_alpha=False),
    "full": dict(n_anchor=128, n_c2=256, n_kh=256, n_sep=256, n_weak=(128, 256),
                 kh_samples=20, assert_alpha=True),
}[SCALE]

GAS = dw.GasModel(1.4)

ANCHOR_SCHEMES = (("VFV", 1), ("LDCU", 2), ("LCDCU", 3))


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE [{name}] {status} {detail}".rstrip(), flush=True)
    assert ok, f"{name}: {detail}"


# ----------------------------------------------------------------------------
# shared heavy artifacts
# ----------------------------------------------------------------------------

@pytest.fixture(scope="session")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


def _family(workdir, problem, fam, n, t_final=None, samples=10):
    tag = f"{problem}_{fam}_{n}" + (f"_T{t_final}" if t_final else "")
    out = workdir / tag
    if not (out / "family_report.json").exists():
        cfg = RunConfig(problem=problem, flux=fam, order=1, n=n, out=out,
                        t_final=t_final, samples=samples)
        run_family(cfg)
    return out, json.loads((out / "family_report.json").read_text())


@pytest.fixture(scope="session")
def c2_families(workdir):
    return {fam: _family(workdir, "config2", fam, CFG["n_c2"])
            for fam in FAMILIES}


@pytest.fixture(scope="session")
def kh_families(workdir):
    return {fam: _family(workdir, "kh", fam, CFG["n_kh"],
                         samples=CFG["kh_samples"]) for fam in FAMILIES}


@pytest.fixture(scope="session")
def kh_matched_families(workdir):
    return {fam: _family(workdir, "kh", fam, CFG["n_sep"], t_final=0.2)
            for fam in FAMILIES}


def _r9_density(workdir, c2_families, fam, n):
    """Final r=9 density of config2 at resolution n, reusing family runs."""
    if n == CFG["n_c2"]:
        out, _ = c2_families[fam]
        arr, _ = read_field(out / "r9" / "final.field")
        return arr[..., 0]
    out = workdir / f"weak_{fam}_{n}"
    if not (out / "final.field").exists():
        run(RunConfig(problem="config2", flux=fam, order=9, n=n, out=out,
                      samples=1))
    arr, _ = read_field(out / "final.field")
    return arr[..., 0]


# ----------------------------------------------------------------------------
# criterion: conservation anchor
# ----------------------------------------------------------------------------

def test_conservation_anchor():
    n = CFG["n_anchor"]
    worst_e0 = worst_drift = 0.0
    for fam, r in ANCHOR_SCHEMES:
        grid = dw.make_grid(n, r)
        fld = dw.init_kh(grid, GAS)
        w = grid.dx * grid.dy
        tot0 = fld.interior.sum(axis=(0, 1)) * w
        worst_e0 = max(worst_e0, abs(tot0[3] - 6.4375))
        drift = [0.0]

        def on_step(f, t, dt):
            tot = f.interior.sum(axis=(0, 1)) * w
            rel = np.abs(tot - tot0) / np.maximum(np.abs(tot0), 1.0)
            drift[0] = max(drift[0], rel.max())

        advance(fld, make_rhs(fam, r, GAS), GAS, dw.DEFAULT_CFL[fam],
                0.0, 0.5, on_step=on_step)
        worst_drift = max(worst_drift, drift[0])
    _report("conservation-anchor",
            worst_e0 <= 1e-6 and worst_drift <= 1e-10,
            f"|E0-6.4375| <= {worst_e0:.2e} (tol 1e-6), "
            f"max drift {worst_drift:.2e} (tol 1e-10) at {n}^2")


# ----------------------------------------------------------------------------
# criterion: flux consistency
# ----------------------------------------------------------------------------

def test_consistency_suite(rng):
    U = random_admissible(rng, 1000)
    worst = 0.0
    for fam in FAMILIES:
        for direction, phys in (("x", phys_flux_x), ("y", phys_flux_y)):
            F = dw.numerical_flux(U, U, fam, direction, GAS)
            worst = max(worst, ulps_apart(F, phys(U, GAS)).max())
    _report("consistency-suite", worst <= 4,
            f"max deviation {worst:.1f} ulps over 1000 states x 3 families "
            "(tol 4)")


# ----------------------------------------------------------------------------
# criterion: stencil/limiter oracles
# ----------------------------------------------------------------------------

def test_stencil_limiter_oracles(rng):
    ok = True
    notes = []

    ok &= dw.minmod(1, 0.5, 2) == 0.5 and dw.minmod(-1, 2, 1) == 0.0 \
        and dw.minmod(-2, -1, -3) == -1.0 and dw.minmod(3.3, 3.3) == 3.3

    for r, reach in ((3, 1), (5, 2), (7, 3), (9, 4)):
        line = np.full(9 + 2 * reach, 1.37)
        dev_c = np.abs(correction_high_order(line, r, 0.01) - 1.37).max()
        line = 0.2 + 0.9 * np.arange(9 + 2 * reach)
        dev_l = np.abs(correction_high_order(line, r, 0.01)
                       - line[reach:-reach]).max()
        ok &= dev_c <= 1e-12 and dev_l <= 1e-12
    notes.append("corrections annihilate const/linear <= 1e-12")

    corr = correction_high_order(np.array([0.25, 0.25, 2.25]), 3, 1.0)[0]
    ok &= abs(corr - (0.25 - 2.0 / 24.0)) < 1e-15
    notes.append("r=3 quadratic F_xx = 2")

    worst = 0.0
    for r in (3, 5, 7, 9):
        m = (r - 1) // 2
        nodes = np.arange(-m, m + 1, dtype=float)
        for _ in range(10):
            coeffs = rng.uniform(-1, 1, r)
            vals = np.polyval(coeffs, nodes)
            s = 1e-8 / np.abs(vals).max()
            got = dw.weno_interpolate(vals * s, r)
            worst = max(worst, abs(got - np.polyval(coeffs, 0.5) * s))
    ok &= worst <= 1e-11
    notes.append(f"WENO poly-exactness {worst:.1e} (tol 1e-11)")

    f = Field.zeros(Grid(4, 4, 2), "periodic")
    f.interior[...] = prim_to_cons(prim(1, 0, 0, 1), GAS)
    f.apply_bc()
    ssprk3_step(f, lambda fld: -fld.interior, 0.1, GAS)
    dev = abs(f.interior[0, 0, 3] / 2.5 - 0.9048333333333333)
    ok &= dev <= 1e-12
    notes.append(f"SSP-RK3 scalar step dev {dev:.1e} (tol 1e-12)")

    _report("stencil-limiter-oracles", ok, "; ".join(notes))


# ----------------------------------------------------------------------------
# criterion: order of accuracy of the finite-difference tendencies
# ----------------------------------------------------------------------------

def _smooth_case():
    """Smooth periodic primitives and the exact tendency, via sympy."""
    x, y, g = sp.symbols("x y g")
    rho = 1 + sp.Rational(1, 5) * sp.sin(2 * sp.pi * (x + y))
    u = sp.Rational(1, 4) + sp.Rational(1, 10) * sp.cos(2 * sp.pi * x)
    v = sp.Rational(1, 5) - sp.Rational(1, 10) * sp.sin(2 * sp.pi * y)
    p = 1 + sp.Rational(1, 10) * sp.cos(2 * sp.pi * (x - y))
    E = p / (g - 1) + rho * (u**2 + v**2) / 2
    U = sp.Matrix([rho, rho * u, rho * v, E])
    F = sp.Matrix([rho * u, rho * u**2 + p, rho * u * v, u * (E + p)])
    Gf = sp.Matrix([rho * v, rho * u * v, rho * v**2 + p, v * (E + p)])
    div = -(F.diff(x) + Gf.diff(y))
    subs = {g: GAS.gamma}
    f_U = [sp.lambdify((x, y), c.subs(subs), "numpy") for c in U]
    f_div = [sp.lambdify((x, y), c.subs(subs), "numpy") for c in div]

    def eval_vec(fns, X, Y):
        return np.stack([np.broadcast_to(f(X, Y), X.shape) for f in fns],
                        axis=-1)

    return lambda X, Y: eval_vec(f_U, X, Y), lambda X, Y: eval_vec(f_div, X, Y)


@pytest.fixture(scope="session")
def smooth_case():
    return _smooth_case()


def test_order_of_accuracy(smooth_case):
    f_U, f_div = smooth_case

    def rhs_error(n, fam, r):
        grid = Grid(n, n, halo_width(r))
        fld = Field.zeros(grid, "periodic")
        X, Y = np.meshgrid(grid.xs(), grid.ys())
        fld.interior[...] = f_U(X, Y)
        fld.apply_bc()
        got = fd_rhs(fld, fam, r, GAS)
        return np.abs(got - f_div(X, Y)).mean()

    ok = True
    details = []
    for r in (3, 5):
        for fam in FAMILIES:
            errs = [rhs_error(n, fam, r) for n in (64, 128, 256)]
            rate = np.log2(errs[1] / errs[2])
            ok &= rate >= r - 0.5
            details.append(f"{fam} r={r}: rate {rate:.2f}")
    _report("order-of-accuracy", ok,
            "; ".join(details) + " (need >= r-0.5)")


# ----------------------------------------------------------------------------
# criterion: cross-family agreement on the rarefaction benchmark
# ----------------------------------------------------------------------------

def test_weak_solution_agreement(workdir, c2_families):
    n_lo, n_hi = CFG["n_weak"]
    dist = {}
    for n in (n_lo, n_hi):
        rho = {fam: _r9_density(workdir, c2_families, fam, n)
               for fam in FAMILIES}
        for i, f1 in enumerate(FAMILIES):
            for f2 in FAMILIES[i + 1:]:
                dist[(f1, f2, n)] = dg.l1_distance(rho[f1], rho[f2],
                                                   1.0 / n, 1.0 / n)
    ok = True
    details = []
    for i, f1 in enumerate(FAMILIES):
        for f2 in FAMILIES[i + 1:]:
            d_hi = dist[(f1, f2, n_hi)]
            ratio = dist[(f1, f2, n_lo)] / d_hi
            pair_ok = d_hi < 5e-3 and 2 * 0.7 <= ratio <= 2 * 1.3
            ok &= pair_ok
            details.append(f"{f1}/{f2}: {d_hi:.2e} at {n_hi}^2, ratio {ratio:.2f}")
    _report("weak-solution-agreement", ok,
            "; ".join(details) + " (need < 5e-3, ratio in [1.4, 2.6])")


# ----------------------------------------------------------------------------
# criterion: order-average convergence trend
# ----------------------------------------------------------------------------

def test_kconv_trend(c2_families, kh_families):
    ok = True
    details = []
    for label, fams, band in (("config2", c2_families, (-2.3, -1.3)),
                              ("kh", kh_families, (-1.5, -0.5))):
        for fam in FAMILIES:
            _, report = fams[fam]
            errs = report["errors"]
            alpha = report["fit"]["alpha"]
            decreasing = all(errs[i] > errs[i + 1] for i in range(4))
            ok &= decreasing
            if CFG["assert_alpha"] or label == "config2":
                ok &= band[0] <= alpha <= band[1]
            details.append(f"{label}/{fam}: alpha {alpha:.2f}"
                           + ("" if decreasing else " NOT DECREASING"))
    scope = ("trend+exponent" if CFG["assert_alpha"]
             else "trend-only for kh at ci scale")
    _report("kconv-trend", ok, "; ".join(details) + f" [{scope}]")


# ----------------------------------------------------------------------------
# criterion: energy-defect separation between benchmarks
# ----------------------------------------------------------------------------

def test_defect_separation(c2_families, kh_matched_families):
    ok = True
    details = []
    for fam in FAMILIES:
        _, c2 = c2_families[fam]
        _, kh = kh_matched_families[fam]
        de_c2 = c2["functional_time_averages"]["6"]["DE"]
        de_kh = kh["functional_time_averages"]["6"]["DE"]
        ratio = de_kh / de_c2 if de_c2 > 0 else np.inf
        ok &= ratio >= 5.0
        details.append(f"{fam}: {de_kh:.2e}/{de_c2:.2e} = {ratio:.1f}x")
    _report("defect-separation", ok,
            "; ".join(details) + " (need >= 5x at matched T=0.2)")


# ----------------------------------------------------------------------------
# criterion: functional sanity across all runs
# ----------------------------------------------------------------------------

def _member_dirs(families):
    for fam in FAMILIES:
        out, _ = families[fam]
        for r in (1, 2, 3, 5, 7, 9):
            yield fam, r, out / f"r{r}"


def test_functional_sanity(c2_families, kh_families, kh_matched_families):
    worst_de1 = 0.0
    worst_e1_drift = 0.0
    for families, periodic in ((c2_families, False), (kh_families, True),
                               (kh_matched_families, True)):
        for fam, r, member in _member_dirs(families):
            with open(member / "functionals.csv", newline="") as fh:
                rows = np.array([[float(v) for v in row]
                                 for row in list(csv.reader(fh))[1:]])
            worst_de1 = max(worst_de1, np.abs(rows[:, 4]).max())
            if periodic:
                with open(member / "totals.csv", newline="") as fh:
                    tot = np.array([[float(v) for v in row]
                                    for row in list(csv.reader(fh))[1:]])
                e = tot[:, 4]
                worst_e1_drift = max(worst_e1_drift,
                                     np.abs(e - e[0]).max() / abs(e[0]))
    ok = worst_de1 <= 1e-12 and worst_e1_drift <= 1e-10
    _report("functional-sanity", ok,
            f"max DE_1 {worst_de1:.1e} (tol 1e-12); "
            f"max E1 drift {worst_e1_drift:.1e} (tol 1e-10)")


def test_min_entropy_monitor(c2_families):
    """Minimum-entropy monitor, asserted exactly as stated.

    The bound holds (to round-off) for the first-order members, matching
    the theory behind the low-order schemes. Every unlimited higher-order
    scheme dips O(1e-2) immediately at the quadrant corner, where four
    states meet and interpolation overshoots; that makes the stated 1e-8
    bound unattainable for the high-order runs of any faithful
    implementation of these schemes (see the decisions ledger). The
    criterion is kept as stated rather than weakened, so this test is
    expected to fail on the high-order members while the first-order rows
    demonstrate the principle.
    """
    drops = {}
    for fam, r, member in _member_dirs(c2_families):
        with open(member / "totals.csv", newline="") as fh:
            tot = np.array([[float(v) for v in row]
                            for row in list(csv.reader(fh))[1:]])
        smin = tot[:, 6]
        drops[(fam, r)] = float(smin[0] - smin.min())
    first_order = max(v for (fam, r), v in drops.items() if r == 1)
    worst = max(drops.values())
    detail = (f"first-order max drop {first_order:.1e}; "
              f"overall max drop {worst:.1e} "
              f"(tol 1e-8; high-order corner dip is intrinsic, see ledger)")
    _report("min-entropy-monitor", worst <= 1e-8, detail)


# ----------------------------------------------------------------------------
# criterion: histogram normalization contract
# ----------------------------------------------------------------------------

def test_pdf_contract(kh_families):
    vals = np.array([1.0] * 50 + [2.0] * 50)
    pdf = dg.young_pdf(vals)
    ok = pdf.sigma[0] == 15.0 and pdf.sigma[-1] == 15.0
    worst = abs(pdf.bin_width * pdf.sigma.sum() - 1.0)
    count = 1
    for fam in FAMILIES:
        out, _ = kh_families[fam]
        for path in sorted(out.glob("pdf*_*.csv")):
            centers, sigma = [], []
            with open(path, newline="") as fh:
                rows = [r for r in csv.reader(
                    line for line in fh if not line.startswith("#"))][1:]
            arr = np.array([[float(a), float(b)] for a, b in rows])
            width = arr[1, 0] - arr[0, 0]
            worst = max(worst, abs(width * arr[:, 1].sum() - 1.0))
            count += 1
    ok &= worst <= 1e-12
    _report("pdf-contract", ok,
            f"two-value case sigma_1=sigma_30=15 exact; "
            f"|width*sum(sigma)-1| <= {worst:.1e} over {count} histograms "
            "(tol 1e-12)")


# ----------------------------------------------------------------------------
# criterion: i/o round trip and determinism
# ----------------------------------------------------------------------------

def test_io_roundtrip(workdir, rng):
    meta = {"problem": "kh", "family": "VFV", "r": 5, "gamma": 1.4, "time": 0.0}
    ok = True
    for i in range(100):
        ny, nx = rng.integers(2, 20, 2)
        arr = rng.normal(size=(ny, nx, 4)) * 10.0 ** rng.integers(-6, 7)
        path = workdir / "roundtrip.field"
        write_field(path, arr, {**meta, "time": float(rng.uniform(0, 2))})
        back, _ = read_field(path)
        ok &= bool(np.array_equal(back, arr))

    outs = []
    for tag in ("det_a", "det_b"):
        cfg = RunConfig(problem="config2", flux="LDCU", order=2, n=32,
                        out=workdir / tag, t_final=0.05, samples=2)
        run(cfg)
        outs.append(json.loads(
            (workdir / tag / "manifest.json").read_text())["files"])
    ok &= outs[0] == outs[1]
    _report("io-roundtrip", ok,
            "100 random fields bit-exact; deterministic rerun checksums equal")
