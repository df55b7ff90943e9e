"""Experiment orchestration: run configs, field files, manifests.

A *run* integrates one (problem, flux family, order) combination and leaves
on disk: indexed snapshot fields, the final field, the time-averaged
conserved field, per-step conserved totals, single-solution functionals,
and a manifest with checksums. A *family* executes all six orders of one
flux family (optionally in parallel processes), then aggregates order
averages, density histograms, the L1 error table with its power-law fit,
and the cross-order functional series.

Field files are one text header line followed by little-endian float64
interior data, row-major with the y index outermost.
"""

import csv
import hashlib
import json
import os
import numpy as np
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dfield, asdict
from pathlib import Path

from . import diagnostics as diag
from .diagnostics import ORDER_INDEX
from .fluxes import FAMILIES
from .grid import ORDERS, Grid, Field, halo_width
from .problems import BENCHMARKS, GAMMA_DEFAULT
from .rhs import make_rhs
from .state import GasModel, entropy_density, specific_entropy, InvalidStateError
from .timestep import DEFAULT_CFL, BlowUpError, advance

MAGIC = "dwfield"
FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_IO = 4


class ConfigError(ValueError):
    """Rejected run configuration."""


class FieldFileError(IOError):
    """Base class for field-file problems."""


class FieldHeaderError(FieldFileError):
    """Corrupt or incomplete header."""


class FieldVersionError(FieldFileError):
    """Unsupported format version."""


class FieldLengthError(FieldFileError):
    """Payload size disagrees with the header."""


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------

@dataclass
class RunConfig:
    problem: str
    flux: str
    order: int
    n: int
    out: Path
    cfl: float = None
    t_final: float = None
    snapshots: tuple = ()
    subdomains: tuple = None
    samples: int = 20  # intervals of the functional/snapshot sample grid

    def __post_init__(self):
        self.out = Path(self.out)
        if self.problem not in BENCHMARKS:
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.flux not in FAMILIES:
            raise ConfigError(f"unknown flux family {self.flux!r}")
        if self.order not in ORDERS:
            raise ConfigError(f"order must be one of {ORDERS}, got {self.order}")
        if self.n < 16:
            raise ConfigError(f"resolution {self.n} below the minimum of 16")
        if self.cfl is not None and not 0 < self.cfl <= 1:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        tf = self.resolved_t_final()
        if tf <= 0:
            raise ConfigError("final time must be positive")
        self.snapshots = tuple(float(t) for t in self.snapshots)
        if any(t < 0 or t > tf for t in self.snapshots):
            raise ConfigError(f"snapshot times must lie in [0, {tf}]")
        if self.subdomains is None:
            self.subdomains = BENCHMARKS[self.problem].subdomains
        self.subdomains = tuple(tuple(float(v) for v in r) for r in self.subdomains)
        for r in self.subdomains:
            if len(r) != 4:
                raise ConfigError(f"subdomain {r} is not (x0, x1, y0, y1)")

    def resolved_t_final(self):
        return float(self.t_final if self.t_final is not None
                     else BENCHMARKS[self.problem].t_final)

    def resolved_cfl(self):
        return float(self.cfl if self.cfl is not None else DEFAULT_CFL[self.flux])

    def sample_times(self):
        return np.linspace(0.0, self.resolved_t_final(), self.samples + 1)

    def to_dict(self):
        d = asdict(self)
        d["out"] = str(self.out)
        return d


def parse_config_file(path):
    """key=value lines (# comments) into a dict of config fields."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"malformed config line {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = val
    return out


def config_from_mapping(kv):
    """Build a RunConfig from string-valued keys (file or CLI form)."""
    kv = dict(kv)
    conv = {}
    try:
        for key in ("problem", "flux", "out"):
            if key in kv:
                conv[key] = kv.pop(key)
        for key in ("order", "n", "samples"):
            if key in kv:
                conv[key] = int(kv.pop(key))
        for key in ("cfl", "t_final"):
            if key in kv:
                conv[key] = float(kv.pop(key))
        if "snapshots" in kv:
            raw = kv.pop("snapshots")
            conv["snapshots"] = tuple(float(t) for t in raw.split(",") if t.strip())
        if "subdomains" in kv:
            raw = kv.pop("subdomains")
            rects = [r for r in raw.split(";") if r.strip()]
            conv["subdomains"] = tuple(tuple(float(v) for v in r.split(","))
                                       for r in rects)
    except ValueError as e:
        raise ConfigError(f"bad config value: {e}") from None
    if kv:
        raise ConfigError(f"unknown config keys {sorted(kv)}")
    missing = {"problem", "flux", "order", "n", "out"} - set(conv)
    if missing:
        raise ConfigError(f"missing config keys {sorted(missing)}")
    return RunConfig(**conv)


# ----------------------------------------------------------------------------
# field files
# ----------------------------------------------------------------------------

def write_field(path, interior, meta):
    """One header line, then nx*ny*4 little-endian float64 interior values."""
    arr = np.ascontiguousarray(interior, dtype="<f8")
    ny, nx = arr.shape[0], arr.shape[1]
    if arr.shape != (ny, nx, 4):
        raise ValueError(f"interior must be (ny, nx, 4), got {arr.shape}")
    fields = {
        "problem": meta["problem"], "family": meta["family"],
        "r": int(meta["r"]), "nx": nx, "ny": ny,
        "gamma": repr(float(meta["gamma"])), "time": repr(float(meta["time"])),
        "kind": meta.get("kind", "conserved"),
    }
    header = " ".join([MAGIC, str(FORMAT_VERSION)]
                      + [f"{k}={v}" for k, v in fields.items()])
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        fh.write(arr.tobytes())


def read_field(path):
    """Read a field file back as (interior, meta); bit-exact round trip."""
    with open(path, "rb") as fh:
        header = fh.readline()
        payload = fh.read()
    try:
        text = header.decode("ascii").strip()
    except UnicodeDecodeError:
        raise FieldHeaderError(f"{path}: undecodable header") from None
    parts = text.split()
    if len(parts) < 2 or parts[0] != MAGIC:
        raise FieldHeaderError(f"{path}: not a {MAGIC} file")
    if parts[1] != str(FORMAT_VERSION):
        raise FieldVersionError(f"{path}: version {parts[1]} != {FORMAT_VERSION}")
    meta = {}
    for item in parts[2:]:
        if "=" not in item:
            raise FieldHeaderError(f"{path}: malformed header item {item!r}")
        k, v = item.split("=", 1)
        meta[k] = v
    try:
        nx, ny = int(meta["nx"]), int(meta["ny"])
        meta.update(nx=nx, ny=ny, r=int(meta["r"]),
                    gamma=float(meta["gamma"]), time=float(meta["time"]))
    except (KeyError, ValueError):
        raise FieldHeaderError(f"{path}: missing or malformed header fields") from None
    expected = nx * ny * 4 * 8
    if len(payload) != expected:
        raise FieldLengthError(f"{path}: payload {len(payload)} bytes, "
                               f"header implies {expected}")
    arr = np.frombuffer(payload, dtype="<f8").reshape(ny, nx, 4).copy()
    return arr, meta


def file_checksum(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class Manifest:
    """Checksummed ledger of every file a run writes."""

    def __init__(self, root):
        self.root = Path(root)
        self.files = {}

    def record(self, path):
        p = Path(path)
        self.files[str(p.relative_to(self.root))] = file_checksum(p)

    def write(self, extra=None):
        payload = {"files": dict(sorted(self.files.items()))}
        if extra:
            payload.update(extra)
        path = self.root / "manifest.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return path


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# ----------------------------------------------------------------------------
# single run
# ----------------------------------------------------------------------------

@dataclass
class RunResult:
    status: str          # "ok" or "blowup"
    t_reached: float
    out: Path
    failure: dict = None


def run(cfg, gas=None):
    """Integrate one configuration and write its artifacts.

    A blow-up leaves partial outputs plus a failure record and is reported
    in the returned status rather than raised.
    """
    gas = gas or GasModel(GAMMA_DEFAULT)
    bench = BENCHMARKS[cfg.problem]
    grid = Grid(cfg.n, cfg.n, halo_width(cfg.order))
    fld = bench.init(grid, gas)
    t_final = cfg.resolved_t_final()
    cfl = cfg.resolved_cfl()
    rhs = make_rhs(cfg.flux, cfg.order, gas)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out)
    meta = {"problem": cfg.problem, "family": cfg.flux, "r": cfg.order,
            "gamma": gas.gamma}

    sample_times = cfg.sample_times()
    events = np.unique(np.concatenate([sample_times, np.asarray(cfg.snapshots),
                                       [0.0, t_final]]))
    dxdy = grid.dx * grid.dy
    totals_rows = []
    functional_rows = []
    snap_rows = []
    averager = diag.TimeAverage()

    def record_totals(interior, t):
        tot = interior.sum(axis=(0, 1)) * dxdy
        S = float(entropy_density(interior, gas).sum() * dxdy)
        smin = float(specific_entropy(interior, gas).min())
        totals_rows.append((t, tot[0], tot[1], tot[2], tot[3], S, smin))

    def record_functionals(interior, t):
        f = diag.functionals([interior], 1, gas, grid.dx, grid.dy)
        functional_rows.append((t, f.S, f.E1, f.E2, f.DE))

    def write_snapshot(interior, t, index):
        name = f"snap_{index:04d}.field"
        write_field(out / name, interior, {**meta, "time": t})
        manifest.record(out / name)
        snap_rows.append((index, t, name))

    record_totals(fld.interior, 0.0)
    record_functionals(fld.interior, 0.0)
    write_snapshot(fld.interior, 0.0, 0)

    t = 0.0
    status, failure = "ok", None
    snap_index = 1
    try:
        for t_next in events[events > 0.0]:
            def on_step(f, tt, dt):
                record_totals(f.interior, tt)
                averager.add(f.interior, dt)
            t = advance(fld, rhs, gas, cfl, t, float(t_next), on_step=on_step)
            record_functionals(fld.interior, t)
            write_snapshot(fld.interior, t, snap_index)
            snap_index += 1
    except (BlowUpError, InvalidStateError) as err:
        status = "blowup"
        failure = {"time": t, "error": str(err),
                   "cell": [int(c) for c in (getattr(err, "cell", None) or [])]}
        (out / "failure.json").write_text(json.dumps(failure, indent=2) + "\n")
        manifest.record(out / "failure.json")

    write_field(out / "final.field", fld.interior, {**meta, "time": t})
    manifest.record(out / "final.field")
    if status == "ok":
        tavg = averager.finalize(t_final)
        write_field(out / "time_avg.field", tavg,
                    {**meta, "time": t_final, "kind": "time_avg"})
        manifest.record(out / "time_avg.field")

    _write_csv(out / "totals.csv",
               ["t", "mass", "mom_x", "mom_y", "energy", "entropy", "min_s"],
               totals_rows)
    manifest.record(out / "totals.csv")
    _write_csv(out / "functionals.csv", ["t", "S_1", "E1_1", "E2_1", "DE_1"],
               functional_rows)
    manifest.record(out / "functionals.csv")
    _write_csv(out / "snapshots.csv", ["index", "t", "file"], snap_rows)
    manifest.record(out / "snapshots.csv")
    manifest.write({"config": cfg.to_dict(), "status": status,
                    "t_reached": t})
    return RunResult(status, t, out, failure)


# ----------------------------------------------------------------------------
# order families
# ----------------------------------------------------------------------------

def _member_config(cfg, r):
    return RunConfig(problem=cfg.problem, flux=cfg.flux, order=r, n=cfg.n,
                     out=Path(cfg.out) / f"r{r}", cfl=cfg.cfl,
                     t_final=cfg.t_final, snapshots=cfg.snapshots,
                     subdomains=cfg.subdomains, samples=cfg.samples)


def _run_member(args):
    cfg, r = args
    res = run(_member_config(cfg, r))
    return r, res.status, res.t_reached


def worker_count(n_tasks):
    """Worker cap: DW_THREADS if set, else the machine's CPU count."""
    env = os.environ.get("DW_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(n_tasks, cap))


def run_family(cfg, parallel=True):
    """Run all six orders of one family, then aggregate order diagnostics.

    ``cfg.order`` is ignored; members land in out/r{r}. A failed member is
    reported in the family report and the cross-order aggregates are
    skipped.
    """
    orders = sorted(ORDER_INDEX)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, r) for r in orders]
    nwork = worker_count(len(tasks)) if parallel else 1
    if nwork > 1:
        with ProcessPoolExecutor(max_workers=nwork) as pool:
            statuses = dict((r, (s, t)) for r, s, t in pool.map(_run_member, tasks))
    else:
        statuses = dict((r, (s, t)) for r, s, t in map(_run_member, tasks))

    report = {"config": cfg.to_dict(), "members": {
        str(r): {"status": statuses[r][0], "t_reached": statuses[r][1]}
        for r in orders}}
    if any(statuses[r][0] != "ok" for r in orders):
        report["aggregates"] = "skipped: member failure"
        (out / "family_report.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n")
        return report

    report.update(aggregate_family(out, cfg))
    (out / "family_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report


def aggregate_family(out, cfg, gas=None):
    """Cross-order aggregates from the member artifacts in out/r{r}."""
    gas = gas or GasModel(GAMMA_DEFAULT)
    orders = sorted(ORDER_INDEX)
    out = Path(out)
    grid = Grid(cfg.n, cfg.n, halo_width(1))
    dx = dy = 1.0 / cfg.n
    meta = {"problem": cfg.problem, "family": cfg.flux, "gamma": gas.gamma}

    finals = []
    for r in orders:
        arr, m = read_field(out / f"r{r}" / "final.field")
        finals.append(arr)
        t_final = m["time"]

    # order averages of (rho, m, S) and the error table against n = 6
    averages = [diag.cesaro_average(finals, n, gas) for n in range(1, 7)]
    for n, avg in enumerate(averages, start=1):
        write_field(out / f"avg_state_n{n}.field", avg,
                    {**meta, "r": n, "time": t_final, "kind": "order_avg"})
    errors = diag.kconv_errors([a[..., 0] for a in averages], dx, dy)
    _write_csv(out / "errors.csv", ["n", "l1_error"],
               [(n, e) for n, e in enumerate(errors, start=1)])
    C, alpha = diag.powerlaw_fit(errors)

    # density histograms per configured subdomain; a rectangle that holds
    # no cell centre at this resolution is reported, not fatal
    pdf_report = []
    for i, rect in enumerate(cfg.subdomains, start=1):
        try:
            members, avgs = diag.family_pdfs([f[..., 0] for f in finals],
                                             grid, rect)
        except ValueError as err:
            pdf_report.append({"rect": list(rect), "error": str(err)})
            continue
        for r, p in zip(orders, members):
            _write_pdf_csv(out / f"pdf{i}_r{r}.csv", p)
        for n, p in enumerate(avgs, start=1):
            _write_pdf_csv(out / f"pdf{i}_avg_n{n}.csv", p)
        pdf_report.append({"rect": list(rect),
                           "rho_min": members[0].rho_min,
                           "rho_max": members[0].rho_max})

    # cross-order functional series on the shared sample grid
    sample_times = cfg.sample_times()
    snap_index = {r: _member_snapshots(out / f"r{r}") for r in orders}
    series = {n: [] for n in range(1, 7)}
    for t in sample_times:
        snaps = []
        for r in orders:
            name = _lookup_snapshot(snap_index[r], t)
            if name is None:
                raise FieldFileError(f"member r{r} has no snapshot at t={t}")
            arr, _ = read_field(out / f"r{r}" / name)
            snaps.append(arr)
        for n in range(1, 7):
            f = diag.functionals(snaps, n, gas, dx, dy)
            series[n].append((t, f.S, f.E1, f.E2, f.DE))

    time_avgs = {}
    for n in range(1, 7):
        _write_csv(out / f"functionals_n{n}.csv",
                   ["t", f"S_{n}", f"E1_{n}", f"E2_{n}", f"DE_{n}"], series[n])
        arr = np.asarray(series[n])
        dts = np.diff(arr[:, 0])
        window = arr[-1, 0] - arr[0, 0]
        time_avgs[str(n)] = {
            key: float((arr[1:, col] * dts).sum() / window)
            for col, key in ((1, "S"), (2, "E1"), (3, "E2"), (4, "DE"))
        }

    return {"t_final": t_final,
            "errors": errors,
            "fit": {"C": C, "alpha": alpha},
            "pdfs": pdf_report,
            "functional_time_averages": time_avgs}


def _member_snapshots(member_dir):
    """(time, filename) pairs from a member's snapshot index."""
    rows = []
    with open(Path(member_dir) / "snapshots.csv", newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append((float(rec["t"]), rec["file"]))
    return rows


def _lookup_snapshot(snapshots, t):
    for tt, name in snapshots:
        if abs(tt - t) <= 1e-12 + 1e-9 * abs(t):
            return name
    return None


def _write_pdf_csv(path, pdf):
    with open(path, "w", newline="") as fh:
        fh.write(f"# rho_min={pdf.rho_min!r} rho_max={pdf.rho_max!r} "
                 f"degenerate={pdf.degenerate}\n")
        w = csv.writer(fh)
        w.writerow(["bin_center", "sigma"])
        w.writerows(zip(pdf.bin_centers(), pdf.sigma))
