"""Analysis pipeline: order averages, time averages, density histograms,
L1 errors with power-law fits, and entropy/energy functionals.

Solutions computed with increasing scheme order are indexed ell = 1..6 in
the fixed order map {1: 1, 2: 2, 3: 3, 5: 4, 7: 5, 9: 6}; running means
over the first n of them are the order (Cesaro) averages. Averaging acts
on (rho, mx, my, S), with S the discrete entropy of each evolved state;
energies of averaged states are recovered from the averaged entropy.
"""

import numpy as np
from dataclasses import dataclass

from .state import RHO, MX, MY, ENE, entropy_density, specific_entropy, \
    energy_from_entropy

# order r -> family slot ell
ORDER_INDEX = {1: 1, 2: 2, 3: 3, 5: 4, 7: 5, 9: 6}
INDEX_ORDER = {v: k for k, v in ORDER_INDEX.items()}

PDF_BINS = 30


def _as_stack(fields):
    arrs = [np.asarray(f, float) for f in fields]
    shape = arrs[0].shape
    for a in arrs:
        if a.shape != shape:
            raise ValueError("fields in an order family must share one grid")
    return np.stack(arrs)


def cesaro_average(fields, n, gas):
    """Mean of the first n members as a (rho, mx, my, S) state array.

    The entropy slot is the mean of each member's entropy density, not the
    entropy of the mean.
    """
    stack = _as_stack(fields)
    if not 1 <= n <= stack.shape[0]:
        raise ValueError(f"n={n} outside the family of {stack.shape[0]}")
    sub = stack[:n]
    out = sub.mean(axis=0)
    out[..., ENE] = entropy_density(sub, gas).mean(axis=0)
    return out


def mean_energy(fields, n):
    """Pointwise mean of the evolved total energies of the first n members."""
    stack = _as_stack(fields)
    return stack[:n, ..., ENE].mean(axis=0)


@dataclass(frozen=True)
class FunctionalSample:
    """Entropy/energy functionals of one order family at one instant."""

    S: float
    E1: float
    E2: float
    DE: float


def functionals(fields, n, gas, dx, dy):
    """(S^n, E1^n, E2^n, DE^n) of the first n members.

    S^n integrates the averaged entropy; E1^n the averaged energy; E2^n the
    energy of the averaged (rho, m, S) state; DE^n the L1 gap between the
    averaged energy and the energy of the averages.
    """
    avg = cesaro_average(fields, n, gas)
    Ebar = mean_energy(fields, n)
    Eavg = energy_from_entropy(avg[..., RHO], avg[..., MX], avg[..., MY],
                               avg[..., ENE], gas)
    w = dx * dy
    return FunctionalSample(
        S=float(avg[..., ENE].sum() * w),
        E1=float(Ebar.sum() * w),
        E2=float(Eavg.sum() * w),
        DE=float(np.abs(Ebar - Eavg).sum() * w),
    )


def min_specific_entropy(U, gas):
    """min over cells of S/rho; the minimum-entropy-principle monitor."""
    return float(specific_entropy(np.asarray(U, float), gas).min())


class TimeAverage:
    """Left-Riemann accumulator for (1/T) * integral of a field over time."""

    def __init__(self):
        self._sum = None
        self._covered = 0.0

    def add(self, values, dt):
        if dt <= 0:
            raise ValueError("dt must be positive")
        v = np.asarray(values, float)
        if self._sum is None:
            self._sum = dt * v
        else:
            self._sum = self._sum + dt * v
        self._covered += dt
        return self

    def finalize(self, T, rtol=1e-10):
        if T <= 0:
            raise ValueError("averaging window must have positive length")
        if abs(self._covered - T) > rtol * max(1.0, T):
            raise ValueError(f"accumulated {self._covered!r} of window {T!r}")
        return self._sum / T


# ----------------------------------------------------------------------------
# density histograms over small subdomains
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class YoungPDF:
    """Normalized 30-bin histogram of density samples over a subdomain."""

    rho_min: float
    rho_max: float
    sigma: np.ndarray  # (PDF_BINS,)
    degenerate: bool = False

    @property
    def bin_width(self):
        return (self.rho_max - self.rho_min) / PDF_BINS

    def bin_centers(self):
        edges = np.linspace(self.rho_min, self.rho_max, PDF_BINS + 1)
        return 0.5 * (edges[:-1] + edges[1:])


def subdomain_density(interior_rho, grid, rect):
    """Density samples whose cell centres fall inside [x0,x1] x [y0,y1]."""
    x0, x1, y0, y1 = rect
    xs, ys = grid.xs(), grid.ys()
    jmask = (xs >= x0) & (xs <= x1)
    kmask = (ys >= y0) & (ys <= y1)
    if not jmask.any() or not kmask.any():
        raise ValueError(f"subdomain {rect} contains no cell centres")
    return np.asarray(interior_rho, float)[np.ix_(kmask, jmask)].ravel()


def young_pdf(values, vrange=None):
    """30-bin histogram scaled so bin_width * sum(sigma) = 1.

    The top edge is closed (the maximum lands in the last bin). A constant
    sample set yields a degenerate single-spike histogram with zero width.
    """
    v = np.asarray(values, float).ravel()
    if v.size == 0:
        raise ValueError("empty subdomain")
    lo, hi = (float(v.min()), float(v.max())) if vrange is None else map(float, vrange)
    if hi < lo:
        raise ValueError("empty histogram range")
    if hi == lo:
        sigma = np.zeros(PDF_BINS)
        sigma[0] = 1.0
        return YoungPDF(lo, hi, sigma, degenerate=True)
    width = (hi - lo) / PDF_BINS
    idx = np.clip(((v - lo) / width).astype(int), 0, PDF_BINS - 1)
    counts = np.bincount(idx, minlength=PDF_BINS).astype(float)
    sigma = counts / (width * counts.sum())
    return YoungPDF(lo, hi, sigma)


def pdf_average(pdfs, n=None):
    """Mean of histograms sharing bin edges; stays normalized."""
    if n is None:
        n = len(pdfs)
    if not 1 <= n <= len(pdfs):
        raise ValueError(f"n={n} outside the list of {len(pdfs)}")
    sel = pdfs[:n]
    first = sel[0]
    for p in sel[1:]:
        if (p.rho_min, p.rho_max, p.degenerate) != \
                (first.rho_min, first.rho_max, first.degenerate):
            raise ValueError("histograms do not share bin edges")
    sigma = np.mean([p.sigma for p in sel], axis=0)
    return YoungPDF(first.rho_min, first.rho_max, sigma, first.degenerate)


def family_pdfs(rho_fields, grid, rect):
    """Per-member histograms on shared union-range edges, plus averages.

    Returns (members, averages) where averages[n-1] is the mean over the
    first n members.
    """
    samples = [subdomain_density(r, grid, rect) for r in rho_fields]
    lo = min(s.min() for s in samples)
    hi = max(s.max() for s in samples)
    members = [young_pdf(s, vrange=(lo, hi)) for s in samples]
    averages = [pdf_average(members, n) for n in range(1, len(members) + 1)]
    return members, averages


# ----------------------------------------------------------------------------
# errors of the order averages
# ----------------------------------------------------------------------------

def l1_distance(f, g, dx, dy):
    """Cellwise L1 distance dx*dy*sum|f - g| of two interior fields."""
    a, b = np.asarray(f, float), np.asarray(g, float)
    if a.shape != b.shape:
        raise ValueError(f"grid mismatch {a.shape} vs {b.shape}")
    return float(dx * dy * np.abs(a - b).sum())


def powerlaw_fit(errors):
    """Least-squares fit errors ~ C * n^alpha over n = 1..len(errors)."""
    e = np.asarray(errors, float)
    if (e <= 0).any():
        raise ValueError("power-law fit requires positive errors")
    n = np.arange(1, e.size + 1)
    alpha, lnC = np.polyfit(np.log(n), np.log(e), 1)
    return float(np.exp(lnC)), float(alpha)


def kconv_errors(rho_averages, dx, dy):
    """L1 distances of the first five order averages from the sixth."""
    ref = rho_averages[-1]
    return [l1_distance(r, ref, dx, dy) for r in rho_averages[:-1]]
