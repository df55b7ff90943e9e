"""The four figure kinds rendered from solver output files."""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import read_field, read_pdf_csv, read_error_table, \
    read_functional_series, FormatError


def plot_density(field_path, out_path, vmin=None, vmax=None):
    """Pseudocolor density map over the unit square."""
    data, meta = read_field(field_path)
    rho = data[:, :, 0]
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    im = ax.imshow(rho, origin="lower", extent=(0, 1, 0, 1), cmap="jet",
                   vmin=vmin, vmax=vmax, interpolation="nearest")
    fig.colorbar(im, ax=ax)
    title = " ".join(f"{k}={meta[k]}" for k in ("problem", "family", "r", "time")
                     if k in meta)
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_pdf(pdf_path, out_path):
    """Bar chart of a density histogram."""
    centers, sigma = read_pdf_csv(pdf_path)
    width = centers[1] - centers[0] if len(centers) > 1 else 1.0
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.bar(centers, sigma, width=0.9 * width, color="tab:blue")
    ax.set_xlabel("density")
    ax.set_ylabel("sigma")
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_error_decay(errors_path, out_path):
    """Log-log error-vs-n plot with the fitted power law overlaid.

    Returns the fitted exponent.
    """
    n, err = read_error_table(errors_path)
    if (err <= 0).any() or (n <= 0).any():
        raise FormatError(f"{errors_path}: log axes need positive values")
    alpha, lnC = np.polyfit(np.log(n), np.log(err), 1)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.loglog(n, err, "o", label="measured")
    ax.loglog(n, np.exp(lnC) * n**alpha, "--",
              label=f"{np.exp(lnC):.4g} n^{alpha:+.2f}")
    ax.set_xlabel("n")
    ax.set_ylabel("L1 error")
    ax.legend()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return float(alpha)


def plot_series(functional_path, out_path):
    """Two panels: averaged entropy and energy defect over time."""
    names, data = read_functional_series(functional_path)
    cols = {name: data[:, i] for i, name in enumerate(names)}
    s_col = next((c for c in names if c.startswith("S_")), None)
    de_col = next((c for c in names if c.startswith("DE_")), None)
    if s_col is None or de_col is None:
        raise FormatError(f"{functional_path}: missing S_n / DE_n columns")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.plot(cols["t"], cols[s_col])
    ax1.set_xlabel("t")
    ax1.set_ylabel(s_col)
    ax2.plot(cols["t"], cols[de_col])
    ax2.set_xlabel("t")
    ax2.set_ylabel(de_col)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
