"""Readers for the solver's documented output formats.

These parse the on-disk formats directly (one-line text header plus
little-endian float64 payload for fields; small CSVs for histograms,
error tables and functional series). No solver internals are imported.
"""

import csv
import numpy as np

FIELD_MAGIC = "dwfield"
FIELD_VERSION = "1"


class FormatError(ValueError):
    """Input file does not match the documented format."""


def read_field(path):
    """Field file -> (data[ny, nx, 4], meta dict)."""
    with open(path, "rb") as fh:
        header = fh.readline()
        payload = fh.read()
    try:
        parts = header.decode("ascii").split()
    except UnicodeDecodeError as err:
        raise FormatError(f"{path}: bad header ({err})") from None
    if len(parts) < 2 or parts[0] != FIELD_MAGIC:
        raise FormatError(f"{path}: not a {FIELD_MAGIC} file")
    if parts[1] != FIELD_VERSION:
        raise FormatError(f"{path}: unsupported version {parts[1]}")
    meta = dict(item.split("=", 1) for item in parts[2:] if "=" in item)
    try:
        nx, ny = int(meta["nx"]), int(meta["ny"])
    except (KeyError, ValueError):
        raise FormatError(f"{path}: header lacks usable nx/ny") from None
    if len(payload) != nx * ny * 4 * 8:
        raise FormatError(f"{path}: payload size mismatch")
    data = np.frombuffer(payload, dtype="<f8").reshape(ny, nx, 4)
    return data, meta


def read_pdf_csv(path):
    """Histogram CSV -> (bin_centers, sigma); leading '#' lines skipped."""
    centers, sigma = [], []
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh
                                      if not line.startswith("#"))]
    if not rows or rows[0][:2] != ["bin_center", "sigma"]:
        raise FormatError(f"{path}: expected bin_center,sigma columns")
    for row in rows[1:]:
        if len(row) != 2:
            raise FormatError(f"{path}: malformed row {row}")
        centers.append(float(row[0]))
        sigma.append(float(row[1]))
    if not centers:
        raise FormatError(f"{path}: no histogram rows")
    return np.asarray(centers), np.asarray(sigma)


def read_error_table(path):
    """errors.csv -> (n values, L1 errors)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["n", "l1_error"]:
        raise FormatError(f"{path}: expected n,l1_error columns")
    body = [(float(a), float(b)) for a, b in rows[1:]]
    if not body:
        raise FormatError(f"{path}: empty error table")
    arr = np.asarray(body)
    return arr[:, 0], arr[:, 1]


def read_functional_series(path):
    """functionals CSV -> (column names, data array)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2 or rows[0][0] != "t":
        raise FormatError(f"{path}: expected a t,... series")
    names = rows[0]
    data = np.asarray([[float(v) for v in row] for row in rows[1:]])
    if data.shape[1] != len(names):
        raise FormatError(f"{path}: ragged series")
    return names, data
