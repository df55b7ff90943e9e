"""Figure rendering for dweuler output files."""

from .plots import plot_density, plot_pdf, plot_error_decay, plot_series
from .io import read_field, read_pdf_csv, read_error_table, read_functional_series, FormatError
