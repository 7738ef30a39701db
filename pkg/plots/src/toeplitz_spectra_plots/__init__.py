"""Figure generation for toeplitz-spectra output files (CSV tables and JSON
reports); consumes only the documented file formats."""

__version__ = "0.1.0"

from .figures import KINDS, FigureSpec, RenderResult, render
from .io import SchemaError, Table, read_report, read_table
