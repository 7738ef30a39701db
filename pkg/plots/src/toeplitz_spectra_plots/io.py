"""Readers for the toeplitz-spectra output formats.

Only the documented file schemas are consumed here; the plots package never
imports the computation library.  A version mismatch in a file header is
worth a warning but not an error -- the schemas are stable.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field

import numpy as np

EXPECTED_VERSION = "0.1.0"
_HEADER_RE = re.compile(r"^# toeplitz-spectra v(\S+)\s*(.*)$")


class SchemaError(ValueError):
    """An input file does not match the documented schema."""


def _check_version(version, path):
    if version != EXPECTED_VERSION:
        warnings.warn(
            f"{path}: written by toeplitz-spectra v{version}, "
            f"reader targets v{EXPECTED_VERSION}; continuing",
            stacklevel=3,
        )


@dataclass
class Table:
    """A gamma table: the header line, config line, and the sampled values."""

    path: str
    header: str
    config: str
    grid: np.ndarray
    values: np.ndarray
    flags: np.ndarray
    meta: dict = field(default_factory=dict)


def read_table(path) -> Table:
    """Parse a CSV table written by the ``gamma`` command."""
    header, config = "", ""
    grid, re_part, im_part, flags = [], [], [], []
    saw_columns = False
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            m = _HEADER_RE.match(line)
            if m:
                _check_version(m.group(1), path)
                header = m.group(2)
                continue
            if line.startswith("# config"):
                config = line[len("# config"):].strip()
                continue
            if line.startswith("#"):
                continue
            if line.startswith("grid_point"):
                saw_columns = True
                continue
            cells = line.split(",")
            if len(cells) != 4:
                raise SchemaError(f"{path}: expected 4 columns, got {line!r}")
            grid.append(float(cells[0]))
            re_part.append(float(cells[1]))
            im_part.append(float(cells[2]))
            flags.append(int(cells[3]))
    if not saw_columns or not grid:
        raise SchemaError(f"{path}: not a gamma table (missing column header or rows)")
    meta = dict(kv.split("=", 1) for kv in header.split() if "=" in kv)
    return Table(str(path), header, config, np.array(grid),
                 np.array(re_part) + 1j * np.array(im_part),
                 np.array(flags, dtype=int), meta)


def read_report(path) -> dict:
    """Parse a JSON report from the ``verify`` or ``classify`` commands."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("library") != "toeplitz-spectra":
        raise SchemaError(f"{path}: not a toeplitz-spectra report")
    _check_version(doc.get("version", "?"), path)
    return doc
