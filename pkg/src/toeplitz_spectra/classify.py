"""Oscillation analysis: does a spectral function lie in the algebra?

Membership of phi(generator) in the Toeplitz-generated C*-algebra is
characterized by slow oscillation of phi in a geometry-specific metric:

* elliptic: sequences on Z_+ with |phi_j - phi_k| -> 0 as (j+1)/(k+1) -> 1,
  i.e. uniform continuity in d(j, k) = |ln(j+1) - ln(k+1)|;
* parabolic: uniform continuity on R_+ in the logarithmic metric
  d(t, t') = |ln t - ln t'|;
* hyperbolic: uniform continuity on R in d(t, t') = |arcsinh t - arcsinh t'|.

A finite sample can only estimate the modulus of continuity
omega(delta) = sup { |phi(t) - phi(t')| : d(t, t') <= delta }, so verdicts
are threshold heuristics, never proofs; the witness pair realizing the
modulus is always reported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InsufficientSamplingError
from .spectra import SpectralFunction
from .symbols import Geometry

__all__ = [
    "OscillationMetric",
    "OscillationReport",
    "GridFunction",
    "oscillation_modulus",
    "builtin_calibration",
    "DEFAULT_DELTA_GRID",
    "DEFAULT_THRESHOLD",
]

DEFAULT_DELTA_GRID = (0.05, 0.1, 0.2, 0.4, 0.8)
DEFAULT_THRESHOLD = 0.05


class OscillationMetric(enum.Enum):
    """Metric in which slow oscillation is measured."""

    ADJACENT_RATIO = "adjacent"  # Z_+, d = |ln(j+1) - ln(k+1)|
    LOG = "log"                  # R_+, d = |ln t - ln t'|
    ARCSINH = "arcsinh"          # R,   d = |arcsinh t - arcsinh t'|

    def coordinate(self, grid):
        grid = np.asarray(grid, dtype=float)
        if self is OscillationMetric.ADJACENT_RATIO:
            if np.any(grid < 0):
                raise DomainError("adjacent-ratio metric lives on Z_+")
            return np.log(grid + 1.0)
        if self is OscillationMetric.LOG:
            if np.any(grid <= 0):
                raise DomainError("logarithmic metric lives on t > 0")
            return np.log(grid)
        return np.arcsinh(grid)

    @classmethod
    def for_geometry(cls, geometry: Geometry):
        return {
            Geometry.ELLIPTIC: cls.ADJACENT_RATIO,
            Geometry.PARABOLIC: cls.LOG,
            Geometry.HYPERBOLIC: cls.ARCSINH,
        }[geometry]

    @classmethod
    def parse(cls, text):
        for m in cls:
            if m.value == str(text).strip().lower():
                return m
        raise DomainError(f"unknown metric {text!r}; expected adjacent, log or arcsinh")


@dataclass(frozen=True)
class GridFunction:
    """A plain sampled function, for inputs that are not SpectralFunctions."""

    label: str
    grid: np.ndarray
    values: np.ndarray


@dataclass
class OscillationReport:
    metric: OscillationMetric
    delta_grid: tuple
    modulus: tuple          # omega(delta) per delta; NaN when no pair sampled
    verdict: str            # consistent-with-membership | violates | inconclusive
    witness: tuple          # (t, t', |phi(t)-phi(t')|) realizing the decisive modulus
    threshold: float
    label: str = ""


def _sampled(phi):
    if isinstance(phi, SpectralFunction):
        return phi.grid, phi.values, phi.label
    if isinstance(phi, GridFunction):
        return phi.grid, phi.values, phi.label
    grid, values = phi
    return np.asarray(grid), np.asarray(values), ""


def _check_span(metric, grid):
    if len(grid) < 64:
        raise InsufficientSamplingError(f"need >= 64 samples, got {len(grid)}")
    if metric is OscillationMetric.LOG:
        g = np.asarray(grid, dtype=float)
        if np.max(g) / np.min(g) < 1e4:
            raise InsufficientSamplingError("logarithmic-metric samples must span >= 4 decades")
    if metric is OscillationMetric.ARCSINH:
        if np.max(np.abs(np.asarray(grid, dtype=float))) < 1e4:
            raise InsufficientSamplingError("arcsinh-metric samples must reach |eta| >= 1e4")


def oscillation_modulus(phi, metric: OscillationMetric, delta_grid=None,
                        threshold=DEFAULT_THRESHOLD) -> OscillationReport:
    """Sampled modulus of continuity of phi in the given metric.

    For each delta the modulus is the max of |phi(t) - phi(t')| over all
    sampled pairs with metric distance <= delta.  Verdict: ``violates`` when
    the modulus at the smallest resolvable delta exceeds the threshold,
    ``consistent-with-membership`` when it stays below, ``inconclusive`` when
    no pair is that close.
    """
    grid, values, label = _sampled(phi)
    _check_span(metric, grid)
    deltas = tuple(sorted(delta_grid if delta_grid is not None else DEFAULT_DELTA_GRID))
    if not deltas or deltas[0] <= 0:
        raise DomainError("delta grid must contain positive values")

    coord = metric.coordinate(grid)
    order = np.argsort(coord)
    coord = coord[order]
    vals = np.asarray(values)[order]
    grid_sorted = np.asarray(grid)[order]

    modulus = []
    witnesses = []
    n = len(coord)
    for delta in deltas:
        best = -1.0
        best_pair = None
        hi = np.searchsorted(coord, coord + delta, side="right")
        for i in range(n - 1):
            j_end = hi[i]
            if j_end <= i + 1:
                continue
            diffs = np.abs(vals[i + 1:j_end] - vals[i])
            j_rel = int(np.argmax(diffs))
            if diffs[j_rel] > best:
                best = float(diffs[j_rel])
                best_pair = (float(grid_sorted[i]), float(grid_sorted[i + 1 + j_rel]), best)
        modulus.append(best if best >= 0 else math.nan)
        witnesses.append(best_pair)

    first_valid = next((i for i, m in enumerate(modulus) if not math.isnan(m)), None)
    if first_valid is None:
        verdict, witness = "inconclusive", None
    else:
        m0 = modulus[first_valid]
        witness = witnesses[first_valid]
        verdict = "violates" if m0 > threshold else "consistent-with-membership"

    return OscillationReport(metric, deltas, tuple(modulus), verdict, witness,
                             threshold, label)


def builtin_calibration(name: str) -> GridFunction:
    """Closed-form calibration functions on their documented default grids.

    * ``reflection``: phi(k) = (-1)^k on k = 0..10^4 (bounded, oscillates at
      adjacent integers arbitrarily far out);
    * ``hmv``: eta/(eta+1) * exp(i ln^2(eta+1)/(3 pi)) on a log grid
      [1, 10^6] (bounded, but its phase drifts faster than the log metric);
    * ``hyp_delta``: the angular point-mass spectral function at lam = 0,
      eta/sinh(pi eta), on an arcsinh-uniform grid reaching |eta| = 1.1e4.
    """
    if name == "reflection":
        k = np.arange(0, 10_001)
        return GridFunction("reflection sequence (-1)^k", k, (-1.0) ** k)
    if name == "hmv":
        eta = np.geomspace(1.0, 1e6, 4096)
        vals = eta / (eta + 1.0) * np.exp(1j * np.log(eta + 1.0) ** 2 / (3.0 * math.pi))
        return GridFunction("eta/(eta+1) exp(i ln^2(eta+1)/(3 pi))", eta, vals)
    if name == "hyp_delta":
        s = np.linspace(-math.asinh(1.1e4), math.asinh(1.1e4), 4097)
        eta = np.sinh(s)
        # eta/sinh(pi eta) through decaying exponentials only (no overflow)
        small = np.abs(eta) < 1e-12
        den = np.where(small, 1.0, 1.0 - np.exp(-2.0 * math.pi * np.abs(eta)))
        vals = np.where(small, 1.0 / math.pi,
                        2.0 * np.abs(eta) * np.exp(-math.pi * np.abs(eta)) / den)
        return GridFunction("angular point mass at pi/2, lam = 0", eta, vals)
    raise DomainError(f"unknown calibration {name!r}; known: reflection, hmv, hyp_delta")
