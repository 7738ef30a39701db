#!/usr/bin/env python3
"""Which bounded functions of the generator belong to the Toeplitz algebra?

Membership is equivalent to slow oscillation in a geometry-specific metric.
The script runs the sampled modulus-of-continuity analysis on the standard
calibration examples: two that violate the criterion and two spectral
functions of genuine (distributional) symbols that satisfy it.
"""

import numpy as np

from toeplitz_spectra import (
    Geometry,
    OscillationMetric,
    builtin,
    builtin_calibration,
    gamma_parabolic,
    oscillation_modulus,
)

CASES = [
    ("reflection sequence (-1)^k", builtin_calibration("reflection"),
     OscillationMetric.ADJACENT_RATIO),
    ("log-phase drifter on R_+", builtin_calibration("hmv"), OscillationMetric.LOG),
    ("angular point-mass spectral function", builtin_calibration("hyp_delta"),
     OscillationMetric.ARCSINH),
    ("vertical point-mass spectral function",
     gamma_parabolic(builtin("delta", Geometry.PARABOLIC, loc=1.0), 0.0,
                     np.geomspace(1e-3, 1e4, 513)),
     OscillationMetric.LOG),
]

for text, phi, metric in CASES:
    report = oscillation_modulus(phi, metric)
    print(f"{text}  [{metric.value} metric]")
    for delta, m in zip(report.delta_grid, report.modulus):
        print(f"    omega({delta:4.2f}) = {m:.4f}")
    print(f"    verdict: {report.verdict}")
    if report.witness:
        t, t2, jump = report.witness
        print(f"    witness pair: t = {t:.4g}, t' = {t2:.4g}, |phi(t) - phi(t')| = {jump:.4f}")
    print()
